#include "rispaces/kfunctional.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "json_keys.hpp"
#include "nlohmann/json.hpp"
#include "rispaces/error.hpp"

namespace rispaces {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::BadExponent, what);
}

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

std::string num(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << x;
  return os.str();
}

// Closed-form fundamental-function equivalent t^a (1 - log t)^b, when the space has one.
std::optional<LogWeight> fundamental_weight(const SpaceSpec& s) {
  if (const auto* x = std::get_if<Lebesgue>(&s)) return LogWeight{inv(x->p), 0.0};
  if (const auto* x = std::get_if<LorentzZygmund>(&s)) return LogWeight{1.0 / x->p, x->alpha};
  if (const auto* x = std::get_if<Grand>(&s)) return LogWeight{1.0 / x->p, -x->alpha / x->p};
  if (const auto* x = std::get_if<Small>(&s)) return LogWeight{1.0 / x->p, x->alpha / x->p};
  return std::nullopt;
}

// (f chi_(x,1))_*: the part of f beyond x slid down to the origin.
StepRearrangement shifted_tail(const StepRearrangement& f, double x) {
  if (x <= 0.0) return f;
  if (x >= 1.0) return StepRearrangement::zero();
  std::vector<double> breaks{0.0}, values;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.hi(i) <= x) continue;
    double b = f.hi(i) - x;
    if (b <= breaks.back()) continue;
    breaks.push_back(b);
    values.push_back(f.values()[i]);
  }
  if (breaks.back() < 1.0) {
    breaks.push_back(1.0);
    values.push_back(0.0);
  }
  return merge_equal(StepRearrangement(std::move(breaks), std::move(values)));
}

// ess sup of f over (x, 1)
double value_right_of(const StepFunction& f, double x) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.hi(i) > x) return f.values()[i];
  return 0.0;
}

double number(const nlohmann::json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    fail(ErrorKind::BadConfig, "expected a number or \"inf\", got " + s);
  }
  return v.get<double>();
}

// Step approximation of w on the t-range given by [u_from, u_to] in u (u_to may
// be followed by an innermost panel down to 0), rearranged.
StepRearrangement sampled_weight(const std::function<double(double)>& w_u, double u_from, double u_to, int panels,
                                 bool innermost) {
  std::vector<Sample> samples;
  const double h = (u_to - u_from) / panels;
  double covered = 0.0;
  for (int j = 0; j < panels; ++j) {
    double ua = u_from + h * j, ub = ua + h;
    double width = t_of(ua) - t_of(ub);
    samples.push_back({w_u(ua + 0.5 * h), width});
    covered += width;
  }
  if (innermost) {
    double width = t_of(u_to);
    samples.push_back({w_u(u_to + 0.5 * h), width});
    covered += width;
  }
  double rest = 1.0 - covered;
  if (rest > 0.0) samples.push_back({0.0, rest});
  // widths telescope to 1 up to rounding; renormalize so the weight check is exact
  double total = 0.0;
  for (const auto& s : samples) total += s.weight;
  for (auto& s : samples) s.weight /= total;
  return rearrange_from_samples(samples);
}

}  // namespace

void validate_couple(const CoupleSpec& c) {
  if (const auto* x = std::get_if<LpLq>(&c)) {
    require(x->p >= 1.0 && std::isfinite(x->p) && x->q > x->p, "Lebesgue couple needs 1 <= p < q <= inf");
  } else if (const auto* x = std::get_if<GrandLq>(&c)) {
    require(x->p > 1.0 && x->q > x->p && std::isfinite(x->q) && x->alpha > 0.0, "grand couple needs 1 < p < q, alpha > 0");
  } else if (const auto* x = std::get_if<GrandGrand>(&c)) {
    require(x->p > 1.0 && x->q > x->p && std::isfinite(x->q) && x->alpha > 0.0, "grand couple needs 1 < p < q, alpha > 0");
  } else if (const auto* x = std::get_if<SmallSmall>(&c)) {
    require(x->p > 1.0 && x->q > x->p && std::isfinite(x->q), "small couple needs 1 < p < q < inf");
  } else if (const auto* x = std::get_if<GrandSmallSameP>(&c)) {
    require(x->p > 1.0 && std::isfinite(x->p), "same-p couple needs 1 < p < inf");
  } else {
    const auto& g = std::get<GeneralCouple>(c);
    validate_space(g.x0);
    validate_space(g.x1);
  }
}

std::string couple_label(const CoupleSpec& c) {
  std::ostringstream os;
  if (const auto* x = std::get_if<LpLq>(&c)) {
    os << "lp_lq(p=" << num(x->p) << ",q=" << num(x->q) << ")";
  } else if (const auto* x = std::get_if<GrandLq>(&c)) {
    os << "grand_lq(p=" << num(x->p) << ",q=" << num(x->q) << ",alpha=" << num(x->alpha) << ")";
  } else if (const auto* x = std::get_if<GrandGrand>(&c)) {
    os << "grand_grand(p=" << num(x->p) << ",q=" << num(x->q) << ",alpha=" << num(x->alpha) << ")";
  } else if (const auto* x = std::get_if<SmallSmall>(&c)) {
    os << "small_small(p=" << num(x->p) << ",q=" << num(x->q) << ")";
  } else if (const auto* x = std::get_if<GrandSmallSameP>(&c)) {
    os << "grand_small(p=" << num(x->p) << ")";
  } else {
    const auto& g = std::get<GeneralCouple>(c);
    os << "general(" << space_label(g.x0) << "," << space_label(g.x1) << ")";
  }
  return os.str();
}

SpaceSpec couple_x0(const CoupleSpec& c) {
  if (const auto* x = std::get_if<LpLq>(&c)) return Lebesgue{x->p};
  if (const auto* x = std::get_if<GrandLq>(&c)) return Grand{x->p, x->alpha};
  if (const auto* x = std::get_if<GrandGrand>(&c)) return Grand{x->p, x->alpha};
  if (const auto* x = std::get_if<SmallSmall>(&c)) return Small{x->p, 1.0};
  if (const auto* x = std::get_if<GrandSmallSameP>(&c)) return Grand{x->p, 1.0};
  return std::get<GeneralCouple>(c).x0;
}

SpaceSpec couple_x1(const CoupleSpec& c) {
  if (const auto* x = std::get_if<LpLq>(&c)) return Lebesgue{x->q};
  if (const auto* x = std::get_if<GrandLq>(&c)) return Lebesgue{x->q};
  if (const auto* x = std::get_if<GrandGrand>(&c)) return Grand{x->q, x->alpha};
  if (const auto* x = std::get_if<SmallSmall>(&c)) return Small{x->q, 1.0};
  if (const auto* x = std::get_if<GrandSmallSameP>(&c)) return Small{x->p, 1.0};
  return std::get<GeneralCouple>(c).x1;
}

MonotoneMap couple_psi(const CoupleSpec& c) {
  validate_couple(c);
  if (const auto* x = std::get_if<LpLq>(&c)) return MonotoneMap::from_weight({1.0 / x->p - inv(x->q), 0.0});
  if (const auto* x = std::get_if<GrandLq>(&c))
    return MonotoneMap::from_weight({1.0 / x->p - 1.0 / x->q, -x->alpha / x->p});
  if (const auto* x = std::get_if<GrandGrand>(&c))
    return MonotoneMap::from_weight({1.0 / x->p - 1.0 / x->q, -x->alpha / x->p + x->alpha / x->q});
  if (const auto* x = std::get_if<SmallSmall>(&c)) {
    const double p = x->p, q = x->q;
    return MonotoneMap::from_weight({1.0 / p - 1.0 / q, (p - q + p * q) / (p * q)});
  }
  if (std::holds_alternative<GrandSmallSameP>(c)) return MonotoneMap::log_inverse();
  const auto& g = std::get<GeneralCouple>(c);
  auto w0 = fundamental_weight(g.x0), w1 = fundamental_weight(g.x1);
  if (!w0 || !w1) fail(ErrorKind::ConditionCheckFailed, "couple member has no closed-form fundamental function");
  return MonotoneMap::from_weight({w0->a - w1->a, w0->b - w1->b});
}

CoupleSpec couple_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadConfig, std::string("couple spec is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("couple").get<std::string>();
    CoupleSpec c = LpLq{1.0, kInf};
    if (kind == "l1_linf") {
      detail::allow_keys(j, {"couple"}, "couple");
      c = LpLq{1.0, kInf};
    } else if (kind == "lp_lq") {
      detail::allow_keys(j, {"couple", "p", "q"}, "couple");
      c = LpLq{number(j.at("p")), number(j.at("q"))};
    } else if (kind == "grand_lq") {
      detail::allow_keys(j, {"couple", "p", "q", "alpha"}, "couple");
      c = GrandLq{number(j.at("p")), number(j.at("q")), number(j.at("alpha"))};
    } else if (kind == "grand_grand") {
      detail::allow_keys(j, {"couple", "p", "q", "alpha"}, "couple");
      c = GrandGrand{number(j.at("p")), number(j.at("q")), number(j.at("alpha"))};
    } else if (kind == "small_small") {
      detail::allow_keys(j, {"couple", "p", "q"}, "couple");
      c = SmallSmall{number(j.at("p")), number(j.at("q"))};
    } else if (kind == "grand_small") {
      detail::allow_keys(j, {"couple", "p"}, "couple");
      c = GrandSmallSameP{number(j.at("p"))};
    } else if (kind == "general") {
      detail::allow_keys(j, {"couple", "x0", "x1"}, "couple");
      c = GeneralCouple{space_from_json(j.at("x0").dump()), space_from_json(j.at("x1").dump())};
    } else {
      fail(ErrorKind::BadConfig, "unknown couple: " + kind);
    }
    validate_couple(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::BadConfig, std::string("couple spec: ") + e.what());
  }
}

KTable::KTable(const StepRearrangement& f, const CoupleSpec& c, double rel_tol) {
  validate_couple(c);
  const SpaceSpec x0 = couple_x0(c), x1 = couple_x1(c);
  const auto& v = f.values();
  const std::size_t n = f.size();
  a_.reserve(n + 1);
  b_.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lambda = k < n ? v[k] : 0.0;
    double a = 0.0, b = 0.0;
    if (k > 0) {
      std::vector<double> breaks{0.0}, vals;
      for (std::size_t j = 0; j < k; ++j) {
        breaks.push_back(f.hi(j));
        vals.push_back(v[j] - lambda);
      }
      if (breaks.back() < 1.0) {
        breaks.push_back(1.0);
        vals.push_back(0.0);
      }
      a = norm(StepRearrangement(std::move(breaks), std::move(vals)), x0, rel_tol);
    }
    if (k < n && lambda > 0.0) {
      std::vector<double> breaks{0.0, f.hi(k)}, vals{lambda};
      for (std::size_t j = k + 1; j < n; ++j) {
        breaks.push_back(f.hi(j));
        vals.push_back(v[j]);
      }
      b = norm(StepRearrangement(std::move(breaks), std::move(vals)), x1, rel_tol);
    }
    a_.push_back(a);
    b_.push_back(b);
  }
}

double KTable::operator()(double t) const {
  if (!(t > 0.0)) fail(ErrorKind::BadPoint, "K needs t > 0");
  double best = kInf;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (!std::isfinite(a_[k]) || !std::isfinite(b_[k])) continue;
    best = std::min(best, a_[k] + t * b_[k]);
  }
  if (std::isinf(best)) fail(ErrorKind::InfiniteNorm, "no truncation splitting has both norms finite");
  return best;
}

double k_oracle(const StepRearrangement& f, const CoupleSpec& c, double t) { return KTable(f, c)(t); }

KExplicit::KExplicit(const StepRearrangement& f, const CoupleSpec& c, double rel_tol)
    : f_(f), c_(c), psi_(couple_psi(c)), rel_tol_(rel_tol) {
  if (const auto* x = std::get_if<LpLq>(&c)) {
    pre_p_.emplace(f, x->p);
    if (std::isfinite(x->q)) pre_q_.emplace(f, x->q);
  } else if (const auto* x = std::get_if<GrandLq>(&c)) {
    pre_p_.emplace(f, x->p);
    pre_q_.emplace(f, x->q);
  } else if (const auto* x = std::get_if<GrandGrand>(&c)) {
    pre_p_.emplace(f, x->p);
    tail_.emplace(f, x->q, x->alpha / x->q);
  } else if (const auto* x = std::get_if<SmallSmall>(&c)) {
    pre_p_.emplace(f, x->p);
    tail_.emplace(f, x->q, 1.0 / x->q);
    mean_.emplace(f, x->p, -1.0 / x->p, rel_tol);
  } else if (const auto* x = std::get_if<GrandSmallSameP>(&c)) {
    pre_p_.emplace(f, x->p);
  } else {
    const auto& g = std::get<GeneralCouple>(c);
    CReport rep = check_C_conditions(g.x0, g.x1, UGrid(Defaults::u_max, 64));
    if (!rep.pass) fail(ErrorKind::ConditionCheckFailed, "fundamental-function conditions not confirmed: " + rep.note);
  }
}

double KExplicit::operator()(double t) const {
  if (!(t > 0.0)) fail(ErrorKind::BadPoint, "K needs t > 0");
  if (f_.is_zero()) return 0.0;
  const double ux = psi_.inverse_u(t);
  const double x = t_of(ux);  // phi(t); may underflow to 0, which the terms below tolerate
  if (const auto* c = std::get_if<LpLq>(&c_)) {
    double head = std::pow(pre_p_->at(x), 1.0 / c->p);
    double tail = std::isinf(c->q) ? value_right_of(f_, x)
                                   : std::pow(std::max(0.0, pre_q_->total() - pre_q_->at(x)), 1.0 / c->q);
    return head + t * tail;
  }
  if (const auto* c = std::get_if<GrandLq>(&c_)) {
    double head = head_sup(f_, *pre_p_, c->p, c->alpha / c->p, x);
    double tail = std::pow(std::max(0.0, pre_q_->total() - pre_q_->at(x)), 1.0 / c->q);
    return head + t * tail;
  }
  if (const auto* c = std::get_if<GrandGrand>(&c_)) {
    return head_sup(f_, *pre_p_, c->p, c->alpha / c->p, x) + t * (*tail_)(x);
  }
  if (const auto* c = std::get_if<SmallSmall>(&c_)) {
    const double p = c->p;
    double k1 = mean_->at(x);
    double k2 = std::pow(u_of(t), (p - 1.0) / p) * std::pow(pre_p_->at(x), 1.0 / p);
    double k3 = t * (*tail_)(x);
    return k1 + k2 + k3;
  }
  if (const auto* c = std::get_if<GrandSmallSameP>(&c_)) {
    const double p = c->p;
    return head_sup(f_, *pre_p_, p, 1.0 / p, x) + t * log_mean_tail(f_, p, -1.0 / p, x, rel_tol_);
  }
  const auto& g = std::get<GeneralCouple>(c_);
  return norm(restricted_below(f_, x), g.x0, rel_tol_) + t * norm(shifted_tail(f_, x), g.x1, rel_tol_);
}

double k_explicit(const StepRearrangement& f, const CoupleSpec& c, double t) { return KExplicit(f, c)(t); }

KCurve make_curve(std::vector<double> t_nodes, std::vector<double> k_values) {
  KCurve curve;
  curve.t_nodes = std::move(t_nodes);
  curve.k_values = std::move(k_values);
  const auto& t = curve.t_nodes;
  const auto& k = curve.k_values;
  for (std::size_t j = 1; j < t.size(); ++j) {
    if (k[j] < k[j - 1] - 1e-9 * std::fabs(k[j - 1])) curve.monotone = false;
    if (k[j] / t[j] > (k[j - 1] / t[j - 1]) * (1.0 + 1e-9)) curve.concave = false;
  }
  return curve;
}

KCurve k_curve(const StepRearrangement& f, const CoupleSpec& c, const UGrid& grid, KMethod method) {
  std::vector<double> t, k;
  t.reserve(grid.count());
  for (int j = grid.count() - 1; j >= 0; --j) t.push_back(grid.t(j));
  k.reserve(t.size());
  if (method == KMethod::Oracle) {
    KTable table(f, c);
    for (double x : t) k.push_back(table(x));
  } else {
    KExplicit ex(f, c);
    for (double x : t) k.push_back(ex(x));
  }
  return make_curve(std::move(t), std::move(k));
}

CReport check_C_conditions(const SpaceSpec& x0, const SpaceSpec& x1, const UGrid& grid) {
  CReport rep;
  validate_space(x0);
  validate_space(x1);
  auto w0 = fundamental_weight(x0), w1 = fundamental_weight(x1);
  if (!w0 || !w1) {
    rep.note = "no closed-form fundamental function";
    return rep;
  }
  const LogWeight phi0 = *w0, phi1 = *w1;

  // The refined pass doubles both the panel count and the depth in u below t, so a
  // divergent weight norm shows up as drift.
  auto evaluate = [&](const UGrid& g, int panels, double depth) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int j = 0; j < g.count(); ++j) {
      const double ut = g.u(j);
      for (const LogWeight& w : {phi0, phi1}) {
        // int_0^t ds/Phi(s) divided by t/Phi(t)
        double num = weight_integral_u(-w.a, -w.b, ut, kInf);
        c[0] = std::max(c[0], num / LogWeight{1.0 - w.a, -w.b}.at_u(ut));
      }
      const double ratio01 = phi0.at_u(ut) / phi1.at_u(ut);
      auto inv_phi1 = [&](double u) { return 1.0 / phi1.at_u(u); };
      auto inv_phi0 = [&](double u) { return 1.0 / phi0.at_u(u); };
      StepRearrangement head = sampled_weight(inv_phi1, ut, ut + depth, panels, true);
      c[1] = std::max(c[1], norm(head, x0) / ratio01);
      if (ut > 1.0) {
        StepRearrangement tail = sampled_weight(inv_phi0, 1.0, ut, panels, false);
        c[2] = std::max(c[2], ratio01 * norm(tail, x1));
      }
    }
    return c;
  };

  const int panels = 200;
  const double depth = grid.u_max() - 1.0;
  auto coarse = evaluate(grid, panels, depth);
  auto fine = evaluate(grid.refined(), 2 * panels, 2.0 * depth);
  rep.c0 = coarse[0];
  rep.c1 = coarse[1];
  rep.c2 = coarse[2];
  rep.c0_refined = fine[0];
  rep.c1_refined = fine[1];
  rep.c2_refined = fine[2];
  rep.pass = true;
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(coarse[i]) || !std::isfinite(fine[i])) {
      rep.pass = false;
      rep.note += "condition " + std::to_string(i) + " infinite; ";
      continue;
    }
    double drift = coarse[i] > 0.0 ? std::fabs(fine[i] - coarse[i]) / coarse[i] : 0.0;
    if (drift >= Defaults::drift_limit) {
      rep.pass = false;
      rep.note += "condition " + std::to_string(i) + " drifts under refinement; ";
    }
  }
  return rep;
}

}  // namespace rispaces
