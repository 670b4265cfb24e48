#include "rispaces/norms.hpp"

#include <algorithm>
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

bool finite(double x) { return std::isfinite(x); }

double upper_u(double lo) { return lo > 0.0 ? u_of(lo) : kInf; }

std::string num(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << x;
  return os.str();
}

StepRearrangement indicator(double t) {
  if (t >= 1.0) return StepRearrangement::constant(1.0);
  return StepRearrangement({0.0, t, 1.0}, {1.0, 0.0});
}

// int_0^x w1 P^{m/p} (or the sup form) with P(t) = int_0^t f^p w2.
double ggamma_outer(const StepFunction& f, const GammaDouble& g, double x, double rel_tol) {
  const double p = g.p(), m = g.m();
  const LogWeight w1 = g.w1(), w2 = g.w2();
  x = std::min(x, 1.0);
  if (x <= 0.0) return 0.0;

  std::vector<double> P(f.size() + 1, 0.0);  // P at each break
  std::vector<double> vp(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = f.values()[i];
    vp[i] = v > 0.0 ? std::pow(v, p) : 0.0;
    double mass = vp[i] > 0.0 ? weight_integral_u(w2.a, w2.b, u_of(f.hi(i)), upper_u(f.lo(i)), rel_tol) : 0.0;
    P[i + 1] = P[i] + vp[i] * mass;
  }
  auto P_at = [&](std::size_t i, double u) {
    if (vp[i] == 0.0) return P[i];
    return P[i] + vp[i] * weight_integral_u(w2.a, w2.b, u, upper_u(f.lo(i)), rel_tol);
  };

  if (std::isinf(m)) {
    double best = 0.0;
    const double inv_p = 1.0 / p;
    std::vector<double> bps;
    for (std::size_t i = 1; i < f.size(); ++i) bps.push_back(f.lo(i));
    bps.push_back(x);
    UGrid grid(std::max(Defaults::u_max, u_of(x) + 1.0), Defaults::sup_count);
    auto h = [&](double t) {
      if (t > x) return 0.0;
      std::size_t i = f.panel_of(t);
      return w1(t) * std::pow(P_at(i, u_of(t)), inv_p);
    };
    best = sup_on_grid(h, grid, bps).value;
    return best;
  }

  const double e = m / p;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size() && f.lo(i) < x; ++i) {
    double hi = std::min(f.hi(i), x);
    double u_hi = u_of(hi), u_lo = upper_u(f.lo(i));
    if (vp[i] == 0.0) {
      if (P[i] > 0.0) sum += std::pow(P[i], e) * weight_integral_u(w1.a, w1.b, u_hi, u_lo, rel_tol);
      continue;
    }
    auto integrand = [&](double u) {
      double Pu = P_at(i, u);
      if (Pu <= 0.0) return 0.0;
      return std::exp((w1.a + 1.0) * (1.0 - u)) * std::pow(u, w1.b) * std::pow(Pu, e);
    };
    sum += integrate_u(integrand, u_hi, u_lo, rel_tol);
  }
  return std::pow(sum, 1.0 / m);
}

}  // namespace

GammaDouble::GammaDouble(double p, double m, LogWeight w1, LogWeight w2) : p_(p), m_(m), w1_(w1), w2_(w2) {
  require(p >= 1.0 && finite(p), "GammaDouble needs p in [1, inf)");
  require(m >= 1.0, "GammaDouble needs m in [1, inf]");
  require(finite(w1.a) && finite(w1.b) && finite(w2.a) && finite(w2.b), "weights must have finite exponents");

  // w2(2t)/w2(t) = 2^a (u(2t)/u(t))^b and u(2t)/u(t) lies in [1/(1+log 2), 1].
  k12_ = std::pow(2.0, w2.a) * (w2.b >= 0.0 ? 1.0 : std::pow(1.0 + std::log(2.0), -w2.b));

  // L^p(w2) must sit inside L^1.
  bool embeds;
  if (p == 1.0) {
    embeds = w2.a < 0.0 || (w2.a == 0.0 && w2.b >= 0.0);
  } else {
    embeds = std::isfinite(weight_integral_u(-w2.a / (p - 1.0), -w2.b / (p - 1.0), 1.0, kInf));
  }
  if (!embeds) fail(ErrorKind::ConditionCheckFailed, "w2 does not give an embedding L^p(w2) into L^1");

  // int_0^t w2 behaves like t^{a2+1} u^{b2}, or u^{b2+1} when a2 = -1.
  double et, eu;
  if (w2.a > -1.0) {
    et = w2.a + 1.0;
    eu = w2.b;
  } else if (w2.a == -1.0 && w2.b < -1.0) {
    et = 0.0;
    eu = w2.b + 1.0;
  } else {
    fail(ErrorKind::ConditionC2Failed, "w2 is not integrable near 0");
  }
  bool ok;
  if (std::isinf(m)) {
    double kt = w1.a + et / p, ku = w1.b + eu / p;
    ok = kt > 0.0 || (kt == 0.0 && ku <= 0.0);
  } else {
    double kappa = w1.a + 1.0 + et * m / p, nu = w1.b + eu * m / p;
    ok = kappa > 0.0 || (kappa == 0.0 && nu < -1.0);
  }
  if (!ok) fail(ErrorKind::ConditionC2Failed, "int_0^t w2 is not in L^{m/p}(w1)");
}

double GammaDouble::quasi_triangle_constant() const { return std::pow(2.0 * k12_, 1.0 / p_); }

double GammaDouble::w2_mass(double t) const {
  if (t <= 0.0) return 0.0;
  return weight_integral_u(w2_.a, w2_.b, u_of(std::min(t, 1.0)), kInf);
}

void validate_space(const SpaceSpec& spec) {
  if (const auto* s = std::get_if<Lebesgue>(&spec)) {
    require(s->p >= 1.0, "Lebesgue needs p in [1, inf]");
  } else if (const auto* s = std::get_if<LorentzZygmund>(&spec)) {
    require(s->p >= 1.0 && finite(s->p), "Lorentz-Zygmund needs finite p >= 1");
    require(s->q >= 1.0, "Lorentz-Zygmund needs q in [1, inf]");
    require(finite(s->alpha), "Lorentz-Zygmund needs finite alpha");
  } else if (const auto* s = std::get_if<Grand>(&spec)) {
    require(s->p > 1.0 && finite(s->p) && s->alpha > 0.0 && finite(s->alpha), "Grand needs p in (1,inf), alpha > 0");
  } else if (const auto* s = std::get_if<Small>(&spec)) {
    require(s->p > 1.0 && finite(s->p) && s->alpha > 0.0 && finite(s->alpha), "Small needs p in (1,inf), alpha > 0");
  }
}

std::string space_label(const SpaceSpec& spec) {
  std::ostringstream os;
  if (const auto* s = std::get_if<Lebesgue>(&spec)) {
    os << "lebesgue(p=" << num(s->p) << ")";
  } else if (const auto* s = std::get_if<LorentzZygmund>(&spec)) {
    os << "lorentz_zygmund(p=" << num(s->p) << ",q=" << num(s->q) << ",alpha=" << num(s->alpha) << ")";
  } else if (const auto* s = std::get_if<Grand>(&spec)) {
    os << "grand(p=" << num(s->p) << ",alpha=" << num(s->alpha) << ")";
  } else if (const auto* s = std::get_if<Small>(&spec)) {
    os << "small(p=" << num(s->p) << ",alpha=" << num(s->alpha) << ")";
  } else {
    const auto& g = std::get<GammaDouble>(spec);
    os << "ggamma(p=" << num(g.p()) << ",m=" << num(g.m()) << ",w1=[" << num(g.w1().a) << "," << num(g.w1().b)
       << "],w2=[" << num(g.w2().a) << "," << num(g.w2().b) << "])";
  }
  return os.str();
}

double lebesgue_norm(const StepFunction& f, double p) {
  require(p >= 1.0, "Lebesgue needs p in [1, inf]");
  if (std::isinf(p)) return *std::max_element(f.values().begin(), f.values().end());
  return std::pow(power_integral(f, p, 0.0, 1.0), 1.0 / p);
}

double lorentz_zygmund_norm(const StepFunction& f, double p, double q, double alpha, double rel_tol) {
  validate_space(LorentzZygmund{p, q, alpha});
  if (std::isinf(q)) {
    // sup of v t^{1/p} u^alpha, maximized exactly on each panel
    const LogWeight w{1.0 / p, alpha};
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double v = f.values()[i];
      if (v == 0.0) continue;
      best = std::max(best, v * log_weight_sup(w, u_of(f.hi(i)), upper_u(f.lo(i))));
    }
    return best;
  }
  double s = log_weight_integral(f, q, LogWeight{q / p - 1.0, alpha * q}, 0.0, 1.0, rel_tol);
  return std::pow(s, 1.0 / q);
}

double grand_norm(const StepFunction& f, double p, double alpha) {
  validate_space(Grand{p, alpha});
  return TailSupTable(f, p, alpha / p)(0.0);
}

double log_mean_segment(double C0, double vp, double lo, double a, double b, double p, double e, double rel_tol) {
  if (!(b > a)) return 0.0;
  const double inv_p = 1.0 / p;
  const double u_b = u_of(b), u_a = upper_u(a);
  if (vp == 0.0) return C0 > 0.0 ? std::pow(C0, inv_p) * weight_integral_u(-1.0, e, u_b, u_a, rel_tol) : 0.0;
  if (C0 == 0.0 && lo == 0.0) return std::pow(vp, inv_p) * weight_integral_u(inv_p - 1.0, e, u_b, u_a, rel_tol);
  return integrate_u(
      [&](double u) {
        double F = C0 + vp * (t_of(u) - lo);
        return F > 0.0 ? std::pow(u, e) * std::pow(F, inv_p) : 0.0;
      },
      u_b, u_a, rel_tol);
}

LogMeanPrefix::LogMeanPrefix(const StepFunction& f, double p, double e, double rel_tol)
    : breaks_(f.breaks()), p_(p), e_(e), rel_tol_(rel_tol) {
  const std::size_t n = f.size();
  vp_.resize(n);
  F_.assign(n + 1, 0.0);
  cum_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    vp_[i] = f.values()[i] > 0.0 ? std::pow(f.values()[i], p) : 0.0;
    F_[i + 1] = F_[i] + vp_[i] * f.width(i);
    cum_[i + 1] = cum_[i] + log_mean_segment(F_[i], vp_[i], f.lo(i), f.lo(i), f.hi(i), p, e, rel_tol);
  }
}

double LogMeanPrefix::at(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return cum_.back();
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return cum_[i] + log_mean_segment(F_[i], vp_[i], breaks_[i], breaks_[i], x, p_, e_, rel_tol_);
}

double log_mean_tail(const StepFunction& f, double p, double e, double x, double rel_tol) {
  if (x >= 1.0) return 0.0;
  x = std::max(x, 0.0);
  double sum = 0.0, C = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.hi(i) <= x) continue;
    double a = std::max(x, f.lo(i));
    double v = f.values()[i];
    double vp = v > 0.0 ? std::pow(v, p) : 0.0;
    sum += log_mean_segment(C, vp, a, a, f.hi(i), p, e, rel_tol);
    C += vp * (f.hi(i) - a);
  }
  return sum;
}

double small_norm(const StepFunction& f, double p, double alpha, double rel_tol) {
  validate_space(Small{p, alpha});
  return LogMeanPrefix(f, p, -alpha / p + alpha - 1.0, rel_tol).at(1.0);
}

double ggamma_norm(const StepFunction& f, const GammaDouble& spec, double rel_tol) {
  return ggamma_outer(f, spec, 1.0, rel_tol);
}

double ggamma_partial(const StepFunction& f, const GammaDouble& spec, double x, double rel_tol) {
  return ggamma_outer(f, spec, x, rel_tol);
}

double norm(const StepFunction& f, const SpaceSpec& spec, double rel_tol) {
  if (const auto* s = std::get_if<Lebesgue>(&spec)) return lebesgue_norm(f, s->p);
  if (const auto* s = std::get_if<LorentzZygmund>(&spec)) return lorentz_zygmund_norm(f, s->p, s->q, s->alpha, rel_tol);
  if (const auto* s = std::get_if<Grand>(&spec)) return grand_norm(f, s->p, s->alpha);
  if (const auto* s = std::get_if<Small>(&spec)) return small_norm(f, s->p, s->alpha, rel_tol);
  return ggamma_norm(f, std::get<GammaDouble>(spec), rel_tol);
}

double fundamental_equivalent(const SpaceSpec& spec, double t) {
  if (!(t > 0.0 && t <= 1.0)) fail(ErrorKind::BadPoint, "fundamental function needs t in (0,1]");
  const double u = u_of(t);
  if (const auto* s = std::get_if<Lebesgue>(&spec)) return std::isinf(s->p) ? 1.0 : std::pow(t, 1.0 / s->p);
  if (const auto* s = std::get_if<LorentzZygmund>(&spec)) return std::pow(t, 1.0 / s->p) * std::pow(u, s->alpha);
  if (const auto* s = std::get_if<Grand>(&spec)) return std::pow(t, 1.0 / s->p) * std::pow(u, -s->alpha / s->p);
  // the displayed small-space equivalent; its exponent is not re-derived here
  if (const auto* s = std::get_if<Small>(&spec)) return std::pow(t, 1.0 / s->p) * std::pow(u, s->alpha / s->p);
  const auto& g = std::get<GammaDouble>(spec);
  double mass = std::pow(g.w2_mass(t), 1.0 / g.p());
  if (std::isinf(g.m())) return mass * log_weight_sup(g.w1(), 1.0, u);
  return mass * std::pow(weight_integral_u(g.w1().a, g.w1().b, 1.0, u), 1.0 / g.m());
}

FundamentalValue fundamental_function(const SpaceSpec& spec, double t) {
  validate_space(spec);
  return {norm(indicator(t), spec), fundamental_equivalent(spec, t)};
}

LowerBoundSides ggamma_lower_bound_check(const StepFunction& f, const GammaDouble& spec, double meas_e) {
  if (!(meas_e > 0.0 && meas_e <= 1.0)) fail(ErrorKind::BadInterval, "measure of E must lie in (0,1]");
  const double rho = ggamma_norm(f, spec);
  const double rhs = std::pow(log_weight_integral(f, spec.p(), spec.w2(), 0.0, meas_e), 1.0 / spec.p());
  if (rho == 0.0) return {0.0, rhs};
  const double den = ggamma_partial(StepRearrangement::constant(1.0), spec, meas_e);
  const double lhs = rho * std::pow(spec.w2_mass(meas_e), 1.0 / spec.p()) / den;
  return {lhs, rhs};
}

SpaceSpec space_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadConfig, std::string("space spec is not valid JSON: ") + e.what());
  }
  auto number = [](const nlohmann::json& v) {
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      if (s == "inf" || s == "infinity") return kInf;
      fail(ErrorKind::BadConfig, "expected a number or \"inf\", got " + s);
    }
    return v.get<double>();
  };
  auto weight = [&](const nlohmann::json& v) { return LogWeight{number(v.at("a")), number(v.at("b"))}; };
  try {
    const std::string kind = j.at("space").get<std::string>();
    SpaceSpec spec = Lebesgue{1.0};
    if (kind == "lebesgue") {
      detail::allow_keys(j, {"space", "p"}, "space");
      spec = Lebesgue{number(j.at("p"))};
    } else if (kind == "lorentz_zygmund" || kind == "lz") {
      detail::allow_keys(j, {"space", "p", "q", "alpha"}, "space");
      spec = LorentzZygmund{number(j.at("p")), number(j.at("q")), number(j.at("alpha"))};
    } else if (kind == "grand") {
      detail::allow_keys(j, {"space", "p", "alpha"}, "space");
      spec = Grand{number(j.at("p")), number(j.at("alpha"))};
    } else if (kind == "small") {
      detail::allow_keys(j, {"space", "p", "alpha"}, "space");
      spec = Small{number(j.at("p")), number(j.at("alpha"))};
    } else if (kind == "ggamma") {
      detail::allow_keys(j, {"space", "p", "m", "w1", "w2"}, "space");
      spec = GammaDouble(number(j.at("p")), number(j.at("m")), weight(j.at("w1")), weight(j.at("w2")));
    } else {
      fail(ErrorKind::BadConfig, "unknown space: " + kind);
    }
    validate_space(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::BadConfig, std::string("space spec: ") + e.what());
  }
}

}  // namespace rispaces
