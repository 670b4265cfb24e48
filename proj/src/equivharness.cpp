#include "rispaces/equivharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "nlohmann/json.hpp"
#include "rispaces/error.hpp"

namespace rispaces {

namespace {

double upper_u(double lo) { return lo > 0.0 ? u_of(lo) : kInf; }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Runs fn(i) for i < n on a few worker threads; the first exception wins.
template <class F>
void parallel_for(std::size_t n, int threads, F fn) {
  unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  hw = std::min<unsigned>(hw, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!first) first = std::current_exception();
        next = n;
      }
    }
  };
  if (hw <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < hw; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first) std::rethrow_exception(first);
}

using MemberEval = std::function<MemberSides(const std::string&, const StepRearrangement&, const Resolution&)>;

// Evaluates every member at the base and the refined resolution.
std::pair<std::vector<MemberSides>, std::vector<MemberSides>> run_family(const FunctionFamily& family,
                                                                         const HarnessConfig& cfg,
                                                                         const MemberEval& eval) {
  const Resolution base = cfg.res, fine = cfg.res.refined();
  const auto fb = family.discretize(base), ff = family.discretize(fine);
  const std::size_t n = fb.size();
  std::vector<MemberSides> coarse(n), refined(n);
  parallel_for(2 * n, cfg.threads, [&](std::size_t k) {
    if (k < n) coarse[k] = eval(family.ids[k], fb[k], base);
    else refined[k - n] = eval(family.ids[k - n], ff[k - n], fine);
  });
  return {coarse, refined};
}

// int over the t-panel (lo, hi] of t^w u^B (C0 + slope (t - x0))^e dt/t
double panel_integral(double w, double B, double C0, double slope, double x0, double lo, double hi, double e,
                      double rel_tol) {
  const double u_hi = u_of(hi), u_lo = upper_u(lo);
  if (slope == 0.0) {
    if (C0 <= 0.0) return 0.0;
    return std::pow(C0, e) * weight_integral_u(w - 1.0, B, u_hi, u_lo, rel_tol);
  }
  if (C0 == 0.0 && x0 == 0.0) return std::pow(slope, e) * weight_integral_u(w + e - 1.0, B, u_hi, u_lo, rel_tol);
  auto g = [&](double u) {
    const double v = std::max(C0 + slope * (t_of(u) - x0), 0.0);
    return std::exp(w * (1.0 - u)) * std::pow(u, B) * std::pow(v, e);
  };
  if (lo > 0.0) return integrate_u(g, u_hi, u_lo, rel_tol);
  // Deep in the first panel the bracket equals its limit to rounding; the rest is closed form.
  const double cut = u_hi + 60.0;
  const double c0 = std::max(C0 - slope * x0, 0.0);
  double tail = c0 > 0.0 ? std::pow(c0, e) * weight_integral_u(w - 1.0, B, cut, kInf, rel_tol) : 0.0;
  return integrate_u(g, u_hi, cut, rel_tol) + tail;
}

std::vector<double> break_points(const StepFunction& f) {
  std::vector<double> out;
  for (double b : f.breaks())
    if (b > 0.0 && b < 1.0) out.push_back(b);
  return out;
}

// u just beyond the smallest positive break, where step data turn into pure powers.
double deep_u(const StepFunction& f) {
  double lo = 1.0;
  for (double b : f.breaks())
    if (b > 0.0) lo = std::min(lo, b);
  return u_of(lo) + 40.0;
}

std::uint64_t next_bits(std::mt19937_64& g) { return g(); }
double unit(std::mt19937_64& g) { return static_cast<double>(next_bits(g) >> 11) * 0x1.0p-53; }

MemberSides single(const std::string& id, double lhs, double rhs) {
  MemberSides m;
  m.id = id;
  m.sides.push_back({lhs, rhs});
  return m;
}

const char* kind_name(BracketKind k) {
  switch (k) {
    case BracketKind::TwoSided: return "two_sided";
    case BracketKind::Upper: return "upper";
    case BracketKind::Exact: return "exact";
  }
  return "unknown";
}

}  // namespace

// ---- families ----

std::vector<StepRearrangement> FunctionFamily::discretize(const Resolution& res) const {
  std::vector<StepRearrangement> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(discretize_model(m, res.u_max, res.panels));
  return out;
}

FunctionFamily random_step_family(int count, std::uint64_t seed, double u_max) {
  FunctionFamily fam;
  fam.name = "random_steps";
  std::mt19937_64 gen(seed);
  for (int k = 0; k < count; ++k) {
    const int n = 2 + static_cast<int>(next_bits(gen) % 7);
    // interior breaks log-uniform in u on [1, u_max]
    std::vector<double> us;
    for (int i = 0; i + 1 < n; ++i) us.push_back(std::exp(unit(gen) * std::log(u_max)));
    std::sort(us.begin(), us.end(), std::greater<>());
    std::vector<double> breaks{0.0};
    for (double u : us) breaks.push_back(t_of(u));
    breaks.push_back(1.0);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(std::exp(4.0 * unit(gen) - 2.0));
    std::sort(values.begin(), values.end(), std::greater<>());
    // drop coincident breaks
    std::vector<double> b2{breaks[0]}, v2;
    for (int i = 0; i < n; ++i) {
      if (breaks[i + 1] > b2.back()) {
        b2.push_back(breaks[i + 1]);
        v2.push_back(values[i]);
      }
    }
    fam.members.push_back(ExplicitSteps{b2, v2});
    std::ostringstream id;
    id << "random-" << (k < 10 ? "0" : "") << k;
    fam.ids.push_back(id.str());
  }
  return fam;
}

FunctionFamily standard_family(double q, std::uint64_t seed, int random) {
  if (!(q > 1.0)) fail(ErrorKind::BadConfig, "standard family needs q > 1");
  FunctionFamily fam;
  fam.name = "standard";
  auto add = [&](FunctionModel m) {
    fam.ids.push_back(model_label(m));
    fam.members.push_back(std::move(m));
  };
  add(Char{1.0});
  for (double a : {0.5, 0.125, 1.0 / 128.0}) add(Char{a});
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  for (double g : {0.0, 0.5 * (1.0 - iq), iq - 1e-3}) {
    if (g < 0.0) continue;
    for (double d : {-1.0, 0.0, 1.0, 2.0}) {
      if (g == 0.0 && d == 0.0) continue;  // the constant is already a member
      add(PowerLog{g, d});
    }
  }
  auto rnd = random_step_family(random, seed);
  for (std::size_t k = 0; k < rnd.members.size(); ++k) {
    fam.members.push_back(rnd.members[k]);
    fam.ids.push_back(rnd.ids[k]);
  }
  return fam;
}

FunctionFamily single_family(const FunctionModel& model) {
  FunctionFamily fam;
  fam.name = "single";
  fam.members.push_back(model);
  fam.ids.push_back(model_label(model));
  return fam;
}

// ---- reports ----

std::string EquivReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) {
    if (std::isinf(v)) p[k] = "inf";
    else p[k] = v;
  }
  for (const auto& [k, v] : labels) p[k] = v;
  j["params"] = p;
  j["kind"] = kind_name(kind);
  nlohmann::ordered_json ms = nlohmann::ordered_json::array();
  for (const auto& m : members) {
    nlohmann::ordered_json e;
    e["id"] = m.id;
    e["lhs"] = m.lhs;
    e["rhs"] = m.rhs;
    e["ratio"] = m.ratio;
    e["ratio_min"] = m.ratio_min;
    e["ratio_max"] = m.ratio_max;
    ms.push_back(e);
  }
  j["members"] = ms;
  j["max_ratio"] = max_ratio;
  j["min_ratio"] = min_ratio;
  j["median_ratio"] = median_ratio;
  j["bracket"] = bracket;
  j["ceiling"] = ceiling;
  j["drift"] = drift;
  j["skipped"] = skipped;
  j["violations"] = violations;
  j["pass"] = pass;
  j["seed"] = seed;
  j["notes"] = notes;
  return j.dump(2);
}

namespace {

struct Aggregate {
  double max_ratio = 0.0, min_ratio = kInf;
  bool any = false;
};

Aggregate aggregate(const std::vector<MemberSides>& ms) {
  Aggregate a;
  for (const auto& m : ms) {
    if (!m.skip_note.empty()) continue;
    for (auto [l, r] : m.sides) {
      if (l == 0.0 || r == 0.0) continue;
      double q = l / r;
      a.any = true;
      a.max_ratio = std::max(a.max_ratio, q);
      a.min_ratio = std::min(a.min_ratio, q);
    }
  }
  return a;
}

double rel_change(double a, double b) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b) || a == 0.0) return kInf;
  return std::fabs(b - a) / std::fabs(a);
}

}  // namespace

EquivReport assemble_report(const std::string& experiment, BracketKind kind, const std::vector<MemberSides>& coarse,
                            const std::vector<MemberSides>& fine, const HarnessConfig& cfg) {
  EquivReport rep;
  rep.experiment = experiment;
  rep.kind = kind;
  rep.ceiling = cfg.ceiling;
  rep.seed = cfg.seed;
  bool finite = true;
  std::vector<double> reps;
  for (const auto& m : coarse) {
    rep.violations += m.violations;
    if (!m.skip_note.empty()) {
      ++rep.skipped;
      rep.notes.push_back("degenerate member skipped: " + m.id + " (" + m.skip_note + ")");
      continue;
    }
    MemberRatio mr;
    mr.id = m.id;
    mr.ratio_min = kInf;
    double worst = -1.0;
    bool seen = false;
    for (auto [l, r] : m.sides) {
      if (l == 0.0 || r == 0.0) continue;
      const double q = l / r;
      seen = true;
      if (!std::isfinite(q) || !(q > 0.0)) finite = false;
      mr.ratio_min = std::min(mr.ratio_min, q);
      mr.ratio_max = std::max(mr.ratio_max, q);
      const double badness = std::isfinite(q) ? std::fabs(std::log(q)) : kInf;
      if (badness > worst) {
        worst = badness;
        mr.lhs = l;
        mr.rhs = r;
        mr.ratio = q;
      }
    }
    if (!seen) {
      ++rep.skipped;
      rep.notes.push_back("degenerate member skipped: " + m.id);
      continue;
    }
    reps.push_back(mr.ratio);
    rep.members.push_back(mr);
  }
  for (const auto& m : fine) {
    if (m.violations > 0) rep.violations += m.violations;
  }

  const Aggregate ac = aggregate(coarse), af = aggregate(fine);
  if (ac.any) {
    rep.max_ratio = ac.max_ratio;
    rep.min_ratio = ac.min_ratio;
    std::sort(reps.begin(), reps.end());
    const std::size_t n = reps.size();
    rep.median_ratio = n % 2 ? reps[n / 2] : 0.5 * (reps[n / 2 - 1] + reps[n / 2]);
    rep.bracket = kind == BracketKind::TwoSided ? std::max(ac.max_ratio, 1.0 / ac.min_ratio) : ac.max_ratio;
    if (af.any) {
      rep.drift = rel_change(ac.max_ratio, af.max_ratio);
      if (kind == BracketKind::TwoSided) rep.drift = std::max(rep.drift, rel_change(1.0 / ac.min_ratio, 1.0 / af.min_ratio));
    }
  } else {
    rep.notes.push_back("no member evaluated");
  }
  if (!finite) rep.notes.push_back("non-finite ratio");
  if (rep.violations > 0) rep.notes.push_back("inequality violated " + std::to_string(rep.violations) + " times");

  rep.pass = finite && rep.violations == 0;
  if (kind != BracketKind::Exact) {
    rep.pass = rep.pass && rep.bracket <= cfg.ceiling && rep.drift < Defaults::drift_limit;
    if (rep.bracket > cfg.ceiling) rep.notes.push_back("bracket exceeds ceiling");
    if (!(rep.drift < Defaults::drift_limit)) rep.notes.push_back("drift under refinement too large");
  }
  return rep;
}

// ---- identities ----

KCurve CurveCache::get(const std::string& member_id, const StepRearrangement& f, const CoupleSpec& c,
                       const Resolution& res) {
  static std::mutex m;
  std::ostringstream key;
  key << member_id << '|' << couple_label(c) << '|' << res.u_max << '|' << res.panels << '|' << res.k_nodes;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = curves_.find(key.str());
    if (it != curves_.end()) return *it->second;
  }
  auto curve = std::make_shared<const KCurve>(k_curve(f, c, UGrid(res.u_max, res.k_nodes), KMethod::Oracle));
  std::lock_guard<std::mutex> lock(m);
  curves_.emplace(key.str(), curve);
  return *curve;
}

EquivReport run_identity_experiment(Identity id, const IdentityParams& params, const FunctionFamily& family,
                                    const HarnessConfig& cfg, CurveCache* cache) {
  const IdentityCase ic = identity_case(id, params);
  CurveCache local;
  CurveCache& cc = cache ? *cache : local;
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    MemberSides m;
    m.id = mid;
    if (f.is_zero()) {
      m.skip_note = "zero function";
      return m;
    }
    double rhs;
    try {
      rhs = ic.target(f);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfiniteNorm && e.kind() != ErrorKind::Divergent) throw;
      m.skip_note = std::string("target norm infinite: ") + error_name(e.kind());
      return m;
    }
    if (!std::isfinite(rhs)) {
      m.skip_note = "target norm infinite";
      return m;
    }
    double lhs;
    try {
      lhs = interp_norm(cc.get(mid, f, ic.couple, res), ic.interp, res.rel_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfiniteNorm && e.kind() != ErrorKind::Divergent) throw;
      lhs = kInf;
    }
    m.sides.push_back({lhs, rhs});
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report(identity_name(id), BracketKind::TwoSided, coarse, fine, cfg);
  rep.params = {{"p", params.p}, {"q", params.q}, {"theta", params.theta}, {"r", params.r}, {"alpha", params.alpha}};
  rep.labels = {{"couple", couple_label(ic.couple)}, {"target", ic.target_label}, {"family", family.name}};
  return rep;
}

EquivReport k_bracket_experiment(const CoupleSpec& couple, const FunctionFamily& family, const HarnessConfig& cfg) {
  validate_couple(couple);
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    MemberSides m;
    m.id = mid;
    if (f.is_zero()) {
      m.skip_note = "zero function";
      return m;
    }
    const UGrid grid(res.u_max, res.k_nodes);
    const KCurve oracle = k_curve(f, couple, grid, KMethod::Oracle);
    const KCurve expl = k_curve(f, couple, grid, KMethod::Explicit);
    for (std::size_t j = 0; j < oracle.k_values.size(); ++j) m.sides.push_back({oracle.k_values[j], expl.k_values[j]});
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report("k-" + couple_label(couple), BracketKind::TwoSided, coarse, fine, cfg);
  rep.labels = {{"couple", couple_label(couple)}, {"family", family.name}};
  return rep;
}

// ---- Hardy ----

std::pair<double, double> hardy_sides(HardyDisplay which, const HardyExponents& e, const StepFunction& phi,
                                      double rel_tol) {
  const bool prefix = which == HardyDisplay::PowerPrefix || which == HardyDisplay::LogPrefix;
  const bool power = which == HardyDisplay::PowerPrefix || which == HardyDisplay::PowerTail;
  double ex, wl, bl, wr, br;
  if (power) {
    if (!(e.lambda > 0.0)) fail(ErrorKind::BadExponent, "lambda must be > 0");
    if (!(e.b >= 1.0)) fail(ErrorKind::BadExponent, "b must lie in [1,inf]");
    ex = e.b;
    wl = prefix ? -e.lambda : e.lambda;
    bl = e.beta;
    wr = prefix ? 1.0 - e.lambda : 1.0 + e.lambda;
    br = e.beta;
  } else {
    if (!(e.a >= 1.0)) fail(ErrorKind::BadExponent, "a must lie in [1,inf]");
    const double s = e.alpha + (std::isinf(e.a) ? 0.0 : 1.0 / e.a);
    if (prefix && !(s > 0.0)) fail(ErrorKind::BadExponent, "prefix form needs alpha + 1/a > 0");
    if (!prefix && !(s < 0.0)) fail(ErrorKind::BadExponent, "tail form needs alpha + 1/a < 0");
    ex = e.a;
    wl = 0.0;
    bl = e.alpha;
    wr = 1.0;
    br = 1.0 + e.alpha;
  }
  if (phi.is_zero()) return {0.0, 0.0};
  const std::size_t n = phi.size();
  const auto& v = phi.values();

  if (std::isinf(ex)) {
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] > 0.0) rhs = std::max(rhs, v[i] * log_weight_sup(LogWeight{wr, br}, u_of(phi.hi(i)), upper_u(phi.lo(i))));
    const PowerPrefix P(phi, 1.0);
    const double total = P.total();
    auto g = [&](double t) {
      const double u = u_of(t);
      const double psi = prefix ? P.at(t) : total - P.at(t);
      return std::exp(wl * (1.0 - u)) * std::pow(u, bl) * psi;
    };
    double lhs = sup_on_grid(g, UGrid(deep_u(phi), 8192), break_points(phi)).value;
    if (prefix && v[0] > 0.0)
      lhs = std::max(lhs, v[0] * log_weight_sup(LogWeight{1.0 + wl, bl}, u_of(phi.hi(0)), kInf));
    return {lhs, rhs};
  }

  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] > 0.0)
      rhs += std::pow(v[i], ex) * weight_integral_u(wr * ex - 1.0, br * ex, u_of(phi.hi(i)), upper_u(phi.lo(i)), rel_tol);
  if (prefix) {
    double P = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += panel_integral(wl * ex, bl * ex, P, v[i], phi.lo(i), phi.lo(i), phi.hi(i), ex, rel_tol);
      P += v[i] * phi.width(i);
    }
  } else {
    double T = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      lhs += panel_integral(wl * ex, bl * ex, T, -v[i], phi.hi(i), phi.lo(i), phi.hi(i), ex, rel_tol);
      T += v[i] * phi.width(i);
    }
  }
  if (!power) return {std::pow(lhs, 1.0 / ex), std::pow(rhs, 1.0 / ex)};
  return {lhs, rhs};
}

EquivReport hardy_check(HardyDisplay which, const HardyExponents& e, const FunctionFamily& family,
                        const HarnessConfig& cfg) {
  hardy_sides(which, e, StepFunction({0.0, 1.0}, {0.0}));  // exponent checks before any work
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    auto [l, r] = hardy_sides(which, e, f, res.rel_tol);
    return single(mid, l, r);
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  static const char* names[] = {"hardy-power-prefix", "hardy-power-tail", "hardy-log-prefix", "hardy-log-tail"};
  EquivReport rep = assemble_report(names[static_cast<int>(which)], BracketKind::Upper, coarse, fine, cfg);
  if (which == HardyDisplay::PowerPrefix || which == HardyDisplay::PowerTail)
    rep.params = {{"lambda", e.lambda}, {"b", e.b}, {"beta", e.beta}};
  else
    rep.params = {{"a", e.a}, {"alpha", e.alpha}};
  rep.labels = {{"family", family.name}};
  return rep;
}

// ---- sup smoothing ----

SmoothingExponents SmoothingExponents::interpolation_form(double theta, double r, double alpha, double q) {
  return {1.0 - theta, alpha * (1.0 - theta) / q, alpha / q, r};
}

SmoothingExponents SmoothingExponents::log_form(double nu, double beta, double q, double r) {
  return {nu, beta, 1.0 / q, r};
}

std::pair<double, double> sup_smoothing_sides(const StepFunction& kd, const SmoothingExponents& e, double rel_tol) {
  if (!(e.c >= 0.0)) fail(ErrorKind::BadExponent, "sup weight exponent must be >= 0");
  if (!(e.r >= 1.0 && std::isfinite(e.r))) fail(ErrorKind::BadExponent, "r must lie in [1,inf)");
  const auto& v = kd.values();
  const std::size_t n = kd.size();
  for (std::size_t i = 1; i < n; ++i)
    if (v[i] > v[i - 1]) fail(ErrorKind::NotMonotone, "kd must be nonincreasing");
  if (kd.is_zero()) return {0.0, 0.0};
  // u^{-c} grows towards s = 1 and kd is constant on a panel, so the sup over
  // (t, 1) is a suffix maximum of panel values taken at the right ends.
  std::vector<double> S(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, v[i] * std::pow(u_of(kd.hi(i)), -e.c));
    S[i] = run;
  }
  double ir = 0.0, id = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double uh = u_of(kd.hi(i)), ul = upper_u(kd.lo(i));
    if (S[i] > 0.0) ir += std::pow(S[i], e.r) * weight_integral_u(e.w * e.r - 1.0, e.b * e.r, uh, ul, rel_tol);
    if (v[i] > 0.0) id += std::pow(v[i], e.r) * weight_integral_u(e.w * e.r - 1.0, (e.b - e.c) * e.r, uh, ul, rel_tol);
  }
  return {ir, id};
}

EquivReport sup_smoothing_check(const SmoothingExponents& e, const FunctionFamily& family, const HarnessConfig& cfg) {
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    auto [ir, id] = sup_smoothing_sides(f, e, res.rel_tol);
    MemberSides m = single(mid, ir, id);
    if (ir < id * (1.0 - 1e-9)) ++m.violations;
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report("sup-smoothing", BracketKind::TwoSided, coarse, fine, cfg);
  rep.params = {{"w", e.w}, {"b", e.b}, {"c", e.c}, {"r", e.r}};
  rep.labels = {{"family", family.name}};
  return rep;
}

// ---- discretization ----

DiscretizationSides discretization_sides(const StepFunction& h, double lambda, double q, double rel_tol) {
  if (!(q > 0.0) || !std::isfinite(q)) fail(ErrorKind::BadExponent, "q must be > 0");
  DiscretizationSides out;
  const PowerPrefix P(h, 1.0);
  const double total = P.total();
  const double mu = std::fabs(lambda);
  constexpr int K = 10;  // t_11 = 2^{-2047} is zero in double precision
  auto block = [&](int m) { return P.at(block_point(m)) - P.at(block_point(m + 1)); };
  auto pw = [&](double x) { return x > 0.0 ? std::pow(x, q) : 0.0; };

  // int_0^1 [u^{lam} int_0^t h]^q du/u and the tail analogue, panel by panel
  auto prefix_integral = [&](double lam) {
    double s = 0.0, C = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      s += panel_integral(0.0, lam * q - 1.0, C, h.values()[i], h.lo(i), h.lo(i), h.hi(i), q, rel_tol);
      C += h.values()[i] * h.width(i);
    }
    return s;
  };
  auto tail_integral = [&](double lam) {
    double s = 0.0, T = 0.0;
    for (std::size_t i = h.size(); i-- > 0;) {
      s += panel_integral(0.0, lam * q - 1.0, T, -h.values()[i], h.hi(i), h.lo(i), h.hi(i), q, rel_tol);
      T += h.values()[i] * h.width(i);
    }
    return s;
  };

  double head_sum0 = 0.0;
  for (int k = 0; k <= K; ++k) head_sum0 += pw(P.at(block_point(k)));
  out.pairs.push_back({"integral-zero", {head_sum0, prefix_integral(0.0)}});
  if (mu == 0.0) return out;

  double head_sum = 0.0, block_up = 0.0, tail_sum = 0.0, block_down = 0.0;
  for (int k = 0; k <= K; ++k) {
    head_sum += pw(P.at(block_point(k))) * std::exp2(mu * k * q);
    block_up += pw(std::exp2(mu * k) * block(k));
    block_down += pw(std::exp2(-mu * k) * block(k));
  }
  for (int k = 0; k < K; ++k) tail_sum += pw(total - P.at(block_point(k + 1))) * std::exp2(-mu * k * q);
  // from k = K on the tail block is all of (0,1): geometric series
  tail_sum += pw(total) * std::exp2(-mu * K * q) / (1.0 - std::exp2(-mu * q));

  out.pairs.push_back({"first", {head_sum, block_up}});
  out.pairs.push_back({"second", {tail_sum, block_down}});
  out.pairs.push_back({"integral-first", {head_sum, prefix_integral(mu)}});
  out.pairs.push_back({"integral-second", {tail_sum, tail_integral(-mu)}});
  return out;
}

std::vector<std::pair<double, double>> block_scale_sides(double lambda) {
  std::vector<std::pair<double, double>> out;
  auto uk = [](int k) { return 1.0 + (std::exp2(k) - 1.0) * std::log(2.0); };  // 1 - log t_k
  for (int k = 0; k <= 10; ++k) {
    out.push_back({std::exp2(k), uk(k)});
    out.push_back({std::exp2(k), uk(k + 1)});
    if (lambda != 0.0) {
      const double integral = (std::pow(uk(k + 1), lambda) - std::pow(uk(k), lambda)) / lambda;
      out.push_back({integral, std::exp2(k * lambda)});
    }
  }
  return out;
}

EquivReport discretization_check(double lambda, double q, const FunctionFamily& family, const HarnessConfig& cfg) {
  auto eval_all = [&](const std::vector<StepRearrangement>& hs, const Resolution& res) {
    std::vector<MemberSides> out(hs.size());
    parallel_for(hs.size(), cfg.threads, [&](std::size_t i) {
      MemberSides m;
      m.id = family.ids[i];
      for (auto& [name, lr] : discretization_sides(hs[i], lambda, q, res.rel_tol).pairs)
        m.sides.push_back(lr);
      if (hs[i].is_zero()) m.skip_note = "zero function";
      out[i] = m;
    });
    MemberSides blocks;
    blocks.id = "block-scale";
    blocks.sides = block_scale_sides(lambda == 0.0 ? 1.0 : lambda);
    const double spots[] = {1.0, 0.5, 0.125, 1.0 / 128.0};
    for (int k = 0; k < 4; ++k)
      if (block_point(k) != spots[k]) ++blocks.violations;
    out.push_back(blocks);
    return out;
  };
  // Step data are exact at any panel count, so refinement tightens the quadrature instead.
  Resolution fine = cfg.res;
  fine.rel_tol = cfg.res.rel_tol * 1e-2;
  const auto hs = family.discretize(cfg.res);
  auto coarse = eval_all(hs, cfg.res);
  auto refined = eval_all(hs, fine);
  EquivReport rep = assemble_report("discretization", BracketKind::TwoSided, coarse, refined, cfg);
  rep.params = {{"lambda", lambda}, {"q", q}};
  rep.labels = {{"family", family.name}};
  return rep;
}

// ---- explicit constants ----

DoublingSupResult doubling_sup_sides(const StepRearrangement& f, double p, double r, double eps,
                                     const std::vector<double>& x_grid) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::BadExponent, "eps must lie in (0,1)");
  if (!(r > 1.0) || !std::isfinite(r)) fail(ErrorKind::BadExponent, "r must lie in (1,inf)");
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::BadExponent, "p must lie in [1,inf)");
  DoublingSupResult res;
  if (f.is_zero()) return res;
  const double a = (1.0 - eps) / p;
  const double constant = 2.0 * std::pow(std::log(2.0), 1.0 - 1.0 / r);
  const auto& v = f.values();
  double worst = -1.0;
  for (double x : x_grid) {
    if (!(x > 0.0 && x <= 1.0)) continue;
    double lhs = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < f.size() && f.lo(i) < x; ++i) {
      const double top = std::min(f.hi(i), x);
      lhs = std::max(lhs, v[i] * std::pow(top, a));  // t^a f increases on each panel
      if (v[i] > 0.0) sum += std::pow(v[i], r) * (std::pow(top, r * a) - std::pow(f.lo(i), r * a)) / (r * a);
    }
    const double rhs = constant * std::pow(sum, 1.0 / r);
    if (lhs > rhs * (1.0 + 1e-12)) ++res.violations;
    const double q = rhs > 0.0 ? lhs / rhs : 0.0;
    if (q > worst) {
      worst = q;
      res.lhs = lhs;
      res.rhs = rhs;
      res.ratio = q;
    }
  }
  return res;
}

EquivReport doubling_sup_check(double p, double r, double eps, const FunctionFamily& family, const HarnessConfig& cfg) {
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    const UGrid grid(res.u_max, res.k_nodes);
    std::vector<double> xs = break_points(f);
    for (int j = 0; j < grid.count(); ++j) xs.push_back(grid.t(j));
    auto d = doubling_sup_sides(f, p, r, eps, xs);
    MemberSides m = single(mid, d.lhs, d.rhs);
    m.violations = d.violations;
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report("doubling-sup", BracketKind::Exact, coarse, fine, cfg);
  rep.params = {{"p", p}, {"r", r}, {"eps", eps}};
  rep.labels = {{"family", family.name}};
  return rep;
}

std::pair<double, double> head_mean_sides(const StepRearrangement& f, double p, double alpha, const UGrid& grid) {
  if (!(p > 1.0 && std::isfinite(p))) fail(ErrorKind::BadExponent, "p must lie in (1,inf)");
  if (!(alpha > 0.0)) fail(ErrorKind::BadExponent, "alpha must be > 0");
  if (f.is_zero()) return {0.0, 0.0};
  const double sigma = p / (p - 1.0);
  const PowerPrefix P(f, 1.0);
  // x = t^sigma: u_x - 1 = sigma (u - 1)
  auto g = [&](double t) {
    const double u = u_of(t);
    const double x = t_of(1.0 + sigma * (u - 1.0));
    return std::exp(u - 1.0) * std::pow(u, -alpha / p) * P.at(x);
  };
  std::vector<double> bps;
  for (double b : break_points(f)) bps.push_back(t_of(1.0 + (u_of(b) - 1.0) / sigma));
  const double lhs = sup_on_grid(g, grid, bps).value;
  return {lhs, grand_norm(f, p, alpha)};
}

std::pair<double, double> head_power_sides(const StepRearrangement& f, double p, double q, double alpha,
                                           const UGrid& grid) {
  if (!(p > 1.0 && q > p && std::isfinite(q))) fail(ErrorKind::BadExponent, "need 1 < p < q < inf");
  if (!(alpha > 0.0)) fail(ErrorKind::BadExponent, "alpha must be > 0");
  if (f.is_zero()) return {0.0, 0.0};
  const PowerPrefix P(f, p);
  auto g = [&](double t) {
    const double u = u_of(t);
    return std::pow(t, 1.0 / q - 1.0 / p) * std::pow(u, -alpha / q) * std::pow(P.at(t), 1.0 / p);
  };
  const double lhs = sup_on_grid(g, grid, break_points(f)).value;
  return {lhs, grand_norm(f, q, alpha)};
}

EquivReport head_grand_check(double p, double q, double alpha, const FunctionFamily& family, const HarnessConfig& cfg) {
  head_power_sides(StepRearrangement::zero(), p, q, alpha, UGrid(2.0, 2));
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution& res) {
    const UGrid grid(res.u_max, res.sup_count);
    MemberSides m;
    m.id = mid;
    if (f.is_zero()) {
      m.skip_note = "zero function";
      return m;
    }
    auto a = head_mean_sides(f, p, alpha, grid);
    auto b = head_power_sides(f, p, q, alpha, grid);
    m.sides = {a, b};
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report("head-grand", BracketKind::Upper, coarse, fine, cfg);
  rep.params = {{"p", p}, {"q", q}, {"alpha", alpha}};
  rep.labels = {{"family", family.name}};
  return rep;
}

double associate_lower_bound(const StepRearrangement& f, const SpaceSpec& x, const std::vector<StepRearrangement>& g) {
  validate_space(x);
  if (f.is_zero()) return 0.0;
  double best = 0.0;
  for (const auto& h : g) {
    const double n = norm(h, x);
    if (!(n > 0.0) || !std::isfinite(n)) continue;
    best = std::max(best, product_integral(f, h) / n);
  }
  return best;
}

EquivReport associate_check(double p, double alpha, const FunctionFamily& family, const HarnessConfig& cfg) {
  validate_space(Grand{p, alpha});
  const double pp = p / (p - 1.0);
  auto one_level = [&](const Resolution& res) {
    const auto fs = family.discretize(res);
    std::vector<MemberSides> out(fs.size());
    parallel_for(fs.size(), cfg.threads, [&](std::size_t i) {
      MemberSides m;
      m.id = family.ids[i];
      if (fs[i].is_zero()) {
        m.skip_note = "zero function";
      } else {
        // pairing candidates: the family itself and f^{p'-1}, which saturates Hoelder
        std::vector<StepRearrangement> cands = fs;
        std::vector<double> vals;
        for (double v : fs[i].values()) vals.push_back(std::pow(v, pp - 1.0));
        cands.emplace_back(fs[i].breaks(), vals);
        m.sides.push_back({associate_lower_bound(fs[i], Grand{p, alpha}, cands), small_norm(fs[i], pp, alpha, res.rel_tol)});
      }
      out[i] = m;
    });
    return out;
  };
  auto coarse = one_level(cfg.res);
  auto fine = one_level(cfg.res.refined());
  EquivReport rep = assemble_report("associate-grand", BracketKind::Upper, coarse, fine, cfg);
  rep.params = {{"p", p}, {"alpha", alpha}};
  rep.labels = {{"space", space_label(Grand{p, alpha})}, {"associate", space_label(Small{pp, alpha})},
                {"family", family.name}};
  return rep;
}

EquivReport ggamma_lower_bound_experiment(const FunctionFamily& family, const HarnessConfig& cfg) {
  const std::vector<GammaDouble> specs{GammaDouble(2.0, 2.0, LogWeight{-1.0, 0.0}, LogWeight{0.0, -1.0}),
                                       GammaDouble(2.0, 3.0, LogWeight{0.0, 1.0}, LogWeight{0.0, 0.0}),
                                       GammaDouble(3.0, 2.0, LogWeight{-0.5, -1.0}, LogWeight{0.0, 1.0})};
  const double sets[] = {1.0, 0.5, 0.125, 1.0 / 128.0};
  auto eval = [&](const std::string& mid, const StepRearrangement& f, const Resolution&) {
    MemberSides m;
    m.id = mid;
    if (f.is_zero()) {
      m.skip_note = "zero function";
      return m;
    }
    // stored as (smaller side, larger side) so the asserted direction is ratio <= 1
    for (const auto& g : specs) {
      for (double e : sets) {
        auto s = ggamma_lower_bound_check(f, g, e);
        m.sides.push_back({s.rhs, s.lhs});
        if (s.lhs < s.rhs * (1.0 - 1e-8)) ++m.violations;
      }
    }
    return m;
  };
  auto [coarse, fine] = run_family(family, cfg, eval);
  EquivReport rep = assemble_report("ggamma-lower-bound", BracketKind::Exact, coarse, fine, cfg);
  for (std::size_t i = 0; i < specs.size(); ++i)
    rep.labels.push_back({"space" + std::to_string(i), space_label(specs[i])});
  rep.labels.push_back({"family", family.name});
  return rep;
}

EquivReport log_bounds_experiment(const HarnessConfig& cfg) {
  const double alphas[] = {-2.0, -0.5, 0.0, 0.5};
  const double betas[] = {-1.0, 0.0, 1.0, 2.0};
  auto level = [&](const Resolution& res) {
    const UGrid grid(res.u_max, res.k_nodes);
    // a -> 1 is where most ratios peak; probe it at every resolution
    std::vector<double> a_grid{1.0 - 1e-12};
    for (int j = 1; j < grid.count(); ++j) a_grid.push_back(grid.t(j));
    std::vector<MemberSides> out;
    for (double al : alphas) {
      for (double be : betas) {
        BoundsReport b = log_integral_bounds_check(al, be, a_grid);
        MemberSides m;
        m.id = "alpha=" + fmt(al) + ",beta=" + fmt(be);
        for (double h : b.head_ratios) m.sides.push_back({h, 1.0});
        if (b.lower_bound_checked && !b.lower_bound_holds) ++m.violations;
        out.push_back(m);
        if (!b.tail_ratios.empty()) {
          MemberSides t;
          t.id = m.id + "/tail";
          for (double h : b.tail_ratios) t.sides.push_back({h, 1.0});
          out.push_back(t);
        }
      }
    }
    return out;
  };
  auto coarse = level(cfg.res);
  auto fine = level(cfg.res.refined());
  EquivReport rep = assemble_report("log-integral-bounds", BracketKind::Upper, coarse, fine, cfg);
  return rep;
}

EquivReport c_conditions_experiment(const HarnessConfig& cfg) {
  const std::vector<std::pair<SpaceSpec, SpaceSpec>> pairs{{Grand{2.0, 1.0}, Grand{4.0, 1.0}},
                                                           {Small{2.0, 1.0}, Small{4.0, 1.0}},
                                                           {Grand{2.0, 1.0}, Small{2.0, 1.0}}};
  std::vector<MemberSides> coarse, fine;
  EquivReport extra;
  for (const auto& [x0, x1] : pairs) {
    const std::string id = space_label(x0) + "/" + space_label(x1);
    CReport c = check_C_conditions(x0, x1, UGrid(cfg.res.u_max, cfg.res.k_nodes));
    MemberSides a, b;
    a.id = b.id = id;
    a.sides = {{c.c0, 1.0}, {c.c1, 1.0}, {c.c2, 1.0}};
    b.sides = {{c.c0_refined, 1.0}, {c.c1_refined, 1.0}, {c.c2_refined, 1.0}};
    if (!c.pass) {
      ++a.violations;
      extra.notes.push_back(id + ": " + c.note);
    }
    coarse.push_back(a);
    fine.push_back(b);
  }
  EquivReport rep = assemble_report("c-conditions", BracketKind::Upper, coarse, fine, cfg);
  rep.notes.insert(rep.notes.end(), extra.notes.begin(), extra.notes.end());
  return rep;
}

// ---- registry ----

namespace {

struct Entry {
  ExperimentInfo info;
  std::function<EquivReport(const ParamMap&, const HarnessConfig&, CurveCache&)> run;
};

double family_q(const ParamMap& pm) {
  auto it = pm.find("q");
  if (it != pm.end() && std::isfinite(it->second)) return it->second;
  return 2.0 * pm.at("p");
}

IdentityParams identity_params(const ParamMap& pm) {
  IdentityParams ip;
  ip.p = pm.at("p");
  ip.q = pm.count("q") ? pm.at("q") : 2.0 * ip.p;
  ip.theta = pm.count("theta") ? pm.at("theta") : ip.theta;
  ip.r = pm.count("r") ? pm.at("r") : ip.r;
  ip.alpha = pm.count("alpha") ? pm.at("alpha") : ip.alpha;
  return ip;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    const IdentityParams d;
    for (Identity id : all_identities()) {
      ParamMap defaults;
      switch (id) {
        case Identity::GrandLqEndpoint:
        case Identity::LebesgueEndpoint:
          defaults = {{"p", d.p}, {"q", d.q}, {"alpha", d.alpha}};
          break;
        case Identity::GrandGrandLz:
        case Identity::SmallSmallDual:
          defaults = {{"p", d.p}, {"q", d.q}, {"theta", d.theta}, {"r", d.r}, {"alpha", d.alpha}};
          break;
        case Identity::SmallSmallLz:
          defaults = {{"p", d.p}, {"q", d.q}, {"theta", d.theta}, {"r", d.r}};
          break;
        case Identity::SmallLpLinf:
          defaults = {{"p", d.p}, {"alpha", d.alpha}};
          break;
        case Identity::SmallLpLq:
          defaults = {{"p", d.p}, {"q", d.q}, {"alpha", d.alpha}};
          break;
        case Identity::SamePGGamma:
        case Identity::SamePZ:
        case Identity::SamePLebesgue:
          defaults = {{"p", d.p}, {"theta", d.theta}, {"r", d.r}};
          break;
      }
      e.push_back({{identity_name(id), "interpolation norm against its identified target norm", defaults},
                   [id](const ParamMap& pm, const HarnessConfig& cfg, CurveCache& cache) {
                     IdentityParams ip = identity_params(pm);
                     identity_case(id, ip);  // hypotheses before building the family
                     return run_identity_experiment(id, ip, standard_family(family_q(pm), cfg.seed), cfg, &cache);
                   }});
    }
    auto kb = [](std::string name, ParamMap defaults, std::function<CoupleSpec(const ParamMap&)> make) {
      return Entry{{std::move(name), "oracle K against the explicit two-term formula", std::move(defaults)},
                   [make](const ParamMap& pm, const HarnessConfig& cfg, CurveCache&) {
                     return k_bracket_experiment(make(pm), standard_family(family_q(pm), cfg.seed), cfg);
                   }};
    };
    e.push_back(kb("k-lp-lq", {{"p", 2.0}, {"q", 4.0}}, [](const ParamMap& m) {
      return CoupleSpec{LpLq{m.at("p"), m.at("q")}};
    }));
    e.push_back(kb("k-grand-lq", {{"p", 2.0}, {"q", 4.0}, {"alpha", 1.0}}, [](const ParamMap& m) {
      return CoupleSpec{GrandLq{m.at("p"), m.at("q"), m.at("alpha")}};
    }));
    e.push_back(kb("k-grand-grand", {{"p", 2.0}, {"q", 4.0}, {"alpha", 1.0}}, [](const ParamMap& m) {
      return CoupleSpec{GrandGrand{m.at("p"), m.at("q"), m.at("alpha")}};
    }));
    e.push_back(kb("k-small-small", {{"p", 2.0}, {"q", 4.0}}, [](const ParamMap& m) {
      return CoupleSpec{SmallSmall{m.at("p"), m.at("q")}};
    }));
    e.push_back(kb("k-grand-small", {{"p", 2.0}}, [](const ParamMap& m) {
      return CoupleSpec{GrandSmallSameP{m.at("p")}};
    }));

    auto hardy = [](std::string name, HardyDisplay which, ParamMap defaults) {
      return Entry{{std::move(name), "weighted Hardy inequality, left side over right side", std::move(defaults)},
                   [which](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                     HardyExponents ex;
                     if (m.count("lambda")) ex.lambda = m.at("lambda");
                     if (m.count("b")) ex.b = m.at("b");
                     if (m.count("beta")) ex.beta = m.at("beta");
                     if (m.count("a")) ex.a = m.at("a");
                     if (m.count("alpha")) ex.alpha = m.at("alpha");
                     return hardy_check(which, ex, standard_family(m.at("q"), cfg.seed), cfg);
                   }};
    };
    e.push_back(hardy("hardy-power-prefix", HardyDisplay::PowerPrefix, {{"lambda", 0.5}, {"b", 1.0}, {"beta", 0.0}, {"q", 4.0}}));
    e.push_back(hardy("hardy-power-tail", HardyDisplay::PowerTail, {{"lambda", 0.5}, {"b", 2.0}, {"beta", 1.0}, {"q", 4.0}}));
    e.push_back(hardy("hardy-log-prefix", HardyDisplay::LogPrefix, {{"a", 2.0}, {"alpha", 1.0}, {"q", 4.0}}));
    e.push_back(hardy("hardy-log-tail", HardyDisplay::LogTail, {{"a", 2.0}, {"alpha", -1.0}, {"q", 4.0}}));

    e.push_back({{"sup-smoothing", "integral of a right sup against the plain integral (theta, r, alpha, q form)",
                  {{"theta", 0.5}, {"r", 2.0}, {"alpha", 1.0}, {"q", 4.0}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   auto ex = SmoothingExponents::interpolation_form(m.at("theta"), m.at("r"), m.at("alpha"), m.at("q"));
                   EquivReport rep = sup_smoothing_check(ex, standard_family(m.at("q"), cfg.seed), cfg);
                   rep.experiment = "sup-smoothing";
                   return rep;
                 }});
    e.push_back({{"sup-smoothing-log", "integral of a right sup against the plain integral (nu, beta, q, r form)",
                  {{"nu", 0.5}, {"beta", 0.0}, {"q", 4.0}, {"r", 2.0}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   auto ex = SmoothingExponents::log_form(m.at("nu"), m.at("beta"), m.at("q"), m.at("r"));
                   EquivReport rep = sup_smoothing_check(ex, standard_family(m.at("q"), cfg.seed), cfg);
                   rep.experiment = "sup-smoothing-log";
                   return rep;
                 }});
    e.push_back({{"discretization", "block sums on t_k = 2^{1-2^k} against integrals", {{"lambda", 1.0}, {"q", 1.0}, {"count", 20.0}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   const int count = static_cast<int>(m.at("count"));
                   if (count < 1) fail(ErrorKind::BadConfig, "count must be >= 1");
                   return discretization_check(m.at("lambda"), m.at("q"), random_step_family(count, cfg.seed, cfg.res.u_max), cfg);
                 }});
    e.push_back({{"doubling-sup", "weighted sup bounded by a weighted integral with constant 2 (log 2)^{1/r'}",
                  {{"p", 2.0}, {"r", 2.0}, {"eps", 0.5}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   return doubling_sup_check(m.at("p"), m.at("r"), m.at("eps"), standard_family(2.0 * m.at("p"), cfg.seed), cfg);
                 }});
    e.push_back({{"head-grand", "head averages against the grand norm", {{"p", 2.0}, {"q", 4.0}, {"alpha", 1.0}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   return head_grand_check(m.at("p"), m.at("q"), m.at("alpha"), standard_family(m.at("q"), cfg.seed), cfg);
                 }});
    e.push_back({{"associate-grand", "associate norm lower bound of the grand space against the small norm",
                  {{"p", 2.0}, {"alpha", 1.0}}},
                 [](const ParamMap& m, const HarnessConfig& cfg, CurveCache&) {
                   return associate_check(m.at("p"), m.at("alpha"), standard_family(2.0 * m.at("p"), cfg.seed), cfg);
                 }});
    e.push_back({{"ggamma-lower-bound", "restricted GGamma norm inequality", {}},
                 [](const ParamMap&, const HarnessConfig& cfg, CurveCache&) {
                   return ggamma_lower_bound_experiment(standard_family(4.0, cfg.seed), cfg);
                 }});
    e.push_back({{"log-integral-bounds", "head and tail integrals of t^a (1 - log t)^b", {}},
                 [](const ParamMap&, const HarnessConfig& cfg, CurveCache&) { return log_bounds_experiment(cfg); }});
    e.push_back({{"c-conditions", "fundamental-function conditions for the explicit K formula", {}},
                 [](const ParamMap&, const HarnessConfig& cfg, CurveCache&) { return c_conditions_experiment(cfg); }});
    return e;
  }();
  return entries;
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

EquivReport Harness::run(const std::string& name, const ParamMap& params) {
  for (const auto& e : registry()) {
    if (e.info.name != name) continue;
    ParamMap pm = e.info.defaults;
    for (const auto& [k, v] : params) {
      if (!pm.count(k)) fail(ErrorKind::BadConfig, "unknown parameter '" + k + "' for experiment " + name);
      pm[k] = v;
    }
    EquivReport rep = e.run(pm, cfg_, cache_);
    rep.params.assign(pm.begin(), pm.end());
    return rep;
  }
  fail(ErrorKind::BadConfig, "unknown experiment '" + name + "'");
}

}  // namespace rispaces
