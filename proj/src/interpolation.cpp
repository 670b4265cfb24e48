#include "rispaces/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rispaces/error.hpp"

namespace rispaces {

namespace {

void hypothesis(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::HypothesisViolation, what);
}

double upper_u(double lo) { return lo > 0.0 ? u_of(lo) : kInf; }

// K(u) = exp(L0 + m (1 - u)) on [ua, ub]
struct Piece {
  double L0, m, ua, ub;
};

}  // namespace

DerivedExponents derive_exponents(double p, double q, double theta, double r) {
  DerivedExponents d{};
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  d.p_theta = 1.0 / ((1.0 - theta) / p + theta * iq);
  d.sigma = std::isinf(q) ? p : p * q / (q - p);
  d.alpha_theta = 1.0 - theta - 1.0 / d.p_theta;
  d.lambda = theta * (1.0 / p - iq);
  d.lambda1 = (1.0 - theta) * (1.0 / p - iq);
  d.a = d.lambda - theta;
  d.beta_theta = theta - 1.0 / p - (std::isinf(r) ? 0.0 : 1.0 / r);
  return d;
}

double interp_norm(const KCurve& curve, const InterpParams& params, double rel_tol) {
  const double theta = params.theta, r = params.r, alpha = params.alpha;
  if (!(theta >= 0.0 && theta <= 1.0)) fail(ErrorKind::BadExponent, "theta must lie in [0,1]");
  if (!(r >= 1.0)) fail(ErrorKind::BadExponent, "r must lie in [1,inf]");
  const auto& t = curve.t_nodes;
  const auto& k = curve.k_values;
  if (t.size() != k.size()) fail(ErrorKind::BadConfig, "curve nodes and values differ in length");
  const std::size_t n = t.size();
  if (n == 0 || std::all_of(k.begin(), k.end(), [](double v) { return v == 0.0; })) return 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(t[j] > 0.0 && t[j] <= 1.0) || (j > 0 && !(t[j] > t[j - 1])))
      fail(ErrorKind::BadConfig, "curve nodes must increase inside (0,1]");
    if (!(k[j] >= 0.0) || !std::isfinite(k[j])) fail(ErrorKind::BadConfig, "curve values must be finite and >= 0");
  }

  std::vector<Piece> pieces;
  std::vector<std::pair<std::size_t, std::size_t>> linear;  // segments with a zero end
  if (k[0] > 0.0) {
    double u0 = u_of(t[0]);
    pieces.push_back({std::log(k[0]) - (1.0 - u0), 1.0, u0, kInf});
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (k[j] == 0.0 && k[j + 1] == 0.0) continue;
    if (k[j] == 0.0 || k[j + 1] == 0.0) {
      linear.push_back({j, j + 1});
      continue;
    }
    double uj = u_of(t[j]), uk = u_of(t[j + 1]);
    double m = (std::log(k[j + 1]) - std::log(k[j])) / (uj - uk);
    pieces.push_back({std::log(k[j]) - m * (1.0 - uj), m, uk, uj});
  }
  if (t[n - 1] < 1.0 && k[n - 1] > 0.0) pieces.push_back({std::log(k[n - 1]), 0.0, 1.0, u_of(t[n - 1])});

  if (std::isinf(r)) {
    double best = 0.0;
    for (const auto& pc : pieces)
      best = std::max(best, std::exp(pc.L0) * log_weight_sup(LogWeight{pc.m - theta, alpha}, pc.ua, pc.ub));
    for (auto [a, b] : linear) {
      for (int s = 0; s <= 64; ++s) {
        double x = t[a] + (t[b] - t[a]) * s / 64.0;
        double kv = k[a] + (k[b] - k[a]) * s / 64.0;
        if (x > 0.0) best = std::max(best, std::pow(x, -theta) * std::pow(u_of(x), alpha) * kv);
      }
    }
    if (!std::isfinite(best)) fail(ErrorKind::Divergent, "interpolation sup is infinite");
    return best;
  }

  double sum = 0.0;
  for (const auto& pc : pieces) {
    double c = r * (pc.m - theta);
    double part = weight_integral_u(c - 1.0, alpha * r, pc.ua, pc.ub, rel_tol);
    if (std::isinf(part)) fail(ErrorKind::Divergent, "interpolation integral diverges near t = 0");
    sum += std::exp(r * pc.L0) * part;
  }
  for (auto [a, b] : linear) {
    const double ta = t[a], tb = t[b], ka = k[a], kb = k[b];
    sum += integrate_u(
        [&](double u) {
          double x = t_of(u);
          double kv = ka + (kb - ka) * (x - ta) / (tb - ta);
          return std::pow(std::pow(x, -theta) * std::pow(u, alpha) * std::max(kv, 0.0), r);
        },
        u_of(tb), u_of(ta), rel_tol);
  }
  if (!std::isfinite(sum)) fail(ErrorKind::Divergent, "interpolation integral diverges");
  return std::pow(sum, 1.0 / r);
}

double block_point(int k) {
  if (k < 0) fail(ErrorKind::BadPoint, "block index must be >= 0");
  if (k >= 11) return 0.0;  // 2^{1-2^k} is below the smallest subnormal
  return std::ldexp(1.0, 1 - (1 << k));
}

double z_norm(const StepFunction& f, double p, double theta, double r, double rel_tol) {
  if (!(p > 1.0 && std::isfinite(p))) fail(ErrorKind::BadExponent, "z norm needs 1 < p < inf");
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorKind::BadExponent, "z norm needs 0 < theta < 1");
  if (!(r >= 1.0 && std::isfinite(r))) fail(ErrorKind::BadExponent, "z norm needs 1 <= r < inf");
  if (f.is_zero()) return 0.0;
  const double beta = theta - 1.0 / p - 1.0 / r, e = r / p;

  if (std::fabs(theta - 1.0 / p) <= 1e-15) {
    double sum = 0.0;
    for (int k = 0; k <= 10; ++k) {
      double block = power_integral(f, p, block_point(k + 1), block_point(k));
      if (block > 0.0) sum += std::pow(block, e);
    }
    return std::pow(sum, 1.0 / r);
  }

  const std::size_t n = f.size();
  std::vector<double> vp(n);
  for (std::size_t i = 0; i < n; ++i) vp[i] = f.values()[i] > 0.0 ? std::pow(f.values()[i], p) : 0.0;
  double sum = 0.0;
  if (theta < 1.0 / p) {
    double T = 0.0;  // int_{hi}^1 f^p
    for (std::size_t i = n; i-- > 0;) {
      const double lo = f.lo(i), hi = f.hi(i), u_hi = u_of(hi), u_lo = upper_u(lo);
      if (vp[i] == 0.0) {
        if (T > 0.0) sum += std::pow(T, e) * weight_integral_u(-1.0, beta * r, u_hi, u_lo, rel_tol);
      } else {
        const double Th = T, w = vp[i];
        sum += integrate_u([&](double u) { return std::pow(u, beta * r) * std::pow(Th + w * (hi - t_of(u)), e); },
                           u_hi, u_lo, rel_tol);
      }
      T += vp[i] * (hi - lo);
    }
  } else {
    double F = 0.0;  // int_0^{lo} f^p
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = f.lo(i), hi = f.hi(i), u_hi = u_of(hi), u_lo = upper_u(lo);
      if (lo == 0.0) {
        sum += std::pow(vp[i], e) * weight_integral_u(e - 1.0, beta * r, u_hi, kInf, rel_tol);
      } else if (vp[i] == 0.0) {
        sum += std::pow(F, e) * weight_integral_u(-1.0, beta * r, u_hi, u_lo, rel_tol);
      } else {
        const double Fl = F, w = vp[i];
        sum += integrate_u([&](double u) { return std::pow(u, beta * r) * std::pow(Fl + w * (t_of(u) - lo), e); },
                           u_hi, u_lo, rel_tol);
      }
      F += vp[i] * (hi - lo);
    }
  }
  if (!std::isfinite(sum)) fail(ErrorKind::Divergent, "z norm integral diverges");
  return std::pow(sum, 1.0 / r);
}

double z_norm_alt(const StepFunction& f, double p, double theta, double r, double rel_tol) {
  if (!(p > 1.0 && std::isfinite(p))) fail(ErrorKind::BadExponent, "z norm needs 1 < p < inf");
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorKind::BadExponent, "z norm needs 0 < theta < 1");
  if (!(r >= 1.0 && std::isfinite(r))) fail(ErrorKind::BadExponent, "z norm needs 1 <= r < inf");
  if (f.is_zero()) return 0.0;
  // outer measure u^{theta r} dt/(u t) = u^{theta r - 1} du; inner weight u^{-1}
  const double b = theta * r - 1.0, e = r / p;
  double sum = 0.0, P = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.values()[i];
    const double vp = v > 0.0 ? std::pow(v, p) : 0.0;
    const double u_hi = u_of(f.hi(i)), u_lo = upper_u(f.lo(i));
    if (vp == 0.0) {
      if (P > 0.0) sum += std::pow(P, e) * weight_integral_u(-1.0, b, u_hi, u_lo, rel_tol);
      continue;
    }
    const double P0 = P;
    sum += integrate_u(
        [&](double u) { return std::pow(u, b) * std::pow(P0 + vp * weight_integral_u(0.0, -1.0, u, u_lo, rel_tol), e); },
        u_hi, u_lo, rel_tol);
    P += vp * weight_integral_u(0.0, -1.0, u_hi, u_lo, rel_tol);
  }
  if (!std::isfinite(sum)) fail(ErrorKind::Divergent, "z norm integral diverges");
  return std::pow(sum, 1.0 / r);
}

const std::vector<Identity>& all_identities() {
  static const std::vector<Identity> ids{Identity::GrandLqEndpoint, Identity::LebesgueEndpoint, Identity::GrandGrandLz,
                                         Identity::SmallSmallDual,  Identity::SmallSmallLz,     Identity::SmallLpLinf,
                                         Identity::SmallLpLq,       Identity::SamePGGamma,      Identity::SamePZ,
                                         Identity::SamePLebesgue};
  return ids;
}

std::string identity_name(Identity id) {
  switch (id) {
    case Identity::GrandLqEndpoint: return "grand-lq-endpoint";
    case Identity::LebesgueEndpoint: return "lebesgue-endpoint";
    case Identity::GrandGrandLz: return "grand-grand-lz";
    case Identity::SmallSmallDual: return "small-small-dual";
    case Identity::SmallSmallLz: return "small-small-lz";
    case Identity::SmallLpLinf: return "small-lp-linf";
    case Identity::SmallLpLq: return "small-lp-lq";
    case Identity::SamePGGamma: return "same-p-ggamma";
    case Identity::SamePZ: return "same-p-z";
    case Identity::SamePLebesgue: return "same-p-lebesgue";
  }
  return "unknown";
}

std::optional<Identity> identity_from_name(const std::string& name) {
  for (Identity id : all_identities())
    if (identity_name(id) == name) return id;
  return std::nullopt;
}

IdentityCase identity_case(Identity id, const IdentityParams& pr) {
  const double p = pr.p, q = pr.q, theta = pr.theta, r = pr.r, alpha = pr.alpha;
  auto need_pq = [&](bool strict_p) {
    if (strict_p) hypothesis(p > 1.0, "p > 1 required");
    else hypothesis(p >= 1.0, "p >= 1 required");
    hypothesis(q > p, "p < q required");
    hypothesis(std::isfinite(q), "q < inf required");
  };
  auto need_alpha = [&] { hypothesis(alpha > 0.0 && std::isfinite(alpha), "alpha > 0 required"); };
  auto need_theta = [&] { hypothesis(theta > 0.0 && theta < 1.0, "0 < theta < 1 required"); };
  auto need_r = [&](bool strict) {
    if (strict) hypothesis(r > 1.0, "r > 1 required");
    else hypothesis(r >= 1.0, "r >= 1 required");
    hypothesis(std::isfinite(r), "r < inf required");
  };

  IdentityCase c;
  switch (id) {
    case Identity::GrandLqEndpoint:
    case Identity::LebesgueEndpoint: {
      need_pq(id == Identity::GrandLqEndpoint);
      need_alpha();
      if (id == Identity::GrandLqEndpoint) c.couple = GrandLq{p, q, alpha};
      else c.couple = LpLq{p, q};
      c.interp = {1.0, kInf, -alpha / q};
      c.target = [q, alpha](const StepRearrangement& f) { return grand_norm(f, q, alpha); };
      c.target_label = space_label(Grand{q, alpha});
      break;
    }
    case Identity::GrandGrandLz:
    case Identity::SmallSmallDual:
    case Identity::SmallSmallLz: {
      need_theta();
      need_r(id == Identity::SmallSmallDual);
      need_pq(true);
      const double pt = derive_exponents(p, q, theta, r).p_theta;
      double lz_alpha;
      if (id == Identity::GrandGrandLz) {
        need_alpha();
        c.couple = GrandGrand{p, q, alpha};
        lz_alpha = -alpha / pt;
      } else if (id == Identity::SmallSmallDual) {
        need_alpha();
        c.couple = GeneralCouple{Small{p, alpha}, Small{q, alpha}};
        lz_alpha = alpha / pt;
      } else {
        c.couple = SmallSmall{p, q};
        lz_alpha = derive_exponents(p, q, theta, r).alpha_theta;
      }
      c.interp = {theta, r, 0.0};
      c.target = [pt, r, lz_alpha](const StepRearrangement& f) { return lorentz_zygmund_norm(f, pt, r, lz_alpha); };
      c.target_label = space_label(LorentzZygmund{pt, r, lz_alpha});
      break;
    }
    case Identity::SmallLpLinf:
    case Identity::SmallLpLq: {
      if (id == Identity::SmallLpLq) {
        need_pq(true);
        c.couple = LpLq{p, q};
      } else {
        hypothesis(p > 1.0 && std::isfinite(p), "1 < p < inf required");
        c.couple = LpLq{p, kInf};
      }
      need_alpha();
      c.interp = {0.0, 1.0, -alpha / p + alpha - 1.0};
      c.target = [p, alpha](const StepRearrangement& f) { return small_norm(f, p, alpha); };
      c.target_label = space_label(Small{p, alpha});
      break;
    }
    case Identity::SamePGGamma:
    case Identity::SamePZ: {
      hypothesis(p > 1.0 && std::isfinite(p), "1 < p < inf required");
      need_theta();
      need_r(false);
      c.couple = GrandSmallSameP{p};
      c.interp = {theta, r, 0.0};
      if (id == Identity::SamePGGamma) {
        GammaDouble g(p, r, LogWeight{-1.0, theta * r - 1.0}, LogWeight{0.0, -1.0});
        c.target = [g](const StepRearrangement& f) { return ggamma_norm(f, g); };
        c.target_label = space_label(g);
      } else {
        c.target = [p, theta, r](const StepRearrangement& f) { return z_norm(f, p, theta, r); };
        std::ostringstream os;
        os << "z(p=" << p << ",theta=" << theta << ",r=" << r << ")";
        c.target_label = os.str();
      }
      break;
    }
    case Identity::SamePLebesgue: {
      hypothesis(p > 1.0 && std::isfinite(p), "1 < p < inf required");
      hypothesis(std::fabs(theta - 1.0 / p) <= 1e-12, "theta = 1/p required");
      hypothesis(r == p, "r = p required");
      c.couple = GrandSmallSameP{p};
      c.interp = {theta, r, 0.0};
      c.target = [p](const StepRearrangement& f) { return lebesgue_norm(f, p); };
      c.target_label = space_label(Lebesgue{p});
      break;
    }
  }
  return c;
}

TargetPair identify_target(Identity id, const StepRearrangement& f, const IdentityParams& params, const UGrid& k_grid) {
  IdentityCase c = identity_case(id, params);
  KCurve curve = k_curve(f, c.couple, k_grid, KMethod::Oracle);
  return {interp_norm(curve, c.interp), c.target(f)};
}

}  // namespace rispaces
