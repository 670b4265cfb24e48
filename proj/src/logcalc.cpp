#include "rispaces/logcalc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "rispaces/error.hpp"

namespace rispaces {

namespace {

template <int N>
struct GaussRule {
  std::array<double, N> x{};
  std::array<double, N> w{};
  GaussRule() {
    const double pi = std::acos(-1.0);
    for (int i = 0; i < N; ++i) {
      double z = std::cos(pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= N; ++k) {
          double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussRule<15>& rule15() {
  static const GaussRule<15> r;
  return r;
}
const GaussRule<7>& rule7() {
  static const GaussRule<7> r;
  return r;
}

struct Segment {
  double a, b, value, err;
  int depth;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment estimate(const std::function<double(double)>& g, double a, double b, int depth, long& evals) {
  const auto& r15 = rule15();
  const auto& r7 = rule7();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s15 = 0.0, s7 = 0.0;
  for (int i = 0; i < 15; ++i) {
    double v = g(c + h * r15.x[i]);
    if (std::isnan(v)) fail(ErrorKind::NonFiniteValue, "integrand returned NaN");
    s15 += r15.w[i] * v;
  }
  for (int i = 0; i < 7; ++i) {
    double x = r7.x[i];
    double v = (std::fabs(x) < 1e-15) ? g(c) : g(c + h * x);
    if (std::isnan(v)) fail(ErrorKind::NonFiniteValue, "integrand returned NaN");
    s7 += r7.w[i] * v;
  }
  evals += 21;
  return {a, b, h * s15, std::fabs(h * (s15 - s7)), depth};
}

double integrate_finite(const std::function<double(double)>& g, double lo, double hi, double rel_tol) {
  long evals = 0;
  Segment first = estimate(g, lo, hi, 0, evals);
  if (std::isinf(first.value)) return first.value;
  std::priority_queue<Segment> heap;
  heap.push(first);
  double total = first.value, err = first.err;
  while (err > std::max(rel_tol * std::fabs(total), 1e-300)) {
    Segment s = heap.top();
    // Once every remaining error is at rounding level there is nothing to gain.
    if (s.err <= 1e-15 * std::fabs(total)) break;
    heap.pop();
    if (s.depth >= 40) fail(ErrorKind::NoConvergence, "adaptive quadrature exhausted its depth");
    if (evals > 4000000) fail(ErrorKind::NoConvergence, "adaptive quadrature exhausted its budget");
    double mid = 0.5 * (s.a + s.b);
    Segment l = estimate(g, s.a, mid, s.depth + 1, evals);
    Segment r = estimate(g, mid, s.b, s.depth + 1, evals);
    if (std::isinf(l.value) || std::isinf(r.value)) return kInf;
    total += l.value + r.value - s.value;
    err += l.err + r.err - s.err;
    heap.push(l);
    heap.push(r);
    if (heap.size() % 64 == 0) {
      // refresh the running sums to keep cancellation error out of the stopping test
      auto copy = heap;
      total = 0.0;
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().err;
        copy.pop();
      }
    }
  }
  return total;
}

}  // namespace

double LogWeight::operator()(double t) const { return at_u(u_of(t)); }
double LogWeight::at_u(double u) const { return std::exp(a * (1.0 - u)) * std::pow(u, b); }

double log_weight_sup(const LogWeight& w, double u1, double u2) {
  double best = w.at_u(u1);
  if (std::isinf(u2)) {
    double lim;
    if (w.a > 0.0) lim = 0.0;
    else if (w.a < 0.0) lim = kInf;
    else lim = w.b > 0.0 ? kInf : (w.b < 0.0 ? 0.0 : 1.0);
    best = std::max(best, lim);
  } else {
    best = std::max(best, w.at_u(u2));
  }
  if (w.a != 0.0) {
    double uc = w.b / w.a;  // stationary point of a(1-u) + b log u
    if (uc > u1 && uc < u2) best = std::max(best, w.at_u(uc));
  }
  return best;
}

UGrid::UGrid(double u_max, int count) : u_max_(u_max), count_(count) {
  if (!(u_max > 1.0) || !std::isfinite(u_max)) fail(ErrorKind::BadConfig, "grid needs u_max > 1");
  if (count < 2) fail(ErrorKind::BadConfig, "grid needs at least 2 nodes");
}

double UGrid::u(int j) const { return 1.0 + (u_max_ - 1.0) * j / (count_ - 1); }

double integrate_u(const std::function<double(double)>& g, double u_lo, double u_hi, double rel_tol) {
  if (std::isnan(u_lo) || std::isnan(u_hi) || u_hi < u_lo) fail(ErrorKind::BadInterval, "bad integration range");
  if (u_hi == u_lo) return 0.0;
  if (std::isfinite(u_hi)) return integrate_finite(g, u_lo, u_hi, rel_tol);

  // Infinite range: pieces of doubling width.  A geometric fit of the last
  // piece ratios estimates what is left once the tail is in its asymptotic regime.
  double total = 0.0, prev = -1.0, prev_ratio = -1.0;
  double a = u_lo, w = 2.0;
  int growing = 0, zeros = 0;
  for (int k = 0; k < 1100; ++k) {
    double piece = integrate_finite(g, a, a + w, rel_tol);
    if (std::isinf(piece)) return kInf;
    total += piece;
    double mag = std::fabs(piece);
    if (mag == 0.0) {
      if (++zeros >= 3) return total;
    } else {
      zeros = 0;
    }
    if (prev > 0.0 && mag > 0.0) {
      double ratio = mag / prev;
      if (ratio < 1.0) {
        growing = 0;
        double rem = mag * ratio / (1.0 - ratio);
        if (rem <= rel_tol * std::fabs(total)) return total + rem;
        if (k >= 6 && std::fabs(ratio - prev_ratio) <= 1e-7 * ratio) return total + rem;
      } else if (a > 1e6) {
        if (++growing >= 6) return kInf;
      }
      prev_ratio = ratio;
    }
    prev = mag;
    a += w;
    w *= 2.0;
    if (a > 1e300) break;
  }
  fail(ErrorKind::NoConvergence, "tail of an infinite-range integral did not settle");
}

double weight_integral_u(double A, double B, double u_lo, double u_hi, double rel_tol) {
  if (u_hi <= u_lo) return 0.0;
  const double c = A + 1.0;
  const bool inf_hi = std::isinf(u_hi);
  if (B == 0.0) {
    if (c == 0.0) return u_hi - u_lo;
    if (inf_hi) return c > 0.0 ? std::exp(c * (1.0 - u_lo)) / c : kInf;
    return std::exp(c * (1.0 - u_lo)) * (-std::expm1(-c * (u_hi - u_lo))) / c;
  }
  if (c == 0.0) {
    if (B == -1.0) return inf_hi ? kInf : std::log(u_hi / u_lo);
    if (inf_hi) return B < -1.0 ? std::pow(u_lo, B + 1.0) / (-(B + 1.0)) : kInf;
    return (std::pow(u_hi, B + 1.0) - std::pow(u_lo, B + 1.0)) / (B + 1.0);
  }
  if (inf_hi && c < 0.0) return kInf;
  return integrate_u([c, B](double u) { return std::exp(c * (1.0 - u)) * std::pow(u, B); }, u_lo, u_hi, rel_tol);
}

double log_weight_integral(const StepFunction& f, double p, const LogWeight& w, double a, double b, double rel_tol) {
  if (!(a >= 0.0 && a < b && b <= 1.0)) fail(ErrorKind::BadInterval, "need 0 <= a < b <= 1");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) fail(ErrorKind::BadConfig, "rel_tol must lie in (0, 1e-4]");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double lo = std::max(a, f.lo(i)), hi = std::min(b, f.hi(i));
    double v = f.values()[i];
    if (!(hi > lo) || v == 0.0) continue;
    double ulo = lo > 0.0 ? u_of(lo) : kInf;
    sum += std::pow(v, p) * weight_integral_u(w.a, w.b, u_of(hi), ulo, rel_tol);
  }
  return sum;
}

SupResult sup_on_grid(const std::function<double(double)>& g, const UGrid& grid, const std::vector<double>& breakpoints) {
  std::vector<double> us;
  us.reserve(grid.count() + 2 * breakpoints.size());
  for (int j = 0; j < grid.count(); ++j) us.push_back(grid.u(j));
  for (double b : breakpoints) {
    if (!(b > 0.0 && b <= 1.0)) continue;
    us.push_back(u_of(b));
    double right = b * (1.0 + 1e-12);
    if (right < 1.0) us.push_back(u_of(right));
  }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());

  auto eval = [&](double u) {
    double v = g(t_of(u));
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteValue, "supremum probe returned a non-finite value");
    return v;
  };
  std::size_t best = 0;
  double best_val = -kInf;
  for (std::size_t i = 0; i < us.size(); ++i) {
    double v = eval(us[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double best_u = us[best];
  double lo = us[best > 0 ? best - 1 : 0];
  double hi = us[std::min(best + 1, us.size() - 1)];
  if (hi > lo) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    while (hi - lo > 1e-8 * std::max(1.0, std::fabs(lo))) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = eval(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = eval(x1);
      }
    }
    double um = 0.5 * (lo + hi), fm = eval(um);
    if (fm > best_val) {
      best_val = fm;
      best_u = um;
    }
  }
  return {best_val, t_of(best_u)};
}

double tail_panel_max(double lo, double hi, double T_hi, double wp, double c, double p) {
  const double inv_p = 1.0 / p;
  auto value = [&](double t, double u) {
    double T = T_hi + wp * (hi - t);
    if (T <= 0.0) return 0.0;
    return std::pow(u, -c) * std::pow(T, inv_p);
  };
  const double u_hi = u_of(hi);
  if (c == 0.0) return std::pow(T_hi + wp * (hi - lo), inv_p);
  if (wp == 0.0) return value(hi, u_hi);
  // The sign of d/dt log F is the sign of h = c p T(t) - wp t u, which increases with u.
  auto h = [&](double u) {
    double t = t_of(u);
    return c * p * (T_hi + wp * (hi - t)) - wp * t * u;
  };
  if (h(u_hi) >= 0.0) return value(hi, u_hi);
  double u_lo = lo > 0.0 ? u_of(lo) : 740.0;
  u_lo = std::min(u_lo, 740.0);
  if (h(u_lo) <= 0.0) return value(t_of(u_lo), u_lo);
  double a = u_hi, b = u_lo;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (h(m) < 0.0) a = m; else b = m;
  }
  double um = 0.5 * (a + b);
  return value(t_of(um), um);
}

TailSupTable::TailSupTable(const StepFunction& f, double p, double c) : breaks_(f.breaks()), p_(p), c_(c) {
  const std::size_t n = f.size();
  vp_.resize(n);
  tail_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) vp_[i] = f.values()[i] > 0.0 ? std::pow(f.values()[i], p) : 0.0;
  for (std::size_t i = n; i-- > 0;) tail_[i] = tail_[i + 1] + vp_[i] * f.width(i);
  suffix_.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double m = tail_panel_max(breaks_[i], breaks_[i + 1], tail_[i + 1], vp_[i], c_, p_);
    suffix_[i] = std::max(m, suffix_[i + 1]);
  }
}

double TailSupTable::operator()(double x) const {
  if (x >= 1.0) return 0.0;
  if (x <= 0.0) return suffix_[0];
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  double m = tail_panel_max(x, breaks_[i + 1], tail_[i + 1], vp_[i], c_, p_);
  return std::max(m, suffix_[i + 1]);
}

double head_sup(const StepFunction& f, const PowerPrefix& prefix, double p, double c, double y) {
  if (y <= 0.0) return 0.0;
  y = std::min(y, 1.0);
  const double Cy = prefix.at(y);
  double best = 0.0;
  for (std::size_t i = 0; i < f.size() && f.lo(i) < y; ++i) {
    double hi = std::min(f.hi(i), y);
    double v = f.values()[i];
    double vp = v > 0.0 ? std::pow(v, p) : 0.0;
    double T_hi = std::max(0.0, Cy - prefix.at(hi));
    best = std::max(best, tail_panel_max(f.lo(i), hi, T_hi, vp, c, p));
  }
  return best;
}

double invert_monotone(const std::function<double(double)>& psi, double y, double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) fail(ErrorKind::BadConfig, "tolerance must lie in (0, 1e-6]");
  auto at = [&](double u) { return psi(t_of(u)); };
  double ua = 1.0, ub = 2.0;
  double fa = at(ua), fb = at(ub);
  auto brackets = [&](double x, double z) { return (x - y) * (z - y) <= 0.0; };
  while (!brackets(fa, fb)) {
    if (ub >= 740.0) fail(ErrorKind::OutOfRange, "value outside the range of the map");
    ua = ub;
    fa = fb;
    ub = std::min(2.0 * ub, 740.0);
    fb = at(ub);
  }
  for (int it = 0; it < 300; ++it) {
    double m = 0.5 * (ua + ub);
    if (m <= ua || m >= ub) break;
    double fm = at(m);
    if (brackets(fa, fm)) {
      ub = m;
      fb = fm;
    } else {
      ua = m;
      fa = fm;
    }
  }
  double u = std::fabs(fa - y) <= std::fabs(fb - y) ? ua : ub;
  double t = t_of(u);
  if (std::fabs(psi(t) - y) > tol * std::max(std::fabs(y), 1e-300))
    fail(ErrorKind::NoConvergence, "bisection could not meet the residual tolerance");
  return t;
}

MonotoneMap MonotoneMap::from_weight(const LogWeight& w) {
  if (!(w.a > 0.0) || !std::isfinite(w.b)) fail(ErrorKind::BadExponent, "monotone map needs a > 0");
  MonotoneMap m;
  m.w_ = w;
  m.u0_ = (w.a < w.b) ? w.b / w.a : 1.0;  // t0 = e^{(a-b)/a}
  return m;
}

MonotoneMap MonotoneMap::log_inverse() {
  MonotoneMap m;
  m.w_ = {0.0, -1.0};
  m.u0_ = 1.0;
  m.log_inverse_ = true;
  return m;
}

double MonotoneMap::forward_u(double u) const { return w_.at_u(u); }
double MonotoneMap::forward(double t) const { return forward_u(u_of(t)); }

double MonotoneMap::inverse_u(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) fail(ErrorKind::OutOfRange, "map inverse needs y > 0");
  if (log_inverse_) {
    if (y > 1.0) fail(ErrorKind::OutOfRange, "log map inverse needs y <= 1");
    return 1.0 / y;
  }
  const double ymax = range_max();
  if (y > ymax * (1.0 + 4e-16)) fail(ErrorKind::OutOfRange, "value above the range of the monotone map");
  if (y >= ymax) return u0_;
  const double ly = std::log(y);
  auto L = [&](double u) { return w_.a * (1.0 - u) + w_.b * std::log(u); };  // decreasing for u >= u0
  double lo = u0_, step = 1.0, hi = u0_ + step;
  while (L(hi) > ly) {
    lo = hi;
    step *= 2.0;
    hi = u0_ + step;
    if (hi > 1e300) fail(ErrorKind::OutOfRange, "value below the representable range");
  }
  for (int it = 0; it < 400; ++it) {
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (L(m) > ly) lo = m; else hi = m;
  }
  return std::fabs(L(lo) - ly) <= std::fabs(L(hi) - ly) ? lo : hi;
}

double MonotoneMap::inverse(double y) const { return t_of(inverse_u(y)); }

double MonotoneMap::normalized(double s) const {
  if (s <= 0.0) return 0.0;
  return forward(s * t0()) / range_max();
}

double MonotoneMap::normalized_inverse(double y) const {
  if (y <= 0.0) return 0.0;
  return inverse(std::min(y, 1.0) * range_max()) / t0();
}

BoundsReport log_integral_bounds_check(double alpha, double beta, const std::vector<double>& a_grid) {
  if (!(alpha < 1.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    fail(ErrorKind::BadExponent, "bounds check needs alpha < 1 and finite beta");
  BoundsReport rep;
  rep.a_grid = a_grid;
  rep.lower_bound = 1.0 / (1.0 - alpha);
  rep.lower_bound_checked = beta >= 0.0;
  for (double a : a_grid) {
    if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::BadExponent, "probe points must lie in (0,1)");
    double ua = u_of(a);
    double head = weight_integral_u(-alpha, beta, ua, kInf) / (std::pow(a, 1.0 - alpha) * std::pow(ua, beta));
    rep.head_ratios.push_back(head);
    rep.max_head_ratio = std::max(rep.max_head_ratio, head);
    rep.min_head_ratio = std::min(rep.min_head_ratio, head);
    // quadrature slack only; the closed-form cases are exact
    if (rep.lower_bound_checked && head < rep.lower_bound * (1.0 - 1e-9)) rep.lower_bound_holds = false;
    if (alpha < -1.0) {
      double tail = weight_integral_u(alpha, beta, 1.0, ua) / (std::pow(a, alpha + 1.0) * std::pow(ua, beta));
      rep.tail_ratios.push_back(tail);
      rep.max_tail_ratio = std::max(rep.max_tail_ratio, tail);
    }
  }
  return rep;
}

}  // namespace rispaces
