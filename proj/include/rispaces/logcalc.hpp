#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "rispaces/config.hpp"
#include "rispaces/rearrangement.hpp"

namespace rispaces {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// w(t) = t^a (1 - log t)^b on (0,1).
struct LogWeight {
  double a = 0.0;
  double b = 0.0;
  double operator()(double t) const;
  double at_u(double u) const;  // same weight, argument u = 1 - log t
};

// max of w over the u-range [u1, u2]; u2 may be +inf (the limit is used there).
double log_weight_sup(const LogWeight& w, double u1, double u2);

inline double u_of(double t) { return 1.0 - std::log(t); }
inline double t_of(double u) { return std::exp(1.0 - u); }

// Uniform grid in u = 1 - log t on [1, u_max].
class UGrid {
 public:
  UGrid(double u_max, int count);
  double u_min() const { return 1.0; }
  double u_max() const { return u_max_; }
  int count() const { return count_; }
  double u(int j) const;
  double t(int j) const { return t_of(u(j)); }
  UGrid refined() const { return UGrid(u_max_, 2 * (count_ - 1) + 1); }

 private:
  double u_max_;
  int count_;
};

// Adaptive 15-point Gauss-Legendre (error from the 7-point companion) of
// g over [u_lo, u_hi] in the u variable; u_hi may be +infinity.  Returns +inf
// when the integral diverges to infinity.
double integrate_u(const std::function<double(double)>& g, double u_lo, double u_hi,
                   double rel_tol = Defaults::rel_tol);

// int_{u_lo}^{u_hi} e^{(A+1)(1-u)} u^B du, i.e. int s^A (1 - log s)^B ds over
// the matching t-interval.  Closed forms for B = 0 and A = -1.
double weight_integral_u(double A, double B, double u_lo, double u_hi, double rel_tol = Defaults::rel_tol);

// int_a^b f^p(s) w(s) ds.
double log_weight_integral(const StepFunction& f, double p, const LogWeight& w, double a, double b,
                           double rel_tol = Defaults::rel_tol);

struct SupResult {
  double value;
  double argmax;
};

// Probe g at the grid nodes and the supplied breakpoints (and just past them),
// then golden-section refine around the best probe.
SupResult sup_on_grid(const std::function<double(double)>& g, const UGrid& grid,
                      const std::vector<double>& breakpoints = {});

// sup over t in (lo, hi] of u(t)^{-c} (T_hi + wp (hi - t))^{1/p} with c >= 0.
// The function is unimodal on the interval, so the maximum is exact.
double tail_panel_max(double lo, double hi, double T_hi, double wp, double c, double p);

// S(x) = sup_{x < s < 1} (1 - log s)^{-c} (int_s^1 f^p)^{1/p} for step f.
class TailSupTable {
 public:
  TailSupTable(const StepFunction& f, double p, double c);
  double operator()(double x) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> vp_;
  std::vector<double> tail_;     // int_{x_i}^1 f^p at each break
  std::vector<double> suffix_;   // max over panels i.. of the panel maxima
  double p_, c_;
};

// sup_{0 < s < y} (1 - log s)^{-c} (int_s^y f^p)^{1/p}.
double head_sup(const StepFunction& f, const PowerPrefix& prefix, double p, double c, double y);

// Bisection inverse of a strictly monotone map on (0,1].
double invert_monotone(const std::function<double(double)>& psi, double y, double tol = 1e-12);

// psi(t) = t^a (1 - log t)^b restricted to (0, t0] where it increases
// (t0 = e^{(a-b)/a} if a < b, else 1), or the log map psi_1(t) = (1 - log t)^{-1}.
class MonotoneMap {
 public:
  static MonotoneMap from_weight(const LogWeight& w);
  static MonotoneMap log_inverse();

  double forward(double t) const;
  double forward_u(double u) const;
  double inverse(double y) const;     // phi(y), a point of (0, t0]
  double inverse_u(double y) const;   // 1 - log phi(y); finite even when phi(y) underflows
  double t0() const { return t_of(u0_); }
  double u0() const { return u0_; }
  double range_max() const { return forward_u(u0_); }
  double normalized(double s) const;          // g(s) = psi(s t0) / psi(t0)
  double normalized_inverse(double y) const;  // g^{-1}(y) in [0,1]
  bool is_log_inverse() const { return log_inverse_; }
  const LogWeight& weight() const { return w_; }

 private:
  LogWeight w_;
  double u0_ = 1.0;
  bool log_inverse_ = false;
};

struct BoundsReport {
  std::vector<double> a_grid;
  std::vector<double> head_ratios;  // int_0^a t^{-alpha} u^beta / (a^{1-alpha} u_a^beta)
  std::vector<double> tail_ratios;  // int_a^1 t^alpha u^beta / (a^{alpha+1} u_a^beta), alpha < -1 only
  double max_head_ratio = 0.0;
  double min_head_ratio = kInf;
  double max_tail_ratio = 0.0;
  double lower_bound = 0.0;         // 1/(1-alpha), asserted when beta >= 0
  bool lower_bound_checked = false;
  bool lower_bound_holds = true;
};

BoundsReport log_integral_bounds_check(double alpha, double beta, const std::vector<double>& a_grid);

}  // namespace rispaces
