#pragma once

#include <string>
#include <variant>

#include "rispaces/logcalc.hpp"
#include "rispaces/rearrangement.hpp"

namespace rispaces {

struct Lebesgue {
  double p;  // [1, inf]
};
struct LorentzZygmund {
  double p, q, alpha;  // p in (1,inf), q in [1,inf]
};
struct Grand {
  double p, alpha;
};
// Parameterized by its own exponent; callers convert from a Grand partner's p'.
struct Small {
  double p, alpha;
};

// rho(v) = [int_0^1 w1(t) (int_0^t v_*^p w2)^{m/p} dt]^{1/m}, sup form for m = inf.
// Construction checks the doubling/embedding condition on w2 and the
// membership of int_0^t w2 in L^{m/p}(w1).
class GammaDouble {
 public:
  GammaDouble(double p, double m, LogWeight w1, LogWeight w2);
  double p() const { return p_; }
  double m() const { return m_; }
  const LogWeight& w1() const { return w1_; }
  const LogWeight& w2() const { return w2_; }
  double k12() const { return k12_; }                           // w2(2t) <= K12 w2(t)
  double quasi_triangle_constant() const;                       // (2 K12)^{1/p}
  double w2_mass(double t) const;                               // int_0^t w2

 private:
  double p_, m_;
  LogWeight w1_, w2_;
  double k12_ = 1.0;
};

using SpaceSpec = std::variant<Lebesgue, LorentzZygmund, Grand, Small, GammaDouble>;

void validate_space(const SpaceSpec& spec);
std::string space_label(const SpaceSpec& spec);

double lebesgue_norm(const StepFunction& f, double p);
double lorentz_zygmund_norm(const StepFunction& f, double p, double q, double alpha,
                            double rel_tol = Defaults::rel_tol);
double grand_norm(const StepFunction& f, double p, double alpha);
double small_norm(const StepFunction& f, double p, double alpha, double rel_tol = Defaults::rel_tol);
double ggamma_norm(const StepFunction& f, const GammaDouble& spec, double rel_tol = Defaults::rel_tol);
// Same functional restricted to the outer range (0, x).
double ggamma_partial(const StepFunction& f, const GammaDouble& spec, double x, double rel_tol = Defaults::rel_tol);

// int_a^b (1 - log s)^e (C0 + vp (s - lo))^{1/p} ds/s on one panel of a step function.
double log_mean_segment(double C0, double vp, double lo, double a, double b, double p, double e,
                        double rel_tol = Defaults::rel_tol);

// x -> int_0^x (1 - log s)^e (int_0^s f^p)^{1/p} ds/s with per-break cumulative sums,
// so one query costs a single panel quadrature.
class LogMeanPrefix {
 public:
  LogMeanPrefix(const StepFunction& f, double p, double e, double rel_tol = Defaults::rel_tol);
  double at(double x) const;

 private:
  std::vector<double> breaks_, vp_, F_, cum_;
  double p_, e_, rel_tol_;
};

// int_x^1 (1 - log s)^e (int_x^s f^p)^{1/p} ds/s.
double log_mean_tail(const StepFunction& f, double p, double e, double x, double rel_tol = Defaults::rel_tol);

double norm(const StepFunction& f, const SpaceSpec& spec, double rel_tol = Defaults::rel_tol);

struct FundamentalValue {
  double exact;       // norm of chi_(0,t)
  double equivalent;  // closed-form equivalent
};
FundamentalValue fundamental_function(const SpaceSpec& spec, double t);
double fundamental_equivalent(const SpaceSpec& spec, double t);

struct LowerBoundSides {
  double lhs;
  double rhs;
};
LowerBoundSides ggamma_lower_bound_check(const StepFunction& f, const GammaDouble& spec, double meas_e);

// {"space":"grand","p":2,"alpha":1}; p or q may be the string "inf".
SpaceSpec space_from_json(const std::string& text);

}  // namespace rispaces
