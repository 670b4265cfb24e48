#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rispaces/kfunctional.hpp"

namespace rispaces {

struct InterpParams {
  double theta = 0.5;  // [0,1]
  double r = 2.0;      // [1,inf]
  double alpha = 0.0;  // log exponent
};

struct DerivedExponents {
  double p_theta;      // 1/p_theta = (1-theta)/p + theta/q
  double sigma;        // pq/(q-p)
  double alpha_theta;  // 1 - theta - 1/p_theta
  double lambda;       // theta (1/p - 1/q)
  double lambda1;      // (1-theta)(1/p - 1/q)
  double a;            // lambda - theta
  double beta_theta;   // theta - 1/p - 1/r
};
DerivedExponents derive_exponents(double p, double q, double theta, double r);

// (int_0^1 [t^{-theta} (1 - log t)^alpha K(t)]^r dt/t)^{1/r}, sup form for r = inf.
// K is log-linear between nodes and proportional to t below the first node, so
// every piece integrates in closed form (or by a 1-D quadrature in u).
double interp_norm(const KCurve& curve, const InterpParams& params, double rel_tol = Defaults::rel_tol);

// Norm on Z = (grand(p,1), small(p,1))_{theta,r}: tail form for theta < 1/p, prefix
// form for theta > 1/p, block sum over t_k = 2^{1-2^k} at theta = 1/p.
double z_norm(const StepFunction& f, double p, double theta, double r, double rel_tol = Defaults::rel_tol);
double z_norm_alt(const StepFunction& f, double p, double theta, double r, double rel_tol = Defaults::rel_tol);
double block_point(int k);  // t_k = 2^{1-2^k}

enum class Identity {
  GrandLqEndpoint,   // (grand(p,a), L^q)_{1,inf;-a/q} = grand(q,a)
  LebesgueEndpoint,  // (L^p, L^q)_{1,inf;-a/q} = grand(q,a)
  GrandGrandLz,      // (grand(p,a), grand(q,a))_{theta,r} = LZ(p_theta, r, -a/p_theta)
  SmallSmallDual,    // (small(p,a), small(q,a))_{theta,r} = LZ(p_theta, r, a/p_theta)
  SmallSmallLz,      // (small(p), small(q))_{theta,r} = LZ(p_theta, r, 1 - theta - 1/p_theta)
  SmallLpLinf,       // (L^p, L^inf)_{0,1;-a/p+a-1} = small(p,a)
  SmallLpLq,         // (L^p, L^q)_{0,1;-a/p+a-1} = small(p,a)
  SamePGGamma,       // (grand(p), small(p))_{theta,r} = GGamma(p, r; t^{-1}u^{theta r-1}, u^{-1})
  SamePZ,            // (grand(p), small(p))_{theta,r} against z_norm
  SamePLebesgue      // (grand(p), small(p))_{1/p,p} = L^p
};

struct IdentityParams {
  double p = 2.0, q = 4.0, theta = 0.5, r = 2.0, alpha = 1.0;
};

const std::vector<Identity>& all_identities();
std::string identity_name(Identity id);
std::optional<Identity> identity_from_name(const std::string& name);

struct IdentityCase {
  CoupleSpec couple;
  InterpParams interp;
  std::function<double(const StepRearrangement&)> target;
  std::string target_label;
};

// Checks the hypotheses (HypothesisViolation naming the failed bound) and
// assembles couple, interpolation parameters and target norm.
IdentityCase identity_case(Identity id, const IdentityParams& params);

struct TargetPair {
  double lhs;
  double rhs;
};
TargetPair identify_target(Identity id, const StepRearrangement& f, const IdentityParams& params,
                           const UGrid& k_grid);

}  // namespace rispaces
