#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rispaces/config.hpp"
#include "rispaces/interpolation.hpp"
#include "rispaces/kfunctional.hpp"
#include "rispaces/norms.hpp"
#include "rispaces/rearrangement.hpp"

namespace rispaces {

struct FunctionFamily {
  std::string name;
  std::vector<FunctionModel> members;
  std::vector<std::string> ids;  // parallel to members

  // Members as rearrangements at the given discretization.
  std::vector<StepRearrangement> discretize(const Resolution& res) const;
};

// f = 1, indicators of (0,a) for a in {1/2, 1/8, 1/128}, power_log with gamma in
// {0, 1/(2q'), 1/q - 1e-3} and delta in {-1, 0, 1, 2}, and `random` random
// nonincreasing step functions drawn from the seed.
FunctionFamily standard_family(double q, std::uint64_t seed, int random = 10);
// Random nonincreasing step functions only.
FunctionFamily random_step_family(int count, std::uint64_t seed, double u_max = Defaults::u_max);
FunctionFamily single_family(const FunctionModel& model);

enum class BracketKind {
  TwoSided,  // lhs ~ rhs: max(max ratio, 1/min ratio) is the bracket
  Upper,     // lhs <~ rhs: max ratio is the bracket
  Exact      // lhs <= rhs with a named constant: only violations count
};

struct MemberRatio {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double ratio_min = 0.0;  // equal to ratio unless the member holds many ratios
  double ratio_max = 0.0;
};

struct EquivReport {
  std::string experiment;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, std::string>> labels;
  BracketKind kind = BracketKind::TwoSided;
  std::vector<MemberRatio> members;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double bracket = 0.0;
  double drift = 0.0;
  double ceiling = Defaults::ceiling;
  int skipped = 0;
  int violations = 0;
  bool pass = false;
  std::uint64_t seed = Defaults::seed;
  std::vector<std::string> notes;

  std::string to_json() const;  // deterministic, keys in fixed order
};

struct HarnessConfig {
  Resolution res;
  double ceiling = Defaults::ceiling;
  std::uint64_t seed = Defaults::seed;
  int threads = 0;  // 0: hardware concurrency
};

// One member evaluated at one resolution.  Several ratios per member (K curves
// over t-nodes) are folded into ratio_min/ratio_max.
struct MemberSides {
  std::string id;
  std::vector<std::pair<double, double>> sides;  // (lhs, rhs) pairs
  int violations = 0;
  std::string skip_note;  // set when the member cannot be evaluated meaningfully
};

// Folds coarse and refined evaluations into a report; members with a zero side
// are skipped and counted.
EquivReport assemble_report(const std::string& experiment, BracketKind kind, const std::vector<MemberSides>& coarse,
                            const std::vector<MemberSides>& fine, const HarnessConfig& cfg);

// ---- identities through the interpolation pipeline ----

// Oracle K-curves are cached per (member, couple, resolution) so experiments
// sharing a couple do not rebuild them.
class CurveCache {
 public:
  KCurve get(const std::string& member_id, const StepRearrangement& f, const CoupleSpec& c, const Resolution& res);

 private:
  std::map<std::string, std::shared_ptr<const KCurve>> curves_;
};

EquivReport run_identity_experiment(Identity id, const IdentityParams& params, const FunctionFamily& family,
                                    const HarnessConfig& cfg, CurveCache* cache = nullptr);

// Oracle against explicit K over the t-nodes of the K grid.
EquivReport k_bracket_experiment(const CoupleSpec& couple, const FunctionFamily& family, const HarnessConfig& cfg);

// ---- Hardy inequalities ----

enum class HardyDisplay {
  PowerPrefix,  // int [t^{-lambda} u^beta int_0^t Phi]^b dt/t <= c int [t^{1-lambda} u^beta Phi]^b dt/t
  PowerTail,    // int [t^{lambda} u^beta int_t^1 Phi]^b dt/t <= c int [t^{1+lambda} u^beta Phi]^b dt/t
  LogPrefix,    // (int [u^alpha int_0^t psi]^a dt/t)^{1/a} <= c (int [t u^{1+alpha} psi]^a dt/t)^{1/a}, alpha + 1/a > 0
  LogTail       // same with int_t^1 psi, alpha + 1/a < 0
};

struct HardyExponents {
  double lambda = 0.5;
  double b = 1.0;  // [1, inf]
  double beta = 0.0;
  double a = 2.0;  // [1, inf]
  double alpha = 1.0;
};

std::pair<double, double> hardy_sides(HardyDisplay which, const HardyExponents& e, const StepFunction& phi,
                                      double rel_tol = Defaults::rel_tol);
EquivReport hardy_check(HardyDisplay which, const HardyExponents& e, const FunctionFamily& family,
                        const HarnessConfig& cfg);

// ---- sup smoothing ----

// I_r = int [t^w u^{b} sup_{t<s<1} u_s^{-c} K(s)]^r dt/t against
// I_d = int [t^w u^{b-c} K(t)]^r dt/t; I_r >= I_d always.
struct SmoothingExponents {
  double w, b, c, r;
  // the (theta, r, alpha, q) form: w = 1 - theta, b = alpha (1-theta)/q, c = alpha/q
  static SmoothingExponents interpolation_form(double theta, double r, double alpha, double q);
  // the (nu, beta, q, r) form: w = nu, b = beta, c = 1/q
  static SmoothingExponents log_form(double nu, double beta, double q, double r);
};

std::pair<double, double> sup_smoothing_sides(const StepFunction& kd, const SmoothingExponents& e,
                                              double rel_tol = Defaults::rel_tol);
EquivReport sup_smoothing_check(const SmoothingExponents& e, const FunctionFamily& family, const HarnessConfig& cfg);

// ---- discretization on t_k = 2^{1-2^k} ----

struct DiscretizationSides {
  std::vector<std::pair<std::string, std::pair<double, double>>> pairs;  // named (lhs, rhs)
};
DiscretizationSides discretization_sides(const StepFunction& h, double lambda, double q,
                                         double rel_tol = Defaults::rel_tol);
// Block-scale brackets 2^k ~ 1 - log s and int_{t_{k+1}}^{t_k} u^{lambda-1} dt/t ~ 2^{k lambda}.
std::vector<std::pair<double, double>> block_scale_sides(double lambda);
EquivReport discretization_check(double lambda, double q, const FunctionFamily& family, const HarnessConfig& cfg);

// ---- explicit-constant inequalities ----

// max over x of sup_{0<t<x} t^{(1-eps)/p} f(t) / [2 (log 2)^{1/r'} (int_0^x s^{r(1-eps)/p - 1} f^r ds)^{1/r}]
struct DoublingSupResult {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;  // at the worst x
  int violations = 0;
};
DoublingSupResult doubling_sup_sides(const StepRearrangement& f, double p, double r, double eps, const std::vector<double>& x_grid);
EquivReport doubling_sup_check(double p, double r, double eps, const FunctionFamily& family, const HarnessConfig& cfg);

// Head mean against the grand norm: sup t^{-1} u^{-alpha/p} int_0^{t^sigma} f, sigma = p'.
std::pair<double, double> head_mean_sides(const StepRearrangement& f, double p, double alpha, const UGrid& grid);
// Head power mean: sup t^{1/q-1/p} u^{-alpha/q} (int_0^t f^p)^{1/p} against grand_norm(f, q, alpha).
std::pair<double, double> head_power_sides(const StepRearrangement& f, double p, double q, double alpha,
                                           const UGrid& grid);
EquivReport head_grand_check(double p, double q, double alpha, const FunctionFamily& family, const HarnessConfig& cfg);

// max over g in the candidates of int f g / norm_X(g).
double associate_lower_bound(const StepRearrangement& f, const SpaceSpec& x, const std::vector<StepRearrangement>& g);
// Lower bound for the grand(p,alpha) associate norm against small_norm(f, p', alpha).
EquivReport associate_check(double p, double alpha, const FunctionFamily& family, const HarnessConfig& cfg);

EquivReport ggamma_lower_bound_experiment(const FunctionFamily& family, const HarnessConfig& cfg);
EquivReport log_bounds_experiment(const HarnessConfig& cfg);
EquivReport c_conditions_experiment(const HarnessConfig& cfg);

// ---- registry ----

using ParamMap = std::map<std::string, double>;

struct ExperimentInfo {
  std::string name;
  std::string summary;
  ParamMap defaults;
};

const std::vector<ExperimentInfo>& list_experiments();

class Harness {
 public:
  explicit Harness(HarnessConfig cfg = {}) : cfg_(cfg) {}
  // Unknown names and parameters raise BadConfig; hypothesis failures propagate.
  EquivReport run(const std::string& name, const ParamMap& params = {});
  const HarnessConfig& config() const { return cfg_; }

 private:
  HarnessConfig cfg_;
  CurveCache cache_;
};

}  // namespace rispaces
