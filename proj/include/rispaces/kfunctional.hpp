#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rispaces/logcalc.hpp"
#include "rispaces/norms.hpp"

namespace rispaces {

struct LpLq {
  double p, q;  // 1 <= p < q <= inf
};
struct GrandLq {
  double p, q, alpha;
};
struct GrandGrand {
  double p, q, alpha;
};
struct SmallSmall {
  double p, q;  // alpha = 1 on both sides
};
struct GrandSmallSameP {
  double p;  // grand(p,1) with small(p,1)
};
struct GeneralCouple {
  SpaceSpec x0, x1;
};
using CoupleSpec = std::variant<LpLq, GrandLq, GrandGrand, SmallSmall, GrandSmallSameP, GeneralCouple>;

void validate_couple(const CoupleSpec& c);
std::string couple_label(const CoupleSpec& c);
SpaceSpec couple_x0(const CoupleSpec& c);
SpaceSpec couple_x1(const CoupleSpec& c);
// psi with phi = psi^{-1} splitting head and tail terms of the explicit formula.
MonotoneMap couple_psi(const CoupleSpec& c);

// {"couple":"grand_lq","p":2,"q":4,"alpha":1}; "l1_linf" is shorthand for lp_lq with p=1, q=inf.
CoupleSpec couple_from_json(const std::string& text);

// Norms of the truncation decompositions f = (f - lambda)_+ + min(f, lambda), one per
// step value lambda (and lambda = 0).  K(t) is then a minimum of lines A + t B.
class KTable {
 public:
  KTable(const StepRearrangement& f, const CoupleSpec& c, double rel_tol = Defaults::rel_tol);
  double operator()(double t) const;
  std::size_t size() const { return a_.size(); }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }

 private:
  std::vector<double> a_, b_;
};

double k_oracle(const StepRearrangement& f, const CoupleSpec& c, double t);

class KExplicit {
 public:
  KExplicit(const StepRearrangement& f, const CoupleSpec& c, double rel_tol = Defaults::rel_tol);
  double operator()(double t) const;
  const MonotoneMap& psi() const { return psi_; }

 private:
  StepRearrangement f_;
  CoupleSpec c_;
  MonotoneMap psi_;
  double rel_tol_;
  std::optional<PowerPrefix> pre_p_, pre_q_;
  std::optional<TailSupTable> tail_;
  std::optional<LogMeanPrefix> mean_;
};

double k_explicit(const StepRearrangement& f, const CoupleSpec& c, double t);

enum class KMethod { Oracle, Explicit };

struct KCurve {
  std::vector<double> t_nodes;   // increasing
  std::vector<double> k_values;
  bool monotone = true;          // nondecreasing in t
  bool concave = true;           // K/t nonincreasing
};

// Samples K at t_j = e^{1 - u_j} in increasing t and flags the curve invariants.
KCurve k_curve(const StepRearrangement& f, const CoupleSpec& c, const UGrid& grid, KMethod method);
KCurve make_curve(std::vector<double> t_nodes, std::vector<double> k_values);

struct CReport {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double c0_refined = 0.0, c1_refined = 0.0, c2_refined = 0.0;
  bool pass = false;
  std::string note;
};

CReport check_C_conditions(const SpaceSpec& x0, const SpaceSpec& x1, const UGrid& grid);

}  // namespace rispaces
