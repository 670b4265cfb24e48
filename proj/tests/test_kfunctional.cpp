#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "rispaces/error.hpp"
#include "rispaces/kfunctional.hpp"

using namespace rispaces;

namespace {

const StepRearrangement kOne = StepRearrangement::constant(1.0);
StepRearrangement chi(double a) { return StepRearrangement({0, a, 1}, {1, 0}); }

std::vector<CoupleSpec> couples() {
  return {LpLq{1, 2},         LpLq{2, 4},        LpLq{1, kInf},          GrandLq{2, 4, 1},
          GrandGrand{2, 4, 1}, SmallSmall{2, 4}, GrandSmallSameP{2},      GeneralCouple{Lebesgue{2}, Lebesgue{4}}};
}

std::vector<StepRearrangement> functions() {
  return {kOne, chi(0.5), chi(1.0 / 128), discretize_model(PowerLog{0.2, 1}, 35, 120),
          StepRearrangement({0, 1e-9, 1e-4, 0.1, 1}, {30, 9, 2, 1})};
}

std::vector<double> probe_t() {
  std::vector<double> t;
  for (int k = 0; k <= 40; ++k) t.push_back(std::exp(-0.8 * k));
  return t;
}

}  // namespace

TEST(KFunctional, OracleOnL1LinfIndicator) {
  const auto f = chi(0.5);
  for (double t : probe_t()) EXPECT_NEAR(k_oracle(f, LpLq{1, kInf}, t), std::min(t, 0.5), 1e-15) << t;
  EXPECT_EQ(k_oracle(f, LpLq{1, kInf}, 3.0), 0.5);
}

TEST(KFunctional, ZeroFunction) {
  const auto z = StepRearrangement::zero();
  for (const auto& c : couples()) {
    EXPECT_EQ(k_oracle(z, c, 0.3), 0.0) << couple_label(c);
    EXPECT_EQ(k_explicit(z, c, 0.3), 0.0) << couple_label(c);
    const auto curve = k_curve(z, c, UGrid(35, 20), KMethod::Oracle);
    for (double k : curve.k_values) EXPECT_EQ(k, 0.0);
  }
}

TEST(KFunctional, EndpointBounds) {
  for (const auto& c : couples()) {
    for (const auto& f : functions()) {
      const double n0 = norm(f, couple_x0(c)), n1 = norm(f, couple_x1(c));
      for (double t : probe_t()) EXPECT_LE(k_oracle(f, c, t), std::min(n0, t * n1) + 1e-12) << couple_label(c);
      // beyond the ratio of norms the h = 0 split is already optimal
      EXPECT_LE(k_oracle(f, c, 2 * n0 / n1), n0 * (1 + 1e-12));
    }
  }
}

TEST(KFunctional, OracleIsMonotoneAndConcave) {
  for (const auto& c : couples()) {
    for (const auto& f : functions()) {
      KTable table(f, c);
      const auto t = probe_t();  // decreasing
      for (std::size_t j = 1; j < t.size(); ++j) {
        const double big = table(t[j - 1]), small = table(t[j]);
        EXPECT_LE(small, big * (1 + 1e-9)) << couple_label(c);
        EXPECT_GE(small / t[j], (big / t[j - 1]) * (1 - 1e-9)) << couple_label(c);
      }
      const auto curve = k_curve(f, c, UGrid(35, 60), KMethod::Oracle);
      EXPECT_TRUE(curve.monotone);
      EXPECT_TRUE(curve.concave);
    }
  }
}

TEST(KFunctional, ScalingIsExact) {
  const auto f = functions()[3];
  const auto g = scaled(f, 2.5);
  for (const auto& c : couples()) {
    for (double t : {1e-10, 1e-3, 0.4}) {
      const double a = k_oracle(f, c, t), b = k_oracle(g, c, t);
      EXPECT_NEAR(b, 2.5 * a, 1e-12 * b) << couple_label(c);
      const double x = k_explicit(f, c, t), y = k_explicit(g, c, t);
      EXPECT_NEAR(y, 2.5 * x, 1e-12 * y) << couple_label(c);
    }
  }
}

TEST(KFunctional, ExplicitLpLqClosedForm) {
  // t^2 + t (1 - t^2)^{1/2} at t = 1/2
  EXPECT_NEAR(k_explicit(kOne, LpLq{1, 2}, 0.5), 0.25 + 0.5 * std::sqrt(0.75), 1e-12);
  EXPECT_NEAR(k_explicit(kOne, LpLq{1, 2}, 0.5), 0.6830, 1e-4);
}

TEST(KFunctional, ExplicitSamePAgainstQuadrature) {
  // phi_1(1/2) = e^{-1}; the sup and the tail integral done by brute force here
  const double x = std::exp(-1.0);
  double head = 0.0;
  for (int k = 1; k < 200000; ++k) {
    const double s = x * k / 200000.0;
    head = std::max(head, std::pow(u_of(s), -0.5) * std::sqrt(x - s));
  }
  // ds/s = -du: int over u in (1, 2)
  const int n = 200000;
  double tail = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = 1.0 + (k + 0.5) / n;
    tail += std::pow(u, -0.5) * std::sqrt(t_of(u) - x) / n;
  }
  EXPECT_NEAR(k_explicit(kOne, GrandSmallSameP{2}, 0.5), head + 0.5 * tail, 1e-7);
}

TEST(KFunctional, L1LinfCurve) {
  const auto curve = k_curve(chi(0.5), LpLq{1, kInf}, UGrid(35, 50), KMethod::Oracle);
  for (std::size_t j = 0; j < curve.t_nodes.size(); ++j)
    EXPECT_NEAR(curve.k_values[j], std::min(curve.t_nodes[j], 0.5), 1e-15);
  for (std::size_t j = 1; j < curve.t_nodes.size(); ++j) EXPECT_GT(curve.t_nodes[j], curve.t_nodes[j - 1]);
}

TEST(KFunctional, CurveFlags) {
  auto c = make_curve({0.1, 0.5, 1.0}, {0.1, 0.3, 0.2});
  EXPECT_FALSE(c.monotone);
  c = make_curve({0.1, 0.5, 1.0}, {0.01, 0.3, 0.6});
  EXPECT_TRUE(c.monotone);
  EXPECT_FALSE(c.concave);
}

TEST(KFunctional, ExplicitBracketsLebesgueCouples) {
  for (const CoupleSpec& c : {CoupleSpec{LpLq{1, 2}}, CoupleSpec{LpLq{2, 4}}}) {
    double worst = 1.0;
    for (const auto& f : functions()) {
      KTable oracle(f, c);
      KExplicit expl(f, c);
      for (double t : probe_t()) {
        const double r = oracle(t) / expl(t);
        worst = std::max({worst, r, 1 / r});
      }
    }
    EXPECT_LE(worst, 16.0) << couple_label(c);
  }
}

TEST(KFunctional, InverseMapsOfCouples) {
  for (const auto& c : couples()) {
    const auto psi = couple_psi(c);
    for (int k = 0; k <= 200; ++k) {
      const double y = psi.range_max() * std::exp(-0.15 * k);
      if (psi.is_log_inverse() && y > 1.0) continue;
      const double t = psi.inverse(y);
      // subnormal t carries too few digits; the u form is exact there
      const double back = t >= DBL_MIN ? psi.forward(t) : psi.forward_u(psi.inverse_u(y));
      EXPECT_NEAR(back, y, 1e-10 * y) << couple_label(c);
    }
  }
}

TEST(KFunctional, ConditionsOnLebesgue) {
  const auto same = check_C_conditions(Lebesgue{2}, Lebesgue{2}, UGrid(35, 64));
  EXPECT_NEAR(same.c0, 2.0, 1e-9);
  const auto mixed = check_C_conditions(Grand{2, 1}, Lebesgue{4}, UGrid(35, 64));
  EXPECT_TRUE(std::isfinite(mixed.c0));
  EXPECT_TRUE(std::isfinite(mixed.c1));
  EXPECT_TRUE(std::isfinite(mixed.c2));
  EXPECT_TRUE(mixed.pass) << mixed.note;
}

TEST(KFunctional, Validation) {
  EXPECT_THROW(validate_couple(LpLq{2, 2}), Error);
  EXPECT_THROW(validate_couple(LpLq{3, 2}), Error);
  EXPECT_THROW(validate_couple(GrandSmallSameP{1}), Error);
  EXPECT_THROW(k_explicit(kOne, LpLq{1, 2}, 0.0), Error);
  const auto c = couple_from_json(R"({"couple":"grand_lq","p":2,"q":4,"alpha":1})");
  EXPECT_EQ(couple_label(c), couple_label(GrandLq{2, 4, 1}));
  EXPECT_THROW(couple_from_json(R"({"couple":"lp_lq","p":2,"q":4,"alpha":1})"), Error);
  EXPECT_THROW(couple_from_json(R"({"couple":"mystery"})"), Error);
  EXPECT_TRUE(std::holds_alternative<LpLq>(couple_from_json(R"({"couple":"l1_linf"})")));
}
