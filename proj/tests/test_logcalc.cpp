#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rispaces/error.hpp"
#include "rispaces/logcalc.hpp"

using namespace rispaces;

namespace {

const StepRearrangement kOne = StepRearrangement::constant(1.0);

// Split every panel in two; same function, twice the panels.
StepRearrangement bisected(const StepRearrangement& f) {
  std::vector<double> b{0.0}, v;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mid = f.lo(i) > 0.0 ? std::sqrt(f.lo(i) * f.hi(i)) : 0.5 * f.hi(i);
    b.push_back(mid);
    b.push_back(f.hi(i));
    v.push_back(f.values()[i]);
    v.push_back(f.values()[i]);
  }
  return StepRearrangement(b, v);
}

// brute force sup of g over a dense t grid mixing linear and log spacing
double dense_sup(const std::function<double(double)>& g, int n = 400000) {
  double best = -INFINITY;
  for (int k = 1; k <= n; ++k) {
    best = std::max(best, g(static_cast<double>(k) / n));
    best = std::max(best, g(std::exp(-35.0 * k / n)));
  }
  return best;
}

}  // namespace

TEST(LogCalc, WeightIntegralExamples) {
  const double a = std::exp(-1.0);
  EXPECT_NEAR(log_weight_integral(kOne, 1, {-1, -2}, a, 1), 0.5, 1e-12);
  for (double x : {0.5, 1e-3, 1e-10})
    EXPECT_NEAR(log_weight_integral(kOne, 1, {-1, -2}, x, 1), 1.0 - 1.0 / u_of(x), 1e-12);
  EXPECT_NEAR(log_weight_integral(kOne, 1, {0, 1}, 0, 1), 2.0, 1e-10);
  // 2 e^{1/2} int_1^inf e^{-v^2/2} dv via the complementary error function
  const double gauss = 2.0 * std::exp(0.5) * std::sqrt(M_PI / 2.0) * std::erfc(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(log_weight_integral(kOne, 1, {-0.5, -0.5}, 0, 1), gauss, 1e-9);
  EXPECT_NEAR(gauss, 1.311, 1e-3);
}

TEST(LogCalc, ClosedFormsMatchQuadrature) {
  for (double A : {-1.0, -0.5, 0.0, 1.5}) {
    for (double B : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
      const double lo = 1.3, hi = 17.0;
      const double closed = weight_integral_u(A, B, lo, hi);
      const double quad =
          integrate_u([A, B](double u) { return std::exp((A + 1) * (1 - u)) * std::pow(u, B); }, lo, hi);
      EXPECT_NEAR(closed, quad, 1e-10 * quad) << A << " " << B;
    }
  }
  EXPECT_TRUE(std::isinf(weight_integral_u(-1.0, -1.0, 1.0, kInf)));
  EXPECT_TRUE(std::isinf(weight_integral_u(-2.0, 0.0, 1.0, kInf)));
  EXPECT_NEAR(weight_integral_u(-1.0, -2.0, 1.0, kInf), 1.0, 1e-15);
}

TEST(LogCalc, InfiniteRangeQuadrature) {
  // int_1^inf e^{-u} u^2 du = 5/e
  EXPECT_NEAR(integrate_u([](double u) { return std::exp(-u) * u * u; }, 1.0, kInf), 5.0 / std::exp(1.0), 1e-10);
  EXPECT_TRUE(std::isinf(integrate_u([](double u) { return 1.0 / std::sqrt(u); }, 1.0, kInf)));
  EXPECT_THROW(integrate_u([](double) { return 1.0; }, 2.0, 1.0), Error);
}

TEST(LogCalc, QuadratureStableUnderPanelDoubling) {
  const auto f = discretize_model(PowerLog{0.3, 1}, 35, 300);
  const auto g = bisected(f);
  for (LogWeight w : {LogWeight{-0.5, -0.5}, LogWeight{0.2, 1.0}, LogWeight{-1, -2}}) {
    const double a = log_weight_integral(f, 2, w, 0, 1), b = log_weight_integral(g, 2, w, 0, 1);
    EXPECT_NEAR(a, b, 10 * Defaults::rel_tol * a);
  }
}

TEST(LogCalc, WeightSupClosedForm) {
  const LogWeight w{0.5, 2.0};  // stationary at u = 4
  EXPECT_NEAR(log_weight_sup(w, 1, 10), w.at_u(4.0), 1e-15);
  EXPECT_EQ(log_weight_sup({0, 1}, 1, kInf), kInf);
  EXPECT_EQ(log_weight_sup({0, -1}, 1, kInf), 1.0);
}

TEST(LogCalc, SupExamples) {
  UGrid grid(35, Defaults::sup_count);
  const auto par = sup_on_grid([](double t) { return t * (1 - t); }, grid);
  EXPECT_NEAR(par.value, 0.25, 1e-8);
  EXPECT_NEAR(par.argmax, 0.5, 1e-4);

  auto g = [](double t) { return std::sqrt(1 - t) / u_of(t); };
  const auto r = sup_on_grid(g, grid);
  EXPECT_NEAR(r.value, dense_sup(g), 1e-9);
  EXPECT_NEAR(r.value, 0.4198, 1e-4);
  EXPECT_NEAR(r.argmax, 0.55, 0.02);

  EXPECT_EQ(sup_on_grid([](double) { return 3.0; }, grid).value, 3.0);
}

TEST(LogCalc, SupFindsSpikesAtBreakpoints) {
  UGrid coarse(35, 5);
  auto spike = [](double t) { return std::fabs(t - 0.123) < 1e-9 ? 2.0 : 0.0; };
  EXPECT_EQ(sup_on_grid(spike, coarse, {0.123}).value, 2.0);
}

TEST(LogCalc, TailSupAgainstBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> b{0.0}, v;
    int n = 2 + trial % 6;
    std::vector<double> cuts;
    for (int i = 0; i < n - 1; ++i) cuts.push_back(std::exp(-20 * U(rng)));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (double c : cuts) b.push_back(c);
    b.push_back(1.0);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(std::exp(3 * U(rng)));
    std::sort(v.rbegin(), v.rend());
    StepRearrangement f(b, v);
    const double p = 2, c = 0.5;
    TailSupTable table(f, p, c);
    for (double x : {1e-8, 1e-3, 0.2}) {
      auto g = [&](double s) { return s > x ? std::pow(u_of(s), -c) * std::pow(power_integral(f, p, s, 1), 1 / p) : 0.0; };
      const double brute = dense_sup(g, 20000);
      EXPECT_GE(table(x) * (1 + 1e-12), brute);
      EXPECT_NEAR(table(x), brute, 2e-3 * brute);
    }
  }
}

TEST(LogCalc, HeadSupAgainstBruteForce) {
  const auto f = discretize_model(PowerLog{0.2, 0}, 35, 50);
  PowerPrefix pre(f, 2);
  const double y = 0.3, c = 0.5;
  auto g = [&](double s) { return s < y ? std::pow(u_of(s), -c) * std::sqrt(pre.between(s, y)) : 0.0; };
  const double brute = dense_sup(g, 100000);
  const double exact = head_sup(f, pre, 2, c, y);
  EXPECT_GE(exact * (1 + 1e-12), brute);
  EXPECT_NEAR(exact, brute, 1e-4 * brute);
}

TEST(LogCalc, InversionExamples) {
  const auto sq = MonotoneMap::from_weight({0.5, 0});
  EXPECT_NEAR(sq.inverse(0.5), 0.25, 1e-15);
  const auto m = MonotoneMap::from_weight({0.25, -1});
  const double t = m.inverse(0.5);
  EXPECT_NEAR(m.forward(t), 0.5, 1e-10 * 0.5);
  EXPECT_NEAR(t, 0.504, 1e-3);
  const auto phi1 = MonotoneMap::log_inverse();
  EXPECT_NEAR(phi1.inverse(0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(phi1.inverse(0.5), 0.367879, 1e-6);
  // generic bisection on the same maps
  EXPECT_NEAR(invert_monotone([](double s) { return std::sqrt(s); }, 0.5), 0.25, 1e-12);
  EXPECT_THROW(invert_monotone([](double s) { return std::sqrt(s); }, 2.0), Error);
}

TEST(LogCalc, PowerInverseIsExactWithoutLogFactor) {
  for (double a : {0.1, 0.25, 0.5, 1.0, 3.0}) {
    const auto m = MonotoneMap::from_weight({a, 0});
    for (double y : {1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0}) {
      const double exact = std::pow(y, 1 / a);
      EXPECT_NEAR(m.inverse(y), exact, 1e-12 * exact) << a << " " << y;
    }
  }
}

TEST(LogCalc, MonotoneMapThreshold) {
  // t0 = e^{(a-b)/a} when a < b
  const auto m = MonotoneMap::from_weight({0.5, 1.5});
  EXPECT_NEAR(m.t0(), std::exp((0.5 - 1.5) / 0.5), 1e-15);
  EXPECT_EQ(MonotoneMap::from_weight({0.5, 0.2}).t0(), 1.0);
  EXPECT_THROW(MonotoneMap::from_weight({0.0, 1.0}), Error);
  EXPECT_THROW(m.inverse(2 * m.range_max()), Error);
  EXPECT_NEAR(m.normalized(1.0), 1.0, 1e-15);
  EXPECT_NEAR(m.normalized_inverse(m.normalized(0.3)), 0.3, 1e-10);
}

TEST(LogCalc, InverseKeepsLogScaleBracket) {
  // (1 + |log phi(t)|) / (1 + |log t|) stays in a bracket that does not move under refinement
  for (LogWeight w : {LogWeight{0.25, -1}, LogWeight{0.5, 0.25}, LogWeight{0.25, 0.75}}) {
    const auto m = MonotoneMap::from_weight(w);
    auto bracket = [&](int n) {
      double lo = INFINITY, hi = 0;
      for (int k = 0; k <= n; ++k) {
        const double t = std::exp(std::log(1e-12) * k / n) * m.range_max();
        const double r = m.inverse_u(t) / (1 + std::fabs(std::log(t)));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      return std::max(hi, 1 / lo);
    };
    const double c1 = bracket(1000), c2 = bracket(2000);
    EXPECT_TRUE(std::isfinite(c1));
    EXPECT_LT(std::fabs(c2 - c1) / c1, 0.05);
  }
}

TEST(LogCalc, LogBoundsExamples) {
  const double a = std::exp(-1.0);
  auto r = log_integral_bounds_check(0, 0, {0.5, 1e-3, 1e-9});
  for (double h : r.head_ratios) EXPECT_NEAR(h, 1.0, 1e-14);
  r = log_integral_bounds_check(0, 1, {a});
  EXPECT_NEAR(r.head_ratios[0], 1.5, 1e-12);
  r = log_integral_bounds_check(-2, 0, {0.1});
  ASSERT_EQ(r.tail_ratios.size(), 1u);
  EXPECT_NEAR(r.tail_ratios[0], 0.9, 1e-12);
  EXPECT_THROW(log_integral_bounds_check(1.0, 0, {0.5}), Error);
}

TEST(LogCalc, LogBoundsLowerBoundForNonnegativeBeta) {
  std::vector<double> grid;
  for (int k = 1; k <= 60; ++k) grid.push_back(std::exp(-0.5 * k));
  grid.push_back(1 - 1e-12);
  for (double alpha : {-2.0, -0.5, 0.0, 0.5, 0.9}) {
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const auto r = log_integral_bounds_check(alpha, beta, grid);
      EXPECT_TRUE(r.lower_bound_checked);
      EXPECT_TRUE(r.lower_bound_holds) << alpha << " " << beta;
      EXPECT_GE(r.min_head_ratio, (1 - 1e-9) / (1 - alpha));
    }
  }
}

TEST(LogCalc, GridBasics) {
  UGrid g(35, 5);
  EXPECT_EQ(g.u(0), 1.0);
  EXPECT_EQ(g.u(4), 35.0);
  EXPECT_EQ(g.refined().count(), 9);
  EXPECT_EQ(g.refined().u(2), g.u(1));
  EXPECT_THROW(UGrid(1.0, 5), Error);
  EXPECT_THROW(UGrid(35, 1), Error);
}
