#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "rispaces/error.hpp"
#include "rispaces/rearrangement.hpp"

using namespace rispaces;

namespace {

std::vector<Sample> random_samples(std::mt19937_64& rng, int n, bool signed_values = true) {
  std::uniform_real_distribution<double> val(signed_values ? -5.0 : 0.0, 5.0), w(0.01, 1.0);
  std::vector<Sample> s(n);
  double total = 0.0;
  for (auto& x : s) {
    x.value = val(rng);
    x.weight = w(rng);
    total += x.weight;
  }
  for (auto& x : s) x.weight /= total;
  return s;
}

// f_*(t) = inf{lambda : D(lambda) <= t} from the distribution function; no sorting involved.
double distribution_oracle(const std::vector<Sample>& s, double t) {
  double best = INFINITY;
  auto consider = [&](double lambda) {
    double d = 0.0;
    for (const auto& x : s)
      if (std::fabs(x.value) > lambda) d += x.weight;
    if (d <= t) best = std::min(best, lambda);
  };
  consider(0.0);
  for (const auto& x : s) consider(std::fabs(x.value));
  return best;
}

}  // namespace

TEST(Rearrangement, PowerIntegralExamples) {
  const auto ch = discretize_model(Char{0.25}, 35, 600);
  EXPECT_DOUBLE_EQ(power_integral(ch, 2, 0, 1), 0.25);
  EXPECT_NEAR(power_integral(StepRearrangement::constant(1), 7, 0.2, 0.5), 0.3, 1e-15);
  StepRearrangement two({0, 0.5, 1}, {2, 1});
  EXPECT_DOUBLE_EQ(power_integral(two, 2, 0, 1), 2.5);
}

TEST(Rearrangement, HalfOpenPanels) {
  StepRearrangement ch({0, 0.25, 1}, {1, 0});
  EXPECT_EQ(evaluate_at(ch, 0.2), 1.0);
  EXPECT_EQ(evaluate_at(ch, 0.25), 1.0);
  EXPECT_EQ(evaluate_at(ch, 0.3), 0.0);
  EXPECT_THROW(evaluate_at(ch, 0.0), Error);
  EXPECT_THROW(evaluate_at(ch, 1.5), Error);
}

TEST(Rearrangement, CharIntegralIsMeasureForEveryPower) {
  for (double a : {1.0, 0.5, 0.125, 1.0 / 128, 0.3}) {
    const auto f = discretize_model(Char{a}, 35, 600);
    for (double p : {0.5, 1.0, 2.0, 7.5}) EXPECT_EQ(power_integral(f, p, 0, 1), a) << a << " " << p;
  }
}

TEST(Rearrangement, MatchesDistributionOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 64);
    const auto s = random_samples(rng, n);
    const auto f = rearrange_from_samples(s);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double mid = 0.5 * (f.lo(i) + f.hi(i));
      ASSERT_EQ(f.values()[i], distribution_oracle(s, mid)) << "trial " << trial << " panel " << i;
    }
  }
}

TEST(Rearrangement, Equimeasurable) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_samples(rng, 1 + static_cast<int>(rng() % 64));
    double mean = 0.0;
    for (const auto& x : s) mean += std::fabs(x.value) * x.weight;
    EXPECT_NEAR(power_integral(rearrange_from_samples(s), 1, 0, 1), mean, 1e-12 * std::max(1.0, mean));
  }
}

TEST(Rearrangement, MonotoneInSamples) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_samples(rng, 1 + static_cast<int>(rng() % 32), false);
    auto g = s;
    for (auto& x : g) x.value += bump(rng);
    const auto fs = rearrange_from_samples(s), gs = rearrange_from_samples(g);
    for (int k = 1; k < 200; ++k) {
      const double t = k / 200.0;
      ASSERT_LE(evaluate_at(fs, t), evaluate_at(gs, t));
    }
  }
}

TEST(Rearrangement, RejectsBadSamples) {
  EXPECT_THROW(rearrange_from_samples({}), Error);
  EXPECT_THROW(rearrange_from_samples({{1.0, 0.5}}), Error);
  EXPECT_THROW(rearrange_from_samples({{1.0, 1.5}, {2.0, -0.5}}), Error);
  EXPECT_THROW(rearrange_from_samples({{NAN, 1.0}}), Error);
  try {
    rearrange_from_samples({{1.0, 0.5}});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadWeights);
  }
}

TEST(Rearrangement, StepValidation) {
  EXPECT_THROW(StepRearrangement({0, 0.5, 1}, {1, 2}), Error);
  EXPECT_THROW(StepFunction({0, 0.5}, {1}), Error);
  EXPECT_THROW(StepFunction({0, 0.5, 0.5, 1}, {1, 1, 1}), Error);
  EXPECT_THROW(StepFunction({0, 1}, {-1}), Error);
  EXPECT_NO_THROW(StepFunction({0, 0.5, 1}, {1, 2}));
}

TEST(Rearrangement, DiscretizedPowerLogIsMonotoneAndTracksModel) {
  for (double gamma : {0.0, 0.25, 0.499}) {
    for (double delta : {-1.0, 0.0, 2.0}) {
      const FunctionModel m = PowerLog{gamma, delta};
      const auto f = discretize_model(m, 35, 600);
      for (std::size_t i = 1; i < f.size(); ++i) ASSERT_LE(f.values()[i], f.values()[i - 1]);
      // the step value tracks sup_{s >= t} of the model (the model need not decrease)
      for (double t : {0.9, 0.3, 1e-3, 1e-9}) {
        double exact = 0.0;
        for (int k = 0; k <= 4000; ++k) exact = std::max(exact, model_value(m, std::pow(t, k / 4000.0)));
        EXPECT_NEAR(evaluate_at(f, t) / exact, 1.0, 0.1) << gamma << " " << delta << " " << t;
      }
    }
  }
  // int_0^1 t^{-1/2} dt = 2
  const auto f = discretize_model(PowerLog{0.25, 0}, 35, 600);
  EXPECT_NEAR(std::sqrt(power_integral(f, 2, 0, 1)), std::sqrt(2.0), 1e-3);
}

TEST(Rearrangement, PrefixSumsAgreeWithDirectIntegral) {
  const auto f = discretize_model(PowerLog{0.3, 1}, 35, 200);
  PowerPrefix pre(f, 2.5);
  for (double x : {1e-12, 1e-5, 0.01, 0.5, 0.77, 1.0}) {
    const double direct = power_integral(f, 2.5, 0, x);
    EXPECT_NEAR(pre.at(x), direct, 1e-13 * direct + 1e-300);
  }
  EXPECT_NEAR(pre.between(0.1, 0.5), power_integral(f, 2.5, 0.1, 0.5), 1e-13);
}

TEST(Rearrangement, Helpers) {
  StepRearrangement f({0, 0.25, 0.5, 1}, {3, 3, 1});
  const auto m = merge_equal(f);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.breaks()[1], 0.5);
  const auto r = restricted_below(f, 0.4);
  EXPECT_EQ(evaluate_at(r, 0.39), 3.0);
  EXPECT_EQ(evaluate_at(r, 0.41), 0.0);
  EXPECT_DOUBLE_EQ(power_integral(scaled(f, -2), 1, 0, 1), 2 * power_integral(f, 1, 0, 1));
  StepFunction g({0, 0.5, 1}, {2, 4});
  EXPECT_DOUBLE_EQ(product_integral(f, g), 3 * 2 * 0.5 + 1 * 4 * 0.5);
}

TEST(Rearrangement, ModelLabelsAndJson) {
  EXPECT_EQ(model_label(PowerLog{0.25, -1}), "power_log(gamma=0.25,delta=-1)");
  EXPECT_EQ(model_label(Char{0.5}), "char(a=0.5)");
  const auto m = model_from_json(R"({"kind":"char","a":0.25})");
  ASSERT_TRUE(std::holds_alternative<Char>(m));
  EXPECT_EQ(std::get<Char>(m).a, 0.25);
  EXPECT_THROW(model_from_json("{not json"), Error);
  EXPECT_THROW(model_from_json(R"({"kind":"char","a":0.25,"theta":1})"), Error);
  EXPECT_THROW(model_from_json(R"({"kind":"power_log","gamma":1.5,"delta":0})"), Error);
  EXPECT_THROW(model_from_json(R"({"kind":"nope"})"), Error);
}

TEST(Rearrangement, SamplesCsv) {
  const std::string path = ::testing::TempDir() + "samples_test.csv";
  {
    std::ofstream out(path);
    out << "value,weight\n3,0.25\n-1,0.5\n2,0.25\n";
  }
  const auto f = rearrange_from_samples(read_samples_csv(path));
  EXPECT_EQ(f.values(), (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(f.breaks(), (std::vector<double>{0, 0.25, 0.5, 1}));
  std::remove(path.c_str());
  EXPECT_THROW(read_samples_csv(path), Error);
}
