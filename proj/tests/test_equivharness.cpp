#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nlohmann/json.hpp"
#include "rispaces/equivharness.hpp"
#include "rispaces/error.hpp"

using namespace rispaces;

namespace {

const StepRearrangement kOne = StepRearrangement::constant(1.0);
StepRearrangement chi(double a) { return StepRearrangement({0, a, 1}, {1, 0}); }

// int of g over u in [a, b] by Simpson
double simpson(const std::function<double(double)>& g, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += g(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

HarnessConfig quick() {
  HarnessConfig cfg;
  cfg.res.panels = 150;
  cfg.res.k_nodes = 60;
  cfg.res.sup_count = 1024;
  return cfg;
}

MemberSides sides(const std::string& id, std::vector<std::pair<double, double>> s, int violations = 0) {
  MemberSides m;
  m.id = id;
  m.sides = std::move(s);
  m.violations = violations;
  return m;
}

}  // namespace

TEST(Families, StandardFamilyComposition) {
  const auto fam = standard_family(4, Defaults::seed);
  ASSERT_EQ(fam.members.size(), fam.ids.size());
  EXPECT_EQ(fam.members.size(), 4u + 11u + 10u);
  EXPECT_EQ(fam.ids[0], "char(a=1)");
  std::vector<double> gammas;
  for (const auto& m : fam.members)
    if (const auto* pl = std::get_if<PowerLog>(&m)) {
      EXPECT_FALSE(pl->gamma == 0.0 && pl->delta == 0.0);
      gammas.push_back(pl->gamma);
    }
  ASSERT_EQ(gammas.size(), 11u);
  // 1/(2q') = 3/8 and 1/q - 1e-3 for q = 4
  EXPECT_EQ(std::count(gammas.begin(), gammas.end(), 0.375), 4);
  EXPECT_EQ(std::count(gammas.begin(), gammas.end(), 0.249), 4);
  const auto again = standard_family(4, Defaults::seed);
  EXPECT_EQ(again.ids, fam.ids);
}

TEST(Families, RandomFamilyIsSeeded) {
  const auto a = random_step_family(5, 42), b = random_step_family(5, 42), c = random_step_family(5, 43);
  const auto da = a.discretize(Resolution{}), db = b.discretize(Resolution{}), dc = c.discretize(Resolution{});
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(da[i].values(), db[i].values());
    EXPECT_EQ(da[i].breaks(), db[i].breaks());
    EXPECT_GE(da[i].size(), 2u);
    EXPECT_LE(da[i].size(), 8u);
  }
  EXPECT_NE(da[0].values(), dc[0].values());
}

TEST(Reports, TwoSidedBracketAndDrift) {
  const HarnessConfig cfg;
  const auto rep = assemble_report("x", BracketKind::TwoSided, {sides("a", {{2, 1}}), sides("b", {{1, 4}})},
                                   {sides("a", {{2.02, 1}}), sides("b", {{1, 4}})}, cfg);
  EXPECT_DOUBLE_EQ(rep.max_ratio, 2.0);
  EXPECT_DOUBLE_EQ(rep.min_ratio, 0.25);
  EXPECT_DOUBLE_EQ(rep.bracket, 4.0);
  EXPECT_NEAR(rep.drift, 0.01, 1e-12);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.members.size(), 2u);
}

TEST(Reports, CeilingAndDriftFail) {
  HarnessConfig cfg;
  cfg.ceiling = 3;
  auto rep = assemble_report("x", BracketKind::TwoSided, {sides("a", {{4, 1}})}, {sides("a", {{4, 1}})}, cfg);
  EXPECT_FALSE(rep.pass);
  rep = assemble_report("x", BracketKind::Upper, {sides("a", {{2, 1}})}, {sides("a", {{2.2, 1}})}, HarnessConfig{});
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.drift, 0.1, 1e-12);
}

TEST(Reports, ExactKindCountsViolationsOnly) {
  HarnessConfig cfg;
  cfg.ceiling = 1.5;
  auto rep = assemble_report("x", BracketKind::Exact, {sides("a", {{100, 1}})}, {sides("a", {{300, 1}})}, cfg);
  EXPECT_TRUE(rep.pass);
  rep = assemble_report("x", BracketKind::Exact, {sides("a", {{1, 2}}, 1)}, {sides("a", {{1, 2}})}, cfg);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.violations, 1);
}

TEST(Reports, DegenerateMembersAreSkipped) {
  const auto rep = run_identity_experiment(Identity::GrandGrandLz, {}, single_family(ExplicitSteps{{0, 1}, {0}}), quick());
  EXPECT_EQ(rep.skipped, 1);
  EXPECT_TRUE(rep.members.empty());
  ASSERT_FALSE(rep.notes.empty());
  EXPECT_NE(rep.notes[0].find("degenerate member skipped"), std::string::npos);
  EXPECT_TRUE(rep.pass);
  const auto zero = assemble_report("x", BracketKind::TwoSided, {sides("z", {{0, 0}})}, {}, HarnessConfig{});
  EXPECT_EQ(zero.skipped, 1);
}

TEST(Reports, JsonShape) {
  const auto rep = assemble_report("demo", BracketKind::TwoSided, {sides("a", {{2, 1}})}, {sides("a", {{2, 1}})},
                                   HarnessConfig{});
  const auto j = nlohmann::json::parse(rep.to_json());
  for (const char* k : {"experiment", "params", "members", "max_ratio", "min_ratio", "median_ratio", "drift", "pass", "seed"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["experiment"], "demo");
  EXPECT_EQ(j["members"][0]["id"], "a");
  EXPECT_EQ(j["members"][0]["ratio"], 2.0);
  EXPECT_EQ(j["seed"], Defaults::seed);
  EXPECT_EQ(rep.to_json(), rep.to_json());
}

TEST(Hardy, ZeroFunction) {
  const auto z = StepRearrangement::zero();
  for (auto d : {HardyDisplay::PowerPrefix, HardyDisplay::PowerTail, HardyDisplay::LogPrefix}) {
    const auto s = hardy_sides(d, {}, z);
    EXPECT_EQ(s.first, 0.0);
    EXPECT_EQ(s.second, 0.0);
  }
}

TEST(Hardy, LogPrefixOnConstant) {
  // int t u^2 dt = 5/4 and int t u^4 dt = 21/4 (moments of e^{-2v} (1+v)^k)
  HardyExponents e;
  e.a = 2;
  e.alpha = 1;
  const auto s = hardy_sides(HardyDisplay::LogPrefix, e, kOne);
  EXPECT_NEAR(s.first, std::sqrt(1.25), 1e-10);
  EXPECT_NEAR(s.second, std::sqrt(5.25), 1e-10);
}

TEST(Hardy, PowerPrefixOnIndicator) {
  // lhs = 2 sqrt 2 - 1, rhs = sqrt 2
  HardyExponents e;
  e.lambda = 0.5;
  e.b = 1;
  e.beta = 0;
  const auto s = hardy_sides(HardyDisplay::PowerPrefix, e, chi(0.5));
  EXPECT_NEAR(s.first, 2 * std::sqrt(2.0) - 1, 1e-10);
  EXPECT_NEAR(s.second, std::sqrt(2.0), 1e-10);
}

TEST(Hardy, PowerTailAgainstQuadrature) {
  // lambda = 1/2, b = 2, beta = 1 with phi = chi(1/4): lhs = int [t^{1/2} u int_t^1 phi]^2 dt/t
  HardyExponents e;
  e.lambda = 0.5;
  e.b = 2;
  e.beta = 1;
  const auto s = hardy_sides(HardyDisplay::PowerTail, e, chi(0.25));
  const double ua = u_of(0.25);
  const double lhs = simpson([&](double u) {
    const double t = t_of(u), in = std::max(0.0, 0.25 - t);
    return t * u * u * in * in;
  }, ua, 60.0);
  const double rhs = simpson([](double u) { const double t = t_of(u); return t * t * t * u * u; }, ua, 60.0);
  EXPECT_NEAR(s.first, lhs, 1e-8 * lhs);
  EXPECT_NEAR(s.second, rhs, 1e-8 * rhs);
}

TEST(Hardy, ExponentChecks) {
  HardyExponents e;
  e.a = 2;
  e.alpha = -1;  // alpha + 1/a < 0: tail form only
  EXPECT_THROW(hardy_sides(HardyDisplay::LogPrefix, e, kOne), Error);
  EXPECT_NO_THROW(hardy_sides(HardyDisplay::LogTail, e, chi(0.5)));
}

TEST(SupSmoothing, IndicatorAgainstQuadrature) {
  const auto e = SmoothingExponents::interpolation_form(0.5, 2, 1, 4);
  EXPECT_DOUBLE_EQ(e.w, 0.5);
  EXPECT_DOUBLE_EQ(e.b, 0.125);
  EXPECT_DOUBLE_EQ(e.c, 0.25);
  const auto s = sup_smoothing_sides(chi(0.5), e);
  const double uh = u_of(0.5);
  // dt = e^{1-u} du; the sup over (t,1) of u_s^{-1/4} chi is attained at s = 1/2
  const double ir = std::pow(uh, -0.5) * simpson([](double u) { return std::exp(1 - u) * std::pow(u, 0.25); }, uh, 60.0);
  const double id = simpson([](double u) { return std::exp(1 - u) * std::pow(u, -0.25); }, uh, 60.0);
  EXPECT_NEAR(s.first, ir, 1e-9 * ir);
  EXPECT_NEAR(s.second, id, 1e-9 * id);
  EXPECT_GE(s.first, s.second);
}

TEST(SupSmoothing, ConstantAndZero) {
  const auto e = SmoothingExponents::log_form(0.5, 0, 4, 2);
  // kd = 1: the sup of u_s^{-c} over (t,1) is 1, so I_r = int t^{wr-1} u^{br} dt
  const auto s = sup_smoothing_sides(kOne, e);
  EXPECT_NEAR(s.first, weight_integral_u(0.0, 0.0, 1.0, kInf), 1e-12);
  EXPECT_GE(s.first, s.second);
  const auto z = sup_smoothing_sides(StepRearrangement::zero(), e);
  EXPECT_EQ(z.first, 0.0);
  EXPECT_EQ(z.second, 0.0);
}

TEST(SupSmoothing, DirectionNeverViolated) {
  const auto fam = standard_family(4, Defaults::seed).discretize(Resolution{});
  for (auto e : {SmoothingExponents::interpolation_form(0.3, 2, 1, 4), SmoothingExponents::log_form(0.5, 1, 4, 1.5)})
    for (const auto& f : fam) {
      const auto s = sup_smoothing_sides(f, e);
      EXPECT_GE(s.first, s.second * (1 - 1e-9));
    }
}

TEST(Discretization, ZeroAndConstant) {
  for (const auto& [name, pr] : discretization_sides(StepRearrangement::zero(), 1, 1).pairs) {
    EXPECT_EQ(pr.first, 0.0) << name;
    EXPECT_EQ(pr.second, 0.0) << name;
  }
  for (const auto& [name, pr] : discretization_sides(kOne, 1, 1).pairs) {
    EXPECT_TRUE(std::isfinite(pr.first) && pr.first > 0) << name;
    const double r = pr.first / pr.second;
    EXPECT_LT(std::max(r, 1 / r), 32.0) << name;
  }
}

TEST(Discretization, ScalingInvariance) {
  const auto h = discretize_model(PowerLog{0.3, 1}, 35, 100);
  const auto h3 = scaled(h, 3.0);
  for (double q : {1.0, 1.5}) {
    const auto a = discretization_sides(h, 0.5, q), b = discretization_sides(h3, 0.5, q);
    ASSERT_EQ(a.pairs.size(), b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      const double ra = a.pairs[i].second.first / a.pairs[i].second.second;
      const double rb = b.pairs[i].second.first / b.pairs[i].second.second;
      EXPECT_NEAR(ra, rb, 1e-9 * ra) << a.pairs[i].first;
    }
  }
}

TEST(Discretization, BlockScales) {
  for (double lambda : {0.5, 1.0}) {
    for (auto [l, r] : block_scale_sides(lambda)) {
      const double q = l / r;
      EXPECT_LT(std::max(q, 1 / q), 32.0);
    }
  }
}

TEST(DoublingSup, Examples) {
  std::vector<double> xs{1.0};
  const auto one = doubling_sup_sides(kOne, 2, 2, 0.5, xs);
  EXPECT_NEAR(one.lhs, 1.0, 1e-15);
  EXPECT_NEAR(one.rhs, 2 * std::sqrt(std::log(2.0)) * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(one.rhs, 2.355, 1e-3);
  EXPECT_EQ(one.violations, 0);
  const auto z = doubling_sup_sides(StepRearrangement::zero(), 2, 2, 0.5, xs);
  EXPECT_EQ(z.lhs, 0.0);
  // both sides scale like a^{(1-eps)/p}
  const auto a = doubling_sup_sides(chi(1e-2), 2, 2, 0.5, xs), b = doubling_sup_sides(chi(1e-4), 2, 2, 0.5, xs);
  EXPECT_NEAR(a.lhs / b.lhs, std::pow(100.0, 0.25), 1e-12);
  EXPECT_NEAR(a.rhs / b.rhs, std::pow(100.0, 0.25), 1e-12);
  EXPECT_EQ(a.violations + b.violations, 0);
}

TEST(HeadGrand, FiniteRatios) {
  const UGrid grid(35, 1024);
  const auto a = head_mean_sides(kOne, 2, 1, grid);
  EXPECT_TRUE(std::isfinite(a.first / a.second) && a.first > 0);
  const auto f = discretize_model(PowerLog{0.5 - 1e-3, 0}, 35, 600);
  const auto b = head_power_sides(f, 2, 4, 1, grid);
  EXPECT_TRUE(std::isfinite(b.first / b.second) && b.first > 0);
}

TEST(Associate, IndicatorSaturatesHolder) {
  const auto f = chi(0.25);
  EXPECT_NEAR(associate_lower_bound(f, Lebesgue{2}, {kOne, f}), 0.5, 1e-15);
  EXPECT_EQ(associate_lower_bound(StepRearrangement::zero(), Lebesgue{2}, {kOne}), 0.0);
}

TEST(Harness, QuickExperimentsPass) {
  Harness h(quick());
  for (const char* name : {"grand-grand-lz", "k-lp-lq", "hardy-log-prefix", "sup-smoothing", "doubling-sup"}) {
    const auto rep = h.run(name);
    EXPECT_TRUE(rep.pass) << name << " " << rep.to_json();
    EXPECT_EQ(rep.experiment.empty(), false);
  }
}

TEST(Harness, DeterministicAcrossThreadCounts) {
  HarnessConfig one = quick(), many = quick();
  one.threads = 1;
  many.threads = 6;
  EXPECT_EQ(Harness(one).run("k-grand-lq").to_json(), Harness(many).run("k-grand-lq").to_json());
}

TEST(Harness, RejectsUnknownNamesAndParameters) {
  Harness h(quick());
  EXPECT_THROW(h.run("no-such-experiment"), Error);
  EXPECT_THROW(h.run("grand-grand-lz", {{"zeta", 1}}), Error);
  try {
    h.run("grand-grand-lz", {{"theta", 1.5}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolation);
  }
  EXPECT_FALSE(list_experiments().empty());
}
