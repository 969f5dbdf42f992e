#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace mcid;

namespace {

/// Six states on a ring, doubly stochastic, so pi is uniform.
TransitionMatrix ring6(std::vector<std::pair<int, double>> w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (auto [k, v] : w) m(i, ((i + k) % 6 + 6) % 6) += v;
  return TransitionMatrix(std::move(m));
}

const TransitionMatrix& reference() {
  static const auto p = ring6({{0, 0.4}, {1, 0.3}, {-1, 0.3}});
  return p;
}

}  // namespace

TEST(Identity, ParameterDefaults) {
  EXPECT_NEAR(lazy_alpha(0.3), 0.09 / (2.0 * std::sqrt(2.0)), 1e-15);
  const auto t = simulate(reference(), ProbVector::uniform(6), 10, 1);
  TestConfig cfg;
  cfg.eps = 0.3;
  const auto r = identity_test(reference(), t, cfg);
  EXPECT_NEAR(r.beta, 0.3 / 16.0, 1e-15);
  EXPECT_NEAR(r.delta_iid, 1.0 / 60.0, 1e-15);
  EXPECT_NEAR(r.eps_iid, 0.3 / std::sqrt(128.0), 1e-15);
}

TEST(Identity, BudgetFormula) {
  const double l = std::log(6.0);
  const double expect = 24.0 * std::pow(l, 6) * std::log(6.0) * std::log(36.0) / (std::pow(0.3, 4) / 6.0);
  EXPECT_EQ(trajectory_budget(6, 1.0 / 6.0, 0.3), static_cast<std::size_t>(std::ceil(expect)));
  EXPECT_THROW(trajectory_budget(6, 0.0, 0.3), Error);
  EXPECT_THROW(trajectory_budget(6, 0.2, 1.0), Error);
}

TEST(Identity, ShortTrajectoryRejectsThroughFailPath) {
  const auto t = simulate(reference(), ProbVector::uniform(6), 100, 2);
  TestConfig cfg;
  const auto r = identity_test(reference(), t, cfg);
  EXPECT_EQ(r.verdict, 1);
  EXPECT_FALSE(r.tested_component.has_value());
  ASSERT_FALSE(r.per_component.empty());
  for (const auto& c : r.per_component) EXPECT_TRUE(c.failed);
}

TEST(Identity, AcceptsReferenceRejectsFarChain) {
  const auto alt = ring6({{0, 0.05}, {1, 0.2}, {-1, 0.2}, {2, 0.15}, {-2, 0.15}, {3, 0.25}});
  ASSERT_GE(chain_distance(reference(), alt), 0.3);
  const auto pi = ProbVector::uniform(6);
  const auto m = trajectory_budget(6, 1.0 / 6.0, 0.3);
  TestConfig cfg;
  cfg.eps = 0.3;
  int accepts = 0, rejects = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    cfg.seed = s;
    accepts += identity_test(reference(), simulate(reference(), pi, m, 10 + s), cfg).verdict == 0;
    rejects += identity_test(reference(), simulate(alt, pi, m, 20 + s), cfg).verdict == 1;
  }
  EXPECT_GE(accepts, 3);
  EXPECT_EQ(rejects, 4);
}

TEST(Identity, DeterministicGivenSeed) {
  const auto t = simulate(reference(), ProbVector::uniform(6), 200000, 3);
  TestConfig cfg;
  cfg.seed = 42;
  const auto a = identity_test(reference(), t, cfg);
  const auto b = identity_test(reference(), t, cfg);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.per_component.size(), b.per_component.size());
  EXPECT_EQ(a.trajectory_length, b.trajectory_length);
}

TEST(Identity, AssumeModeUsesTrajectoryAsGiven) {
  const auto t = simulate(reference(), ProbVector::uniform(6), 1000, 4);
  TestConfig cfg;
  cfg.lazify = LazifyMode::assume;
  EXPECT_EQ(identity_test(reference(), t, cfg).trajectory_length, 1000u);
  cfg.lazify = LazifyMode::emulate;
  EXPECT_GT(identity_test(reference(), t, cfg).trajectory_length, 1000u);
}

TEST(Identity, RejectsBadInput) {
  TestConfig cfg;
  const auto t = simulate(reference(), ProbVector::uniform(6), 10, 1);
  try {
    identity_test(gen::cycle(6), t, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_reversible_reference);
  }
  Trajectory bad = t;
  bad.states.back() = 6;
  try {
    identity_test(reference(), bad, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::trajectory_alphabet_mismatch);
  }
  cfg.eps = 0.0;
  EXPECT_THROW(identity_test(reference(), t, cfg), Error);
}
