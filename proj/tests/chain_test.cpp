#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace mcid;

TEST(TransitionMatrix, RejectsMalformedInput) {
  EXPECT_THROW(TransitionMatrix::from_rows({{0.5, 0.4}, {0.5, 0.5}}), Error);
  EXPECT_THROW(TransitionMatrix::from_rows({{1.2, -0.2}, {0.5, 0.5}}), Error);
  EXPECT_THROW(TransitionMatrix::from_rows({{1.0}, {0.5, 0.5}}), Error);
  EXPECT_THROW(TransitionMatrix(Eigen::MatrixXd(0, 0)), Error);
  try {
    TransitionMatrix::from_rows({{0.5, 0.4}, {0.5, 0.5}});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::malformed_matrix);
  }
}

TEST(TransitionMatrix, RenormalisesWithinTolerance) {
  const auto p = TransitionMatrix::from_rows({{0.5, 0.5 + 1e-10}, {1.0, 0.0}});
  EXPECT_NEAR(p(0, 0) + p(0, 1), 1.0, 1e-15);
}

TEST(Stationary, TwoStateClosedForm) {
  const auto pi = stationary_distribution(TransitionMatrix::from_rows({{0.9, 0.1}, {0.5, 0.5}}));
  EXPECT_NEAR(pi(0), 5.0 / 6.0, 1e-14);
  EXPECT_NEAR(pi(1), 1.0 / 6.0, 1e-14);
}

TEST(Stationary, PeriodicChain) {
  const auto pi = stationary_distribution(gen::cycle(5));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pi(i), 0.2, 1e-14);
}

TEST(Stationary, MatchesCesaroIteration) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const auto p = gen::random_irreducible(2 + k % 7, rng);
    const auto pi = stationary_distribution(p);
    const auto ref = oracle::stationary_by_iteration(p);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(pi(i), ref[i], 1e-9);
  }
}

TEST(Stationary, ReducibleChainThrows) {
  const auto p = TransitionMatrix::from_rows({{1.0, 0.0}, {0.5, 0.5}});
  EXPECT_FALSE(is_irreducible(p));
  try {
    stationary_distribution(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_irreducible);
  }
}

TEST(Reversibility, WeightedWalksAreReversible) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto p = gen::random_reversible(2 + k % 9, rng);
    EXPECT_LT(detailed_balance_residual(p, stationary_distribution(p)), 1e-12);
    EXPECT_TRUE(validate(p).reversible);
  }
}

TEST(Reversibility, DirectedCycleIsNot) {
  const auto c = validate(gen::cycle(3));
  EXPECT_TRUE(c.irreducible);
  EXPECT_FALSE(c.reversible);
  EXPECT_FALSE(c.ergodic);
}

TEST(TimeReversal, FixesReversibleChainsAndKeepsPi) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    const auto p = gen::random_reversible(3 + k % 5, rng);
    EXPECT_LT((time_reversal(p).matrix() - p.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    const auto q = gen::random_irreducible(3 + k % 5, rng);
    const auto r = time_reversal(q);
    EXPECT_LT((stationary_distribution(r).vector() - stationary_distribution(q).vector()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LT((time_reversal(r).matrix() - q.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reversibilization, IsReversibleWithSamePi) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const auto p = gen::random_irreducible(2 + k % 6, rng);
    const auto m = multiplicative_reversibilization(p);
    EXPECT_LT(detailed_balance_residual(m, stationary_distribution(p)), 1e-12);
  }
}

TEST(Lazy, ConvexWithIdentity) {
  const auto p = gen::cycle(2);
  const auto l = lazy_version(p, 0.25);
  EXPECT_DOUBLE_EQ(l(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(l(0, 1), 0.75);
  EXPECT_THROW(lazy_version(p, 1.5), Error);
  EXPECT_THROW(convex_combination(p, gen::cycle(3), 0.5), Error);
}

TEST(Censor, MatchesExcursionSeries) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 40; ++k) {
    const std::size_t d = 2 + k % 7;
    const auto p = k % 2 ? gen::random_reversible(d, rng) : gen::random_irreducible(d, rng);
    StateSet s;
    while (s.empty())
      for (std::size_t i = 0; i < d; ++i)
        if (uniform01(rng) < 0.5) s.push_back(i);
    const auto c = censor(p, s);
    EXPECT_LT((c.matrix() - oracle::censor_by_series(p, s)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Censor, StationaryLawIsConditionedPi) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto p = gen::random_reversible(5, rng);
    const StateSet s{0, 2, 3};
    const auto c = censor(p, s);
    const auto pi = stationary_distribution(p);
    const auto pc = stationary_distribution(c);
    for (std::size_t a = 0; a < s.size(); ++a) EXPECT_NEAR(pc(a), pi(s[a]) / pi.mass(s), 1e-12);
    EXPECT_LT(detailed_balance_residual(c, pc), 1e-12);
  }
}

TEST(Censor, HandWorkedPath) {
  // 0 <-> 1 <-> 2, watching {0, 2}: from 0 the walk must reach 1, then 0 or 2 equally.
  const auto p = TransitionMatrix::from_rows({{0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}});
  const auto c = censor(p, {0, 2});
  EXPECT_NEAR(c(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(c(0, 1), 0.5, 1e-15);
  EXPECT_THROW(censor(p, {}), Error);
  EXPECT_THROW(censor(p, {3}), Error);
}

TEST(MatrixPower, MatchesRepeatedProduct) {
  std::mt19937_64 rng(10);
  const auto p = gen::random_irreducible(6, rng);
  Eigen::MatrixXd m = p.matrix();
  for (std::size_t k = 2; k <= 13; ++k) {
    m = m * p.matrix();
    EXPECT_LT((matrix_power(p, k).matrix() - m).cwiseAbs().maxCoeff(), 1e-13);
  }
  EXPECT_THROW(matrix_power(p, 0), Error);
}

TEST(SpectralGap, KnownValues) {
  EXPECT_NEAR(spectral_gap(gen::cycle(2)), 2.0, 1e-12);
  EXPECT_NEAR(spectral_gap(gen::complete_uniform(5)), 1.0, 1e-12);
  EXPECT_NEAR(spectral_gap(TransitionMatrix::identity(1)), 1.0, 0.0);
  // two-state chain: eigenvalues 1 and 1 - a - b
  EXPECT_NEAR(spectral_gap(TransitionMatrix::from_rows({{0.7, 0.3}, {0.2, 0.8}})), 0.5, 1e-12);
  EXPECT_THROW(spectral_gap(gen::cycle(3)), Error);
}

TEST(SpectralRadius, AgreesWithGeneralEigensolver) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    const auto n = static_cast<Eigen::Index>(1 + k % 9);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const double density = 0.15 + 0.8 * uniform01(rng);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (uniform01(rng) < density) m(i, j) = 3.0 * uniform01(rng);
    EXPECT_NEAR(spectral_radius_nonneg(m), oracle::spectral_radius_eigen(m), 1e-9 * (1.0 + oracle::spectral_radius_eigen(m)));
  }
}

TEST(SpectralRadius, ReducibleAndNilpotent) {
  Eigen::MatrixXd nil(3, 3);
  nil << 0, 1, 0, 0, 0, 1, 0, 0, 0;
  EXPECT_EQ(spectral_radius_nonneg(nil), 0.0);
  Eigen::MatrixXd tri(2, 2);
  tri << 0.3, 5.0, 0.0, 0.7;
  EXPECT_NEAR(spectral_radius_nonneg(tri), 0.7, 1e-15);
  Eigen::MatrixXd neg(1, 1);
  neg << -1.0;
  EXPECT_THROW(spectral_radius_nonneg(neg), Error);
}

TEST(Seeds, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 3));
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
}

TEST(StateSets, Operations) {
  const StateSet a = make_set({3, 1, 1, 0});
  EXPECT_EQ(a, (StateSet{0, 1, 3}));
  EXPECT_EQ(complement(a, 5), (StateSet{2, 4}));
  EXPECT_EQ(set_union(a, {2}), (StateSet{0, 1, 2, 3}));
  EXPECT_EQ(set_intersection(a, {1, 2, 3}), (StateSet{1, 3}));
  EXPECT_TRUE(is_subset({1, 3}, a));
  EXPECT_EQ(subset_from_mask(a, 0b101), (StateSet{0, 3}));
  EXPECT_THROW(check_subset({7}, 5), Error);
}
