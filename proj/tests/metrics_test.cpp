#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace mcid;

TEST(Hellinger, TrivialValues) {
  const std::vector<double> p{0.5, 0.5, 0.0};
  const std::vector<double> q{0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(hellinger_sq(p, p), 0.0);
  EXPECT_DOUBLE_EQ(hellinger_sq(p, q), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(p, q), 1.0);
  EXPECT_THROW(hellinger_sq(p, std::vector<double>{1.0}), Error);
}

TEST(Hellinger, MatchesHalfSquaredL2AndSandwichesTv) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t n = 1 + k % 30;
    const auto p = gen::random_distribution(n, rng);
    auto q = gen::random_distribution(n, rng);
    if (k % 4 == 0) q[k % n] = 0.0;
    double s = 0.0;
    for (double v : q) s += v;
    if (s == 0.0) continue;
    for (double& v : q) v /= s;
    const double h2 = hellinger_sq(p, q);
    EXPECT_NEAR(h2, oracle::hellinger_sq_l2(p, q), 1e-12);
    const double tv = total_variation(p, q);
    EXPECT_LE(h2, tv + 1e-12);
    EXPECT_LE(tv, std::sqrt(2.0) * std::sqrt(h2) + 1e-12);
  }
}

TEST(ChainDistance, ZeroOnlyForIdenticalChains) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 50; ++k) {
    const auto p = gen::random_irreducible(2 + k % 6, rng);
    EXPECT_NEAR(chain_distance(p, p), 0.0, 1e-12);
    const auto q = gen::random_irreducible(2 + k % 6, rng);
    EXPECT_GT(chain_distance(p, q), 1e-6);
  }
}

TEST(ChainDistance, SymmetricAndMatchesEigensolver) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 2 + k % 8;
    const auto p = gen::random_irreducible(d, rng);
    const auto q = k % 2 ? gen::random_reversible(d, rng) : gen::random_irreducible(d, rng);
    const double v = chain_distance(p, q);
    EXPECT_NEAR(v, chain_distance(q, p), 1e-12);
    EXPECT_NEAR(v, oracle::chain_distance_eigen(p, q), 1e-9);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ChainDistance, DisjointSupportsGiveOne) {
  const auto a = TransitionMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const auto b = TransitionMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_DOUBLE_EQ(chain_distance(a, b), 1.0);
}

TEST(ChainDistance, VanishingPairFamily) {
  double prev = 1.0;
  for (double a : {0.1, 0.01, 0.001}) {
    const auto [p, pbar] = gen::vanishing_pair(a);
    const double v = chain_distance(p, pbar);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 0.05);
  const auto [p, pbar] = gen::vanishing_pair(0.001);
  EXPECT_GT(hellinger_sq(stationary_distribution(p), stationary_distribution(pbar)), 0.25);
}

TEST(RatioDistance, ValuesAndZeroDenominator) {
  const auto a = ProbVector::from_values({0.5, 0.5});
  const auto b = ProbVector::from_values({0.25, 0.75});
  EXPECT_DOUBLE_EQ(ratio_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ratio_distance(a, b), 1.0);
  try {
    ratio_distance(a, ProbVector::from_values({1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_denominator);
  }
}

TEST(InducedDistribution, SumsToOneAndEncodesPairs) {
  std::mt19937_64 rng(24);
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = 2 + k % 7;
    const auto p = gen::random_irreducible(d, rng);
    const auto pi = stationary_distribution(p);
    StateSet s;
    while (s.empty())
      for (std::size_t i = 0; i < d; ++i)
        if (uniform01(rng) < 0.5) s.push_back(i);
    const auto ind = induced_distribution(p, pi, s);
    const auto v = ind.dense();
    ASSERT_EQ(v.size(), s.size() * s.size() + 1);
    double total = 0.0;
    for (double x : v) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        EXPECT_NEAR(v[a * s.size() + b], pi(s[a]) * p(s[a], s[b]) / pi.mass(s), 1e-14);
    EXPECT_NEAR(ind.internal_mass(), internal_retention(edge_measure(p, pi), pi, s), 1e-12);
  }
}

TEST(InducedDistribution, Errors) {
  const auto p = gen::complete_uniform(3);
  const auto pi = ProbVector::from_values({1.0, 0.0, 0.0});
  EXPECT_THROW(induced_distribution(p, pi, {}), Error);
  EXPECT_THROW(induced_distribution(p, pi, {1, 2}), Error);
  EXPECT_THROW(induced_distribution(p, ProbVector::uniform(2), {0}), Error);
}

TEST(Bottleneck, HandComputedTwoBlock) {
  const ChainView c(gen::two_block(4, 2, 0.1));
  // pi uniform; Q({0,1},{2,3}) = 1/2 * 0.1
  EXPECT_NEAR(bottleneck_ratio(c, {0, 1}, full_set(4)).value, 0.1, 1e-14);
  EXPECT_NEAR(cheeger_constant_bruteforce(c), 0.1, 1e-14);
  EXPECT_THROW(bottleneck_ratio(c, {}, full_set(4)), Error);
  EXPECT_THROW(bottleneck_ratio(c, full_set(4), full_set(4)), Error);
  EXPECT_THROW(bottleneck_ratio(c, {0}, {1, 2}), Error);
}

TEST(Bottleneck, BruteForceAgreesWithDirectEnumeration) {
  std::mt19937_64 rng(25);
  for (int k = 0; k < 40; ++k) {
    const std::size_t d = 2 + k % 7;
    const ChainView c(gen::random_reversible(d, rng));
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << d); ++mask) {
      double ms = 0.0, mr = 0.0, q = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const bool in = (mask >> i) & 1U;
        (in ? ms : mr) += c.pi(i);
        for (std::size_t j = 0; j < d; ++j)
          if (in && !((mask >> j) & 1U)) q += c.pi(i) * c.P(i, j);
      }
      best = std::min(best, q / std::min(ms, mr));
    }
    EXPECT_NEAR(cheeger_constant_bruteforce(c), best, 1e-12);
  }
}

TEST(Bottleneck, EnumerationLimit) {
  const ChainView c(gen::complete_uniform(21));
  EXPECT_THROW(cheeger_constant_bruteforce(c), Error);
}

TEST(Escape, RetentionAndEscapeAreComplementary) {
  std::mt19937_64 rng(26);
  const auto p = gen::random_reversible(6, rng);
  const ChainView c(p);
  const StateSet s{1, 3, 4};
  EXPECT_NEAR(internal_retention(c.Q, c.pi, s) + escape_ratio(c.Q, c.pi, s), 1.0, 1e-14);
  EXPECT_EQ(min_escape_bruteforce(c, {}), std::numeric_limits<double>::infinity());
}

TEST(TailBound, HoldsOnRandomReversibleChains) {
  std::mt19937_64 rng(27);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 3 + k % 6;
    const ChainView c(gen::random_reversible(d, rng));
    StateSet t;
    for (std::size_t i = 0; i + 1 < d; ++i)
      if (uniform01(rng) < 0.5) t.push_back(i);
    const auto b = tail_eigenvalue_bound_check(c, t);
    EXPECT_TRUE(b.holds) << "lambda " << b.lambda << " alpha " << b.alpha;
  }
}
