#pragma once

// Chain and distribution families used by the property suite, the demo and
// the tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mcid/chain.hpp"

namespace mcid::gen {

/// Random walk on a random weighted graph: symmetric weights, so the chain is
/// reversible with pi proportional to the weighted degree. A path through all
/// states keeps it irreducible; `density` is the chance any other edge exists.
template <class Engine>
TransitionMatrix random_reversible(std::size_t d, Engine& rng, double density = 0.7, double self_weight = 1.0) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    w(a, a) = self_weight * uniform01(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto b = static_cast<Eigen::Index>(j);
      if (j == i + 1 || uniform01(rng) < density) w(a, b) = w(b, a) = 0.05 + uniform01(rng);
    }
  }
  if (d == 1) w(0, 0) = 1.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) w.row(i) /= w.row(i).sum();
  return TransitionMatrix(std::move(w));
}

/// Irreducible, generally non-reversible chain: a Hamiltonian cycle plus random edges.
template <class Engine>
TransitionMatrix random_irreducible(std::size_t d, Engine& rng, double density = 0.6) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    m(a, static_cast<Eigen::Index>((i + 1) % d)) = 0.05 + uniform01(rng);
    for (std::size_t j = 0; j < d; ++j)
      if (uniform01(rng) < density) m(a, static_cast<Eigen::Index>(j)) += uniform01(rng);
    m.row(a) /= m.row(a).sum();
  }
  return TransitionMatrix(std::move(m));
}

template <class Engine>
std::vector<double> random_distribution(std::size_t k, Engine& rng, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += (v = floor + e(rng));
  for (auto& v : p) v /= s;
  return p;
}

/// Nearest-neighbour walk on a path: up[i] to i+1, down[i] to i-1, rest holds.
inline TransitionMatrix birth_death(const std::vector<double>& up, const std::vector<double>& down) {
  const std::size_t d = up.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    double hold = 1.0;
    if (i + 1 < d) m(a, a + 1) = up[i], hold -= up[i];
    if (i > 0) m(a, a - 1) = down[i], hold -= down[i];
    m(a, a) = hold;
  }
  return TransitionMatrix(std::move(m));
}

/// Uniform walk inside each block; every state moves to the other block with
/// probability `cross`, spread uniformly. Blocks are [0, k) and [k, d).
inline TransitionMatrix two_block(std::size_t d, std::size_t k, double cross) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const bool left = i < k;
    const double in = left ? static_cast<double>(k) : static_cast<double>(d - k);
    const double out = static_cast<double>(d) - in;
    for (std::size_t j = 0; j < d; ++j) {
      const bool same = (j < k) == left;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = same ? (1.0 - cross) / in : cross / out;
    }
  }
  return TransitionMatrix(std::move(m));
}

/// Complete uniform chain P(i, j) = 1/d.
inline TransitionMatrix complete_uniform(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return TransitionMatrix(Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(d)));
}

/// State 0 is a light hub; leaves 1..d-1 are sticky, leaving only to the hub
/// with probability `leak`. The hub rarely holds, so it retains little mass.
inline TransitionMatrix sticky_star(std::size_t d, double leak, double hub_hold = 0.0) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m(0, 0) = hub_hold;
  for (Eigen::Index j = 1; j < n; ++j) {
    m(0, j) = (1.0 - hub_hold) / static_cast<double>(d - 1);
    m(j, 0) = leak;
    m(j, j) = 1.0 - leak;
  }
  return TransitionMatrix(std::move(m));
}

inline TransitionMatrix cycle(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
  return TransitionMatrix(std::move(m));
}

/// Two-state pair whose chain distance vanishes as a -> 0 while their
/// stationary laws stay apart.
inline std::pair<TransitionMatrix, TransitionMatrix> vanishing_pair(double a) {
  return {TransitionMatrix::from_rows({{1.0 - a, a}, {0.5, 0.5}}),
          TransitionMatrix::from_rows({{1.0 - a, a}, {a, 1.0 - a}})};
}

}  // namespace mcid::gen
