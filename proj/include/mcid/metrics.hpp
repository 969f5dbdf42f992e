#pragma once

// Distances between distributions and chains, cut ratios and the induced
// component distribution.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mcid/chain.hpp"

namespace mcid {

/// A chain together with its stationary law and edge measure, computed once.
struct ChainView {
  TransitionMatrix P;
  ProbVector pi;
  EdgeMeasure Q;

  explicit ChainView(const TransitionMatrix& p)
      : P(p), pi(stationary_distribution(p)), Q(edge_measure(p, pi)) {}

  std::size_t size() const { return P.size(); }
};

// Distribution distances --------------------------------------------------------

inline double hellinger_sq(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(Errc::shape_mismatch, "hellinger: length mismatch");
  double affinity = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) affinity += std::sqrt(p[i] * q[i]);
  return std::clamp(1.0 - affinity, 0.0, 1.0);
}

inline double hellinger(std::span<const double> p, std::span<const double> q) {
  return std::sqrt(hellinger_sq(p, q));
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(Errc::shape_mismatch, "total variation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::min(0.5 * s, 1.0);
}

inline double hellinger(const ProbVector& p, const ProbVector& q) { return hellinger(p.values(), q.values()); }
inline double hellinger_sq(const ProbVector& p, const ProbVector& q) { return hellinger_sq(p.values(), q.values()); }
inline double total_variation(const ProbVector& p, const ProbVector& q) {
  return total_variation(p.values(), q.values());
}

// Chain distances -----------------------------------------------------------------

/// 1 - rho(sqrt(P o Pbar)), with the Hadamard square root taken entrywise.
inline double chain_distance(const TransitionMatrix& p, const TransitionMatrix& pbar) {
  if (p.size() != pbar.size()) throw Error(Errc::shape_mismatch, "chain distance: d mismatch");
  const Eigen::MatrixXd g = p.matrix().cwiseProduct(pbar.matrix()).cwiseSqrt();
  return std::clamp(1.0 - spectral_radius_nonneg(g), 0.0, 1.0);
}

/// max_i |pi(i)/pibar(i) - 1|.
inline double ratio_distance(const ProbVector& pi, const ProbVector& pibar) {
  if (pi.size() != pibar.size()) throw Error(Errc::shape_mismatch, "ratio distance: d mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pibar(i) <= 0.0) throw Error(Errc::zero_denominator, "reference probability is zero");
    worst = std::max(worst, std::abs(pi(i) / pibar(i) - 1.0));
  }
  return worst;
}

// Induced distribution --------------------------------------------------------------

/// Law of (Z, successor of Z) with Z ~ nu restricted to S, successors leaving
/// S collapsed to one extra symbol. Symbols are numbered a*|S| + b for the
/// pair (S[a], S[b]); the escape symbol is |S|^2.
struct InducedDistribution {
  StateSet S;
  std::map<std::pair<std::size_t, std::size_t>, double> mass;
  double infinity_mass = 0.0;

  std::size_t symbol_count() const { return S.size() * S.size() + 1; }
  std::size_t infinity_symbol() const { return S.size() * S.size(); }

  /// Dense probability vector over the symbol alphabet.
  std::vector<double> dense() const {
    std::vector<double> out(symbol_count(), 0.0);
    for (const auto& [ij, v] : mass) {
      const auto a = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), ij.first) - S.begin());
      const auto b = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), ij.second) - S.begin());
      out[a * S.size() + b] = v;
    }
    out.back() = infinity_mass;
    return out;
  }

  double internal_mass() const { return 1.0 - infinity_mass; }
};

inline InducedDistribution induced_distribution(const TransitionMatrix& p, const ProbVector& nu, const StateSet& s) {
  if (p.size() != nu.size()) throw Error(Errc::shape_mismatch, "induced distribution: d mismatch");
  if (s.empty()) throw Error(Errc::empty_subset, "induced distribution needs a nonempty subset");
  check_subset(s, p.size());
  const double ns = nu.mass(s);
  if (ns <= 0.0) throw Error(Errc::zero_mass_subset, "subset has zero mass under nu");
  InducedDistribution out;
  out.S = s;
  double total = 0.0;
  for (auto i : s)
    for (auto j : s) {
      const double v = nu(i) * p(i, j) / ns;
      if (v > 0.0) {
        out.mass[{i, j}] = v;
        total += v;
      }
    }
  out.infinity_mass = std::max(0.0, 1.0 - total);
  return out;
}

/// Fraction of the nu-mass on S whose next step stays in S.
inline double internal_retention(const EdgeMeasure& q, const ProbVector& pi, const StateSet& s) {
  return q.flow(s, s) / pi.mass(s);
}

/// Q(R, R^c) / pi(R).
inline double escape_ratio(const EdgeMeasure& q, const ProbVector& pi, const StateSet& r) {
  return q.flow(r, complement(r, q.size())) / pi.mass(r);
}

// Cut ratios ------------------------------------------------------------------------

struct CutRatio {
  StateSet S;
  StateSet I;
  double value = 0.0;
};

inline double bottleneck_value(const ChainView& c, const StateSet& s, const StateSet& i) {
  const StateSet rest = set_difference(i, s);
  return c.Q.flow(s, rest) / std::min(c.pi.mass(s), c.pi.mass(rest));
}

inline void check_proper_subset(const StateSet& s, const StateSet& i, std::size_t d) {
  check_subset(s, d);
  check_subset(i, d);
  if (s.empty() || s.size() >= i.size() || !is_subset(s, i))
    throw Error(Errc::bad_subset, "need nonempty S strictly inside I");
}

/// Phi(P, S, I) = Q(S, I \ S) / min{pi(S), pi(I \ S)}.
inline CutRatio bottleneck_ratio(const ChainView& c, const StateSet& s, const StateSet& i) {
  check_proper_subset(s, i, c.size());
  return {s, i, bottleneck_value(c, s, i)};
}

inline CutRatio bottleneck_ratio(const TransitionMatrix& p, const StateSet& s, const StateSet& i) {
  detail::require_irreducible(p);
  return bottleneck_ratio(ChainView(p), s, i);
}

inline constexpr std::size_t kBruteForceLimit = 20;

/// Minimum of f over nonempty subsets of `universe` (proper ones if `proper`),
/// enumerated in Gray-code order. Returns {+inf, {}} when nothing qualifies.
template <class F>
std::pair<double, StateSet> minimize_over_subsets(const StateSet& universe, bool proper, F&& f) {
  if (universe.size() > kBruteForceLimit) throw Error(Errc::too_large, "subset enumeration limited to 20 states");
  const std::uint64_t n = universe.size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  double best = std::numeric_limits<double>::infinity();
  StateSet arg;
  for (std::uint64_t k = 1; k <= full; ++k) {
    const std::uint64_t mask = k ^ (k >> 1);
    if (proper && mask == full) continue;
    auto s = subset_from_mask(universe, mask);
    const double v = f(s);
    if (v < best || (v == best && s < arg)) {
      best = v;
      arg = std::move(s);
    }
  }
  return {best, arg};
}

/// min over nonempty proper R of Phi(P, R, S).
inline double min_bottleneck_bruteforce(const ChainView& c, const StateSet& s) {
  if (s.size() < 2) return std::numeric_limits<double>::infinity();
  return minimize_over_subsets(s, true, [&](const StateSet& r) { return bottleneck_value(c, r, s); }).first;
}

inline double cheeger_constant_bruteforce(const ChainView& c) {
  if (c.size() > kBruteForceLimit) throw Error(Errc::too_large, "Cheeger enumeration limited to d <= 20");
  return min_bottleneck_bruteforce(c, full_set(c.size()));
}

inline double cheeger_constant_bruteforce(const TransitionMatrix& p) {
  if (p.size() > kBruteForceLimit) throw Error(Errc::too_large, "Cheeger enumeration limited to d <= 20");
  return cheeger_constant_bruteforce(ChainView(p));
}

/// min over nonempty R inside T of Q(R, R^c)/pi(R); +inf for empty T.
inline double min_escape_bruteforce(const ChainView& c, const StateSet& t) {
  return minimize_over_subsets(t, false, [&](const StateSet& r) { return escape_ratio(c.Q, c.pi, r); }).first;
}

struct TailBound {
  double lambda = 0.0;
  double alpha = 0.0;
  bool holds = true;
};

/// Largest eigenvalue of P_T against 1 - alpha^2/2 with alpha the smallest
/// escape ratio over subsets of T.
inline TailBound tail_eigenvalue_bound_check(const ChainView& c, const StateSet& t) {
  check_subset(t, c.size());
  if (t.size() >= c.size()) throw Error(Errc::bad_subset, "T must be a proper subset");
  if (t.size() > kBruteForceLimit) throw Error(Errc::too_large, "tail enumeration limited to 20 states");
  TailBound b;
  if (t.empty()) return b;
  b.lambda = spectral_radius_nonneg(detail::sub(c.P.matrix(), t, t));
  b.alpha = min_escape_bruteforce(c, t);
  b.holds = b.lambda <= 1.0 - 0.5 * b.alpha * b.alpha + 1e-9;
  return b;
}

inline TailBound tail_eigenvalue_bound_check(const TransitionMatrix& p, const StateSet& t) {
  return tail_eigenvalue_bound_check(ChainView(p), t);
}

}  // namespace mcid
