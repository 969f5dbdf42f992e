#pragma once

// Dense transition matrices and the structural / spectral chain operations
// (stationary law, reversibility, censoring, reversibilization, laziness).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "mcid/errors.hpp"
#include "mcid/types.hpp"

namespace mcid {

inline constexpr double kInputSumTolerance = 1e-8;
inline constexpr double kReversibilityTolerance = 1e-8;
inline constexpr double kStationaryResidual = 1e-10;

/// Row-stochastic d x d matrix. Construction validates the entries and
/// renormalises each row so that rows sum to 1 up to rounding.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Eigen::MatrixXd entries, double tolerance = kInputSumTolerance)
      : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw Error(Errc::malformed_matrix, "transition matrix must be square with d >= 1");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        double& v = m_(i, j);
        if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + tolerance)
          throw Error(Errc::malformed_matrix, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                  ") outside [0,1]");
        v = std::max(v, 0.0);
        sum += v;
      }
      if (std::abs(sum - 1.0) > tolerance)
        throw Error(Errc::malformed_matrix, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
      m_.row(i) /= sum;
    }
  }

  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    double tolerance = kInputSumTolerance) {
    const auto d = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != d)
        throw Error(Errc::malformed_matrix, "row " + std::to_string(i) + " has wrong length");
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    return TransitionMatrix(std::move(m), tolerance);
  }

  static TransitionMatrix identity(std::size_t d) {
    return TransitionMatrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// Probability vector over [d].
class ProbVector {
 public:
  explicit ProbVector(Eigen::VectorXd p, double tolerance = kInputSumTolerance) : p_(std::move(p)) {
    if (p_.size() == 0) throw Error(Errc::bad_args, "probability vector must be nonempty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
      if (!std::isfinite(p_(i)) || p_(i) < -1e-12) throw Error(Errc::bad_args, "negative probability");
      p_(i) = std::max(p_(i), 0.0);
      sum += p_(i);
    }
    if (std::abs(sum - 1.0) > tolerance) throw Error(Errc::bad_args, "probabilities sum to " + std::to_string(sum));
    p_ /= sum;
  }

  static ProbVector from_values(const std::vector<double>& v, double tolerance = kInputSumTolerance) {
    return ProbVector(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())), tolerance);
  }

  static ProbVector uniform(std::size_t d) {
    return ProbVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), 1.0 / static_cast<double>(d)));
  }

  static ProbVector point_mass(std::size_t d, std::size_t i) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    p(static_cast<Eigen::Index>(i)) = 1.0;
    return ProbVector(std::move(p));
  }

  std::size_t size() const { return static_cast<std::size_t>(p_.size()); }
  double operator()(std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& vector() const { return p_; }
  std::span<const double> values() const { return {p_.data(), static_cast<std::size_t>(p_.size())}; }

  double mass(const StateSet& s) const {
    double m = 0.0;
    for (auto i : s) m += (*this)(i);
    return m;
  }

  double min() const { return p_.minCoeff(); }

 private:
  Eigen::VectorXd p_;
};

/// Joint law diag(nu) P over ordered state pairs.
class EdgeMeasure {
 public:
  explicit EdgeMeasure(Eigen::MatrixXd q) : q_(std::move(q)) {}

  std::size_t size() const { return static_cast<std::size_t>(q_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return q_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return q_; }
  double total() const { return q_.sum(); }

  /// Sum of Q(i, j) over i in `from`, j in `to`.
  double flow(const StateSet& from, const StateSet& to) const {
    double f = 0.0;
    for (auto i : from)
      for (auto j : to) f += (*this)(i, j);
    return f;
  }

 private:
  Eigen::MatrixXd q_;
};

struct ChainClass {
  bool irreducible = false;
  bool reversible = false;
  bool ergodic = false;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> support_graph(const Eigen::MatrixXd& m, bool transpose = false) {
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<std::vector<std::size_t>> adj(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double v = transpose ? m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))
                                 : m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v > 0.0) adj[i].push_back(j);
    }
  return adj;
}

inline std::vector<bool> reachable_from(const std::vector<std::vector<std::size_t>>& adj, std::size_t root) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
  }
  return seen;
}

inline bool strongly_connected(const Eigen::MatrixXd& m) {
  auto fwd = reachable_from(support_graph(m), 0);
  auto bwd = reachable_from(support_graph(m, true), 0);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

/// Period of an irreducible support graph: gcd of level differences along edges.
inline std::size_t period(const Eigen::MatrixXd& m) {
  auto adj = support_graph(m);
  std::vector<long> level(adj.size(), -1);
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  long g = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return static_cast<std::size_t>(g);
}

/// Strongly connected components of the support graph (Kosaraju).
inline std::vector<std::vector<std::size_t>> strong_components(const Eigen::MatrixXd& m) {
  const auto adj = support_graph(m);
  const auto radj = support_graph(m, true);
  const std::size_t d = adj.size();
  std::vector<bool> seen(d, false);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < d; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [u, k] = stack.back();
      if (k < adj[u].size()) {
        auto v = adj[u][k++];
        if (!seen[v]) {
          seen[v] = true;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(d, -1);
  std::vector<std::vector<std::size_t>> out;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    out.emplace_back();
    std::vector<std::size_t> stack{*it};
    comp[*it] = static_cast<int>(out.size() - 1);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (auto v : radj[u])
        if (comp[v] < 0) {
          comp[v] = comp[*it];
          stack.push_back(v);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

inline void require_irreducible(const TransitionMatrix& p) {
  if (!strongly_connected(p.matrix())) throw Error(Errc::not_irreducible, "chain is not irreducible");
}

inline Eigen::MatrixXd sub(const Eigen::MatrixXd& m, const StateSet& rows, const StateSet& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          m(static_cast<Eigen::Index>(rows[a]), static_cast<Eigen::Index>(cols[b]));
  return out;
}

}  // namespace detail

inline bool is_irreducible(const TransitionMatrix& p) { return detail::strongly_connected(p.matrix()); }

/// Stationary distribution of an irreducible chain from the normalised
/// null-space system; valid for periodic chains as well.
inline ProbVector stationary_distribution(const TransitionMatrix& p) {
  detail::require_irreducible(p);
  const auto d = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a = p.matrix().transpose() - Eigen::MatrixXd::Identity(d, d);
  a.row(d - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  b(d - 1) = 1.0;
  auto lu = a.fullPivLu();
  Eigen::VectorXd pi = lu.solve(b);
  // one step of iterative refinement
  pi += lu.solve(b - a * pi);
  for (Eigen::Index i = 0; i < d; ++i) pi(i) = std::max(pi(i), 0.0);
  pi /= pi.sum();
  return ProbVector(std::move(pi));
}

inline double detailed_balance_residual(const TransitionMatrix& p, const ProbVector& pi) {
  const auto& m = p.matrix();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(pi.vector()(i) * m(i, j) - pi.vector()(j) * m(j, i)));
  return worst;
}

inline bool is_reversible(const TransitionMatrix& p, double tolerance = kReversibilityTolerance) {
  if (!is_irreducible(p)) return false;
  return detailed_balance_residual(p, stationary_distribution(p)) <= tolerance;
}

/// Irreducibility by support reachability, reversibility by detailed balance,
/// ergodicity by aperiodicity of the support graph.
inline ChainClass validate(const TransitionMatrix& p) {
  ChainClass c;
  c.irreducible = is_irreducible(p);
  if (!c.irreducible) return c;
  c.reversible = detailed_balance_residual(p, stationary_distribution(p)) <= kReversibilityTolerance;
  c.ergodic = detail::period(p.matrix()) == 1;
  return c;
}

inline EdgeMeasure edge_measure(const TransitionMatrix& p, const ProbVector& nu) {
  if (p.size() != nu.size()) throw Error(Errc::shape_mismatch, "edge measure: d mismatch");
  return EdgeMeasure(nu.vector().asDiagonal() * p.matrix());
}

inline TransitionMatrix time_reversal(const TransitionMatrix& p) {
  const auto pi = stationary_distribution(p);
  const auto& v = pi.vector();
  Eigen::MatrixXd r = v.cwiseInverse().asDiagonal() * p.matrix().transpose() * v.asDiagonal();
  return TransitionMatrix(std::move(r));
}

/// P* P: reversible with the stationary law of P.
inline TransitionMatrix multiplicative_reversibilization(const TransitionMatrix& p) {
  return TransitionMatrix(time_reversal(p).matrix() * p.matrix());
}

inline TransitionMatrix lazy_version(const TransitionMatrix& p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(Errc::alpha_out_of_range, "laziness must lie in [0,1]");
  const auto d = static_cast<Eigen::Index>(p.size());
  return TransitionMatrix(alpha * Eigen::MatrixXd::Identity(d, d) + (1.0 - alpha) * p.matrix());
}

inline TransitionMatrix convex_combination(const TransitionMatrix& p, const TransitionMatrix& pbar, double alpha) {
  if (p.size() != pbar.size()) throw Error(Errc::shape_mismatch, "convex combination: d mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(Errc::alpha_out_of_range, "weight must lie in [0,1]");
  return TransitionMatrix(alpha * p.matrix() + (1.0 - alpha) * pbar.matrix());
}

/// Watched chain on S: P_S + P_{S,S^c} (I - P_{S^c})^{-1} P_{S^c,S}.
/// Rows and columns follow the sorted order of S.
inline TransitionMatrix censor(const TransitionMatrix& p, const StateSet& s) {
  if (s.empty()) throw Error(Errc::empty_subset, "censoring set must be nonempty");
  check_subset(s, p.size());
  detail::require_irreducible(p);
  const auto& m = p.matrix();
  const StateSet rest = complement(s, p.size());
  Eigen::MatrixXd out = detail::sub(m, s, s);
  if (!rest.empty()) {
    const auto r = static_cast<Eigen::Index>(rest.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(r, r) - detail::sub(m, rest, rest);
    Eigen::MatrixXd x = a.partialPivLu().solve(detail::sub(m, rest, s));
    out += detail::sub(m, s, rest) * x;
  }
  return TransitionMatrix(std::move(out));
}

inline TransitionMatrix matrix_power(const TransitionMatrix& p, std::size_t k) {
  if (k == 0) throw Error(Errc::bad_args, "power must be positive");
  Eigen::MatrixXd result;
  Eigen::MatrixXd base = p.matrix();
  bool first = true;
  while (k > 0) {
    if (k & 1U) {
      result = first ? base : Eigen::MatrixXd(result * base);
      first = false;
    }
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return TransitionMatrix(std::move(result), 1e-9);
}

/// Eigenvalues of D^{1/2} P D^{-1/2} (D = diag(pi)), ascending. P must be reversible.
inline Eigen::VectorXd reversible_spectrum(const TransitionMatrix& p, const ProbVector& pi) {
  const Eigen::VectorXd s = pi.vector().cwiseSqrt();
  Eigen::MatrixXd sym = s.asDiagonal() * p.matrix() * s.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// 1 - lambda_2 with lambda_2 the second largest signed eigenvalue, so
/// periodic chains can exceed 1 (the 2-cycle gives 2). A single state has no
/// nontrivial eigenvalue and gets gap 1.
inline double spectral_gap(const TransitionMatrix& p) {
  detail::require_irreducible(p);
  const auto pi = stationary_distribution(p);
  if (detailed_balance_residual(p, pi) > kReversibilityTolerance)
    throw Error(Errc::not_reversible, "spectral gap requires a reversible chain");
  if (p.size() == 1) return 1.0;
  const auto ev = reversible_spectrum(p, pi);
  return 1.0 - ev(ev.size() - 2);
}

namespace detail {

/// Perron root of an irreducible nonnegative block. Power iteration on B + I
/// keeps Collatz-Wielandth bounds lo <= rho(B + I) <= hi; when they fail to
/// meet within the iteration cap the full eigendecomposition is used instead.
inline double perron_root_irreducible(const Eigen::MatrixXd& b) {
  const auto n = b.rows();
  if (n == 1) return b(0, 0);
  Eigen::MatrixXd shifted = b + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double lo = 0.0;
  double hi = 0.0;
  constexpr int kMaxIterations = 100000;
  for (int it = 0; it < kMaxIterations; ++it) {
    Eigen::VectorXd y = shifted * x;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = y(i) / x(i);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi - lo <= 1e-14 * hi) return 0.5 * (lo + hi) - 1.0;
    x = y / y.maxCoeff();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(b, false);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
  return std::clamp(rho, lo - 1.0, hi - 1.0);
}

}  // namespace detail

/// Spectral radius of a nonnegative square matrix: the maximum Perron root
/// over the strongly connected blocks of its support graph.
inline double spectral_radius_nonneg(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(Errc::shape_mismatch, "spectral radius needs a square matrix");
  if (m.size() == 0) return 0.0;
  if ((m.array() < 0.0).any()) throw Error(Errc::negative_entry, "matrix has a negative entry");
  double rho = 0.0;
  for (const auto& block : detail::strong_components(m)) {
    if (block.size() == 1) {
      const auto i = static_cast<Eigen::Index>(block[0]);
      rho = std::max(rho, m(i, i));
      continue;
    }
    rho = std::max(rho, detail::perron_root_irreducible(detail::sub(m, block, block)));
  }
  return rho;
}

}  // namespace mcid
