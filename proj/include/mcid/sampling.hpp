#pragma once

// Trajectory simulation and the conversion of one trajectory into iid draws
// from the induced component distribution.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mcid/constants.hpp"
#include "mcid/metrics.hpp"

namespace mcid {

/// Walker alias table for O(1) draws from a finite distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> w) : prob_(w.size()), alias_(w.size()) {
    const std::size_t n = w.size();
    double total = 0.0;
    for (auto v : w) total += v;
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = w[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
    for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
  }

  template <class Engine>
  std::size_t operator()(Engine& rng) const {
    const auto k = static_cast<std::size_t>(uniform_index(rng, prob_.size()));
    return uniform01(rng) < prob_[k] ? k : alias_[k];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

using State = std::uint32_t;

struct Trajectory {
  std::size_t d = 0;
  std::vector<State> states;
  std::uint64_t seed = 0;
  std::vector<double> initial;
};

inline Trajectory simulate(const TransitionMatrix& p, const ProbVector& mu, std::size_t m, std::uint64_t seed) {
  if (p.size() != mu.size()) throw Error(Errc::shape_mismatch, "simulate: d mismatch");
  if (m == 0) throw Error(Errc::bad_args, "trajectory length must be positive");
  const std::size_t d = p.size();
  std::vector<AliasTable> rows;
  rows.reserve(d);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) row[j] = p(i, j);
    rows.emplace_back(row);
  }
  std::mt19937_64 rng(derive_seed(seed, 0x51u));
  Trajectory t;
  t.d = d;
  t.seed = seed;
  t.initial.assign(mu.values().begin(), mu.values().end());
  t.states.resize(m);
  t.states[0] = static_cast<State>(AliasTable(mu.values())(rng));
  for (std::size_t k = 1; k < m; ++k) t.states[k] = static_cast<State>(rows[t.states[k - 1]](rng));
  return t;
}

/// Visit times of every state, in increasing order.
using HittingSchedule = std::vector<std::vector<std::size_t>>;

inline HittingSchedule hitting_schedule(const Trajectory& t) {
  HittingSchedule h(t.d);
  for (std::size_t k = 0; k < t.states.size(); ++k) h[t.states[k]].push_back(k);
  return h;
}

/// Trajectory of the lazy chain alpha I + (1 - alpha) P built from one of P:
/// every visit is repeated 1 + H times with H geometric, P(H = h) = alpha^h (1 - alpha).
inline Trajectory lazify_trajectory(const Trajectory& t, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(Errc::alpha_out_of_range, "laziness must lie in [0,1)");
  std::mt19937_64 rng(derive_seed(seed, 0x1A2u));
  std::geometric_distribution<std::size_t> hold(1.0 - alpha);
  Trajectory out = t;
  out.states.clear();
  out.states.reserve(static_cast<std::size_t>(static_cast<double>(t.states.size()) / (1.0 - alpha)) + 16);
  for (auto s : t.states) out.states.insert(out.states.end(), 1 + (alpha > 0.0 ? hold(rng) : 0), s);
  return out;
}

/// Samples over the alphabet of InducedDistribution for subset S.
using IidSample = std::vector<std::size_t>;

/// Draw Z_1..Z_l from nu, then pair each Z_k with the successor of a distinct
/// visit to Z_k (visits used in order). Successors outside S become the escape
/// symbol. Returns nullopt when some state has too few visits with successors.
inline std::optional<IidSample> iid_generate(const Trajectory& t, const StateSet& s, const ProbVector& nu,
                                             std::size_t l, std::uint64_t seed) {
  if (nu.size() != t.d) throw Error(Errc::shape_mismatch, "iid_generate: nu has wrong dimension");
  if (s.empty()) throw Error(Errc::empty_subset, "iid_generate needs a nonempty subset");
  check_subset(s, t.d);
  for (std::size_t i = 0; i < t.d; ++i)
    if (contains(s, i) != (nu(i) > 0.0)) throw Error(Errc::bad_nu, "nu must be positive exactly on S");
  if (l == 0) return IidSample{};

  const std::size_t n = s.size();
  std::vector<double> w(n);
  for (std::size_t a = 0; a < n; ++a) w[a] = nu(s[a]);
  const AliasTable draw(w);
  std::mt19937_64 rng(derive_seed(seed, 0x2Du));
  std::vector<std::size_t> z(l);
  std::vector<std::size_t> need(n, 0);
  for (auto& v : z) ++need[v = draw(rng)];

  std::vector<long> pos(t.d, -1);
  for (std::size_t a = 0; a < n; ++a) pos[s[a]] = static_cast<long>(a);
  std::vector<std::vector<std::size_t>> succ(n);
  std::size_t open = 0;
  for (std::size_t a = 0; a < n; ++a) {
    succ[a].reserve(need[a]);
    if (need[a] > 0) ++open;
  }
  for (std::size_t k = 0; open > 0 && k + 1 < t.states.size(); ++k) {
    const long a = pos[t.states[k]];
    if (a < 0) continue;
    auto& list = succ[static_cast<std::size_t>(a)];
    if (list.size() >= need[static_cast<std::size_t>(a)]) continue;
    const long b = pos[t.states[k + 1]];
    list.push_back(b < 0 ? n * n : static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b));
    if (list.size() == need[static_cast<std::size_t>(a)]) --open;
  }
  if (open > 0) return std::nullopt;

  IidSample out(l);
  std::vector<std::size_t> used(n, 0);
  for (std::size_t k = 0; k < l; ++k) out[k] = succ[z[k]][used[z[k]]++];
  return out;
}

// Concentration bookkeeping ------------------------------------------------------

/// Trajectory length after which every state is visited at least pi(i) m / 2
/// times with probability 1 - delta.
inline std::size_t required_visits(double pi_star, double gamma, double delta, const Constants& k = {}) {
  if (!(pi_star > 0.0 && pi_star <= 1.0) || !(gamma > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::bad_args, "required_visits: arguments out of range");
  return static_cast<std::size_t>(std::ceil(k.c_vis * std::log(1.0 / (delta * pi_star)) / (pi_star * gamma)));
}

inline bool visit_count_event(const Trajectory& t, const ProbVector& pi) {
  std::vector<std::size_t> n(t.d, 0);
  for (auto s : t.states) ++n[s];
  const double m = static_cast<double>(t.states.size());
  for (std::size_t i = 0; i < t.d; ++i)
    if (static_cast<double>(n[i]) < 0.5 * pi(i) * m) return false;
  return true;
}

inline std::size_t histogram_sample_size(std::size_t support, double p_star, double delta, const Constants& k = {}) {
  if (support == 0 || !(p_star > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::bad_args, "histogram_sample_size: arguments out of range");
  return static_cast<std::size_t>(std::ceil(k.c_hist * std::log(static_cast<double>(support) / delta) / p_star));
}

/// Whether every histogram cell of `sample` is at most 2 m p(i).
inline bool histogram_cap_check(std::span<const std::size_t> sample, std::span<const double> p) {
  std::vector<std::size_t> v(p.size(), 0);
  for (auto x : sample) {
    if (x >= p.size()) throw Error(Errc::alphabet_mismatch, "sample symbol outside the alphabet");
    ++v[x];
  }
  const double m = static_cast<double>(sample.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (static_cast<double>(v[i]) > 2.0 * m * p[i]) return false;
  return true;
}

namespace detail {
inline double tail_log(double pi_t_star) { return std::max(std::log(1.0 / pi_t_star), 1.0); }
}  // namespace detail

/// Length after which the chain leaves T at least escape_count_bound times
/// with probability 1 - delta, given escape ratio alpha for all subsets of T.
inline std::size_t tail_escape_length(double pi_t_star, double alpha, double delta, const Constants& k = {}) {
  if (!(pi_t_star > 0.0) || !(alpha > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::bad_args, "tail_escape_length: arguments out of range");
  return static_cast<std::size_t>(
      std::ceil(k.c_tail_len * detail::tail_log(pi_t_star) * std::log(2.0 / delta) / (alpha * alpha)));
}

inline double escape_count_bound(std::size_t m, double alpha, double pi_t_star, const Constants& k = {}) {
  return k.c_tail_escape * static_cast<double>(m) * alpha * alpha / detail::tail_log(pi_t_star);
}

/// Fraction of `trials` trajectories of length m (started uniformly on T) that
/// spend at least escape_count_bound steps outside T.
inline double tail_occupancy_check(const TransitionMatrix& p, const StateSet& t, double alpha, std::size_t m,
                                   std::size_t trials, std::uint64_t seed, const Constants& k = {}) {
  check_subset(t, p.size());
  if (t.empty() || trials == 0) return 1.0;
  const auto pi = stationary_distribution(p);
  double pi_t_star = 1.0;
  for (auto i : t) pi_t_star = std::min(pi_t_star, pi(i));
  const double bound = escape_count_bound(m, alpha, pi_t_star, k);
  std::vector<double> start(p.size(), 0.0);
  for (auto i : t) start[i] = 1.0 / static_cast<double>(t.size());
  const auto mu = ProbVector::from_values(start);
  std::size_t ok = 0;
  for (std::size_t r = 0; r < trials; ++r) {
    const auto traj = simulate(p, mu, m, derive_seed(seed, 0x7A11u, r));
    std::size_t outside = 0;
    for (auto s : traj.states) outside += contains(t, s) ? 0 : 1;
    if (static_cast<double>(outside) >= bound) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(trials);
}

}  // namespace mcid
