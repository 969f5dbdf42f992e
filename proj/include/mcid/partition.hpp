#pragma once

// State-space partitioning: the sparsest-cut LP with a constrained subset,
// l1 embedding of its metric, sweep rounding, FindComp and the recursive
// partition into well-connected components plus a tail.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcid/constants.hpp"
#include "mcid/metrics.hpp"
#include "mcid/simplex.hpp"

namespace mcid {

struct MetricLP {
  StateSet I;
  StateSet T;
  Eigen::MatrixXd delta;  // indexed by positions in I
  double objective = 0.0;
  long iterations = 0;
};

/// (Q(S, I\S) + Q(I\S, S)) / (2 pi(S) pi(I\S)): the LP objective of the cut
/// metric of S normalised to unit pi x pi mass.
inline double spccc_ratio(const ChainView& c, const StateSet& i, const StateSet& s) {
  const StateSet rest = set_difference(i, s);
  return (c.Q.flow(s, rest) + c.Q.flow(rest, s)) / (2.0 * c.pi.mass(s) * c.pi.mass(rest));
}

/// Best cut over nonempty S inside I \ T with S != I (so T stays on one side).
inline std::pair<double, StateSet> spccc_bruteforce(const ChainView& c, const StateSet& i, const StateSet& t) {
  const StateSet free = set_difference(i, t);
  return minimize_over_subsets(free, t.empty(), [&](const StateSet& s) { return spccc_ratio(c, i, s); });
}

namespace detail {

inline constexpr std::size_t kMaterializeTriangles = 16;

struct ContractedLP {
  std::size_t n = 0;
  std::vector<double> cost;    // per unordered node pair
  std::vector<double> weight;  // per unordered node pair
  std::size_t pair(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
  }
};

struct Triangle {
  std::size_t ak, kb, ab;  // pair indices: x_ak + x_kb - x_ab >= 0
};

inline std::vector<double> solve_metric_dual(const ContractedLP& lp, const std::vector<Triangle>& tri, long& iters) {
  const std::size_t np = lp.cost.size();
  const double cs = std::max(*std::max_element(lp.cost.begin(), lp.cost.end()), 1e-300);
  const double ws = *std::max_element(lp.weight.begin(), lp.weight.end());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(tri.size() + 1));
  Eigen::VectorXd b(static_cast<Eigen::Index>(np));
  for (std::size_t p = 0; p < np; ++p) {
    a(static_cast<Eigen::Index>(p), 0) = lp.weight[p] / ws;
    b(static_cast<Eigen::Index>(p)) = lp.cost[p] / cs;
  }
  for (std::size_t t = 0; t < tri.size(); ++t) {
    const auto col = static_cast<Eigen::Index>(t + 1);
    a(static_cast<Eigen::Index>(tri[t].ak), col) += 1.0;
    a(static_cast<Eigen::Index>(tri[t].kb), col) += 1.0;
    a(static_cast<Eigen::Index>(tri[t].ab), col) -= 1.0;
  }
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(a.cols());
  obj(0) = 1.0;
  auto res = simplex_max(a, b, obj);
  iters += res.iterations;
  std::vector<double> x(np);
  double norm = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    x[p] = std::max(res.duals(static_cast<Eigen::Index>(p)), 0.0);
    norm += lp.weight[p] * x[p];
  }
  if (!(norm > 0.0)) throw Error(Errc::infeasible, "metric LP returned a zero metric");
  for (auto& v : x) v /= norm;
  return x;
}

inline std::vector<Triangle> all_triangles(const ContractedLP& lp) {
  std::vector<Triangle> out;
  for (std::size_t u = 0; u < lp.n; ++u)
    for (std::size_t v = u + 1; v < lp.n; ++v)
      for (std::size_t k = 0; k < lp.n; ++k)
        if (k != u && k != v) out.push_back({lp.pair(u, k), lp.pair(k, v), lp.pair(u, v)});
  return out;
}

}  // namespace detail

/// Minimises sum_{i,j in I} Q(i,j) delta_ij over semimetrics on I with unit
/// pi x pi mass and delta = 0 on T. The T block is contracted to one node,
/// which enforces both T constraints exactly, and the LP dual is solved.
inline MetricLP solve_spccc_lp(const ChainView& c, const StateSet& i, const StateSet& t) {
  check_subset(i, c.size());
  check_subset(t, c.size());
  if (i.size() < 2) throw Error(Errc::bad_subset, "LP needs |I| >= 2");
  if (!is_subset(t, i)) throw Error(Errc::bad_subset, "T must lie inside I");
  if (t.size() == i.size()) throw Error(Errc::bad_subset, "T must leave a free state in I");

  const StateSet free = set_difference(i, t);
  std::vector<StateSet> nodes;
  for (auto s : free) nodes.push_back({s});
  if (!t.empty()) nodes.push_back(t);

  detail::ContractedLP lp;
  lp.n = nodes.size();
  const std::size_t np = lp.n * (lp.n - 1) / 2;
  lp.cost.assign(np, 0.0);
  lp.weight.assign(np, 0.0);
  for (std::size_t u = 0; u < lp.n; ++u)
    for (std::size_t v = u + 1; v < lp.n; ++v) {
      const auto p = lp.pair(u, v);
      lp.cost[p] = c.Q.flow(nodes[u], nodes[v]) + c.Q.flow(nodes[v], nodes[u]);
      lp.weight[p] = 2.0 * c.pi.mass(nodes[u]) * c.pi.mass(nodes[v]);
    }

  long iters = 0;
  std::vector<double> x;
  if (lp.n <= detail::kMaterializeTriangles) {
    x = detail::solve_metric_dual(lp, detail::all_triangles(lp), iters);
  } else {
    std::vector<detail::Triangle> active;
    for (;;) {
      x = detail::solve_metric_dual(lp, active, iters);
      std::vector<std::pair<double, detail::Triangle>> violated;
      for (const auto& tr : detail::all_triangles(lp)) {
        const double gap = x[tr.ab] - x[tr.ak] - x[tr.kb];
        if (gap > 1e-10 * (1.0 + x[tr.ab])) violated.push_back({gap, tr});
      }
      if (violated.empty()) break;
      std::sort(violated.begin(), violated.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
      const std::size_t take = std::min<std::size_t>(violated.size(), 4 * lp.n * lp.n);
      for (std::size_t k = 0; k < take; ++k) active.push_back(violated[k].second);
    }
  }

  std::vector<std::size_t> node_of(i.size());
  for (std::size_t a = 0; a < i.size(); ++a)
    node_of[a] = contains(t, i[a]) ? lp.n - 1 : static_cast<std::size_t>(
                                                    std::lower_bound(free.begin(), free.end(), i[a]) - free.begin());
  MetricLP out;
  out.I = i;
  out.T = t;
  out.iterations = iters;
  const auto n = static_cast<Eigen::Index>(i.size());
  out.delta = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto u = node_of[static_cast<std::size_t>(a)];
      const auto v = node_of[static_cast<std::size_t>(b)];
      if (u != v) out.delta(a, b) = x[lp.pair(u, v)];
    }
  for (std::size_t p = 0; p < np; ++p) out.objective += lp.cost[p] * x[p];
  return out;
}

inline MetricLP solve_spccc_lp(const TransitionMatrix& p, const StateSet& i, const StateSet& t) {
  return solve_spccc_lp(ChainView(p), i, t);
}

// Embedding -------------------------------------------------------------------------

struct Embedding {
  StateSet I;
  std::vector<std::vector<double>> coords;  // coords[r][position in I]

  double l1(std::size_t a, std::size_t b) const {
    double s = 0.0;
    for (const auto& x : coords) s += std::abs(x[a] - x[b]);
    return s;
  }
};

/// Frechet embedding over random anchor sets A at densities 2^-s; coordinate
/// value is the distance to A divided by the number of coordinates.
inline Embedding bourgain_embed(const MetricLP& lp, std::uint64_t seed, double c_bourgain = 8.0) {
  const std::size_t n = lp.I.size();
  Embedding e;
  e.I = lp.I;
  if (n < 2) {
    e.coords.assign(1, std::vector<double>(n, 0.0));
    return e;
  }
  const auto scales = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
  const auto reps = static_cast<std::size_t>(std::max(1.0, std::ceil(c_bourgain * std::log(static_cast<double>(n)))));
  const double k = static_cast<double>(scales * reps);
  std::mt19937_64 rng(derive_seed(seed, 0xB0u));
  for (std::size_t s = 1; s <= scales; ++s) {
    const double incl = std::ldexp(1.0, -static_cast<int>(s));
    for (std::size_t r = 0; r < reps; ++r) {
      std::vector<std::size_t> anchors;
      while (anchors.empty())
        for (std::size_t a = 0; a < n; ++a)
          if (uniform01(rng) < incl) anchors.push_back(a);
      std::vector<double> x(n);
      for (std::size_t a = 0; a < n; ++a) {
        double m = std::numeric_limits<double>::infinity();
        for (auto b : anchors) m = std::min(m, lp.delta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        x[a] = m / k;
      }
      e.coords.push_back(std::move(x));
    }
  }
  return e;
}

/// Largest contraction delta_ij / |x_i - x_j|_1 over pairs with delta_ij > 0.
inline double distortion(const Embedding& e, const MetricLP& lp) {
  double worst = 1.0;
  for (std::size_t a = 0; a < lp.I.size(); ++a)
    for (std::size_t b = a + 1; b < lp.I.size(); ++b) {
      const double d = lp.delta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (d <= 1e-12) continue;
      const double x = e.l1(a, b);
      worst = std::max(worst, x > 0.0 ? d / x : std::numeric_limits<double>::infinity());
    }
  return worst;
}

/// Sweep every coordinate for threshold cuts and keep the one with the least
/// normalised cut ratio, oriented away from T (or to the lighter side when T
/// is empty). Ties go to the lexicographically smallest side.
inline StateSet round_to_cut(const Embedding& e, const ChainView& c, const StateSet& i, const StateSet& t) {
  const std::size_t n = i.size();
  double best = std::numeric_limits<double>::infinity();
  StateSet best_cut;
  std::vector<std::size_t> order(n);
  for (const auto& x : e.coords) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    StateSet prefix;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      prefix.push_back(i[order[k]]);
      if (!(x[order[k]] < x[order[k + 1]])) continue;
      StateSet s = make_set(prefix);
      StateSet rest = set_difference(i, s);
      if (!t.empty()) {
        if (!set_intersection(s, t).empty()) std::swap(s, rest);
        if (!set_intersection(s, t).empty()) continue;
      } else {
        const double ms = c.pi.mass(s);
        const double mr = c.pi.mass(rest);
        if (mr < ms || (mr == ms && rest.front() < s.front())) std::swap(s, rest);
      }
      const double v = spccc_ratio(c, i, s);
      if (v < best || (v == best && s < best_cut)) {
        best = v;
        best_cut = std::move(s);
      }
    }
  }
  if (best_cut.empty()) throw Error(Errc::degenerate_embedding, "embedding separates no states; re-seed");
  return best_cut;
}

inline constexpr int kFindCompAttempts = 32;

struct FindCompResult {
  StateSet cut;
  double ratio = 0.0;         // spccc_ratio of the cut
  double lp_objective = 0.0;  // LP lower bound on every admissible cut's ratio
  int attempts = 0;
};

/// LP -> embedding -> rounding, re-seeding the embedding on degenerate draws.
inline FindCompResult find_comp_detailed(const ChainView& c, const StateSet& i, const StateSet& t, std::uint64_t seed,
                                         const Constants& k = {}) {
  const MetricLP lp = solve_spccc_lp(c, i, t);
  for (int attempt = 0; attempt < kFindCompAttempts; ++attempt) {
    try {
      const auto emb = bourgain_embed(lp, derive_seed(seed, 0xF1Du, static_cast<std::uint64_t>(attempt)), k.c_bourgain);
      FindCompResult r;
      r.cut = round_to_cut(emb, c, i, t);
      r.ratio = spccc_ratio(c, i, r.cut);
      r.lp_objective = lp.objective;
      r.attempts = attempt + 1;
      return r;
    } catch (const Error& err) {
      if (err.code() != Errc::degenerate_embedding) throw;
    }
  }
  throw Error(Errc::degenerate_embedding, "no separating embedding after repeated seeds");
}

inline StateSet find_comp(const ChainView& c, const StateSet& i, const StateSet& t, std::uint64_t seed,
                          const Constants& k = {}) {
  return find_comp_detailed(c, i, t, seed, k).cut;
}

inline StateSet find_comp(const TransitionMatrix& p, const StateSet& i, const StateSet& t, std::uint64_t seed,
                          const Constants& k = {}) {
  return find_comp(ChainView(p), i, t, seed, k);
}

// Partition -------------------------------------------------------------------------

struct ComponentCertificate {
  StateSet S;
  double retention = 0.0;
  double min_bottleneck = std::numeric_limits<double>::quiet_NaN();  // brute force, when certified
};

struct StatePartition {
  std::vector<StateSet> components;
  StateSet tail;
  double beta = 0.0;
  double theta2 = 0.0;  // conductance floor inside components
  double theta3 = 0.0;  // escape floor for subsets of the tail
  bool certified = false;
  std::vector<ComponentCertificate> certificates;
  double tail_min_escape = std::numeric_limits<double>::quiet_NaN();
};

struct PartitionOptions {
  double beta = 0.1;
  std::uint64_t seed = 0;
  bool certify = true;
  Constants constants{};
};

inline constexpr std::size_t kCertifyLimit = 12;

namespace detail {

class Partitioner {
 public:
  Partitioner(const ChainView& c, const PartitionOptions& o) : c_(c), o_(o) {
    const double ld = std::log(static_cast<double>(std::max<std::size_t>(c.size(), 2)));
    theta2_ = o.constants.c2 * o.beta / (ld * ld);
    theta3_ = o.constants.c3 * o.beta / ld;
    split_ = 2.0 * o.constants.c_round * ld * theta2_;
    repair_ = theta3_ * o.constants.c_round * ld;
  }

  StatePartition run() {
    std::vector<StateSet> components;
    StateSet tail;
    for (auto& piece : decompose(full_set(c_.size()))) {
      if (retention(piece) >= 1.0 - o_.beta)
        components.push_back(std::move(piece));
      else
        tail = set_union(tail, piece);
    }
    repair(components, tail);
    return finish(std::move(components), std::move(tail));
  }

  /// While some subset of the tail escapes it too slowly (as judged by
  /// FindComp with the kept states pinned together), decompose that subset
  /// and promote its well-retaining pieces to components.
  void repair(std::vector<StateSet>& components, StateSet& tail) {
    const std::size_t d = c_.size();
    while (!tail.empty() && tail.size() < d) {
      const StateSet kept = complement(tail, d);
      const auto fc = find_comp_detailed(c_, full_set(d), kept, next_seed(), o_.constants);
      if (fc.ratio >= repair_ / c_.pi.mass(kept)) break;
      bool promoted = false;
      for (auto& piece : decompose(fc.cut)) {
        if (retention(piece) < 1.0 - o_.beta) continue;
        tail = set_difference(tail, piece);
        components.push_back(std::move(piece));
        promoted = true;
      }
      if (!promoted) break;
    }
  }

  StatePartition finish(std::vector<StateSet> components, StateSet tail) const {
    std::sort(components.begin(), components.end());
    StatePartition out;
    out.components = std::move(components);
    out.tail = std::move(tail);
    out.beta = o_.beta;
    out.theta2 = theta2_;
    out.theta3 = theta3_;
    for (const auto& s : out.components) out.certificates.push_back({s, retention(s)});
    return out;
  }

  /// Split J along sparse cuts until every piece has no cut sparser than the
  /// split threshold (as judged by FindComp).
  std::vector<StateSet> decompose(const StateSet& j) {
    std::vector<StateSet> pieces;
    std::deque<StateSet> work{j};
    while (!work.empty()) {
      StateSet cur = std::move(work.front());
      work.pop_front();
      if (cur.size() == 1) {
        pieces.push_back(std::move(cur));
        continue;
      }
      StateSet cut = find_comp(c_, cur, {}, next_seed(), o_.constants);
      if (bottleneck_value(c_, cut, cur) < split_) {
        work.push_back(set_difference(cur, cut));
        work.push_back(std::move(cut));
      } else {
        pieces.push_back(std::move(cur));
      }
    }
    return pieces;
  }

 private:
  double retention(const StateSet& s) const { return internal_retention(c_.Q, c_.pi, s); }

  std::uint64_t next_seed() { return derive_seed(o_.seed, 0x9A27u, calls_++); }

  const ChainView& c_;
  PartitionOptions o_;
  double theta2_ = 0.0;
  double theta3_ = 0.0;
  double split_ = 0.0;
  double repair_ = 0.0;
  std::uint64_t calls_ = 0;
};

}  // namespace detail

/// Brute-force audit of the three partition guarantees; fills the certificate
/// fields and returns a description of the first failure (empty when all hold).
inline std::string certify_partition(const ChainView& c, StatePartition& part) {
  std::ostringstream why;
  StateSet seen;
  for (const auto& s : part.components) {
    if (!set_intersection(seen, s).empty()) why << "components overlap; ";
    seen = set_union(seen, s);
  }
  if (!set_intersection(seen, part.tail).empty() || set_union(seen, part.tail) != full_set(c.size()))
    why << "components and tail do not partition the states; ";
  for (auto& cert : part.certificates) {
    if (cert.retention < 1.0 - part.beta) why << "component retention " << cert.retention << " < 1 - beta; ";
    cert.min_bottleneck = min_bottleneck_bruteforce(c, cert.S);
    if (cert.min_bottleneck < part.theta2) why << "component conductance " << cert.min_bottleneck << " below floor; ";
  }
  part.tail_min_escape = min_escape_bruteforce(c, part.tail);
  if (part.tail_min_escape < part.theta3) why << "tail escape ratio " << part.tail_min_escape << " below floor; ";
  part.certified = why.str().empty();
  return why.str();
}

inline StatePartition partition_states(const TransitionMatrix& p, const PartitionOptions& opt) {
  if (!(opt.beta > 0.0 && opt.beta < 1.0)) throw Error(Errc::bad_args, "beta must lie in (0,1)");
  detail::require_irreducible(p);
  const ChainView c(p);
  if (detailed_balance_residual(p, c.pi) > kReversibilityTolerance)
    throw Error(Errc::not_reversible, "partitioning requires a reversible chain");
  StatePartition out = detail::Partitioner(c, opt).run();
  if (opt.certify && p.size() <= kCertifyLimit) {
    const auto why = certify_partition(c, out);
    if (!why.empty()) throw Error(Errc::certification_failed, why);
  }
  return out;
}

}  // namespace mcid
