#pragma once

// Single-trajectory identity test for reversible chains: partition the lazy
// reference, turn the trajectory into iid draws on one component and run the
// iid tester against the reference's induced distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mcid/iid_test.hpp"
#include "mcid/partition.hpp"
#include "mcid/sampling.hpp"

namespace mcid {

enum class LazifyMode { emulate, assume };

struct TestConfig {
  double eps = 0.3;
  double beta = std::numeric_limits<double>::quiet_NaN();       // default eps / 16
  double delta_iid = std::numeric_limits<double>::quiet_NaN();  // default 1 / (10 d)
  LazifyMode lazify = LazifyMode::emulate;
  bool certify = true;
  Constants constants{};
  std::uint64_t seed = 0;
};

struct ComponentTrace {
  StateSet S;
  std::size_t requested = 0;
  bool failed = true;
  std::optional<TestVerdict> verdict;
};

struct TestReport {
  int verdict = 1;  // 0 accept, 1 reject
  double alpha = 0.0;
  double beta = 0.0;
  double eps_iid = 0.0;
  double delta_iid = 0.0;
  StatePartition partition;
  std::optional<StateSet> tested_component;
  std::vector<ComponentTrace> per_component;
  std::size_t trajectory_length = 0;
};

inline double lazy_alpha(double eps) { return eps * eps / (2.0 * std::sqrt(2.0)); }

/// C_len ln^6 d ln(1/pi*) ln(d/pi*) / (eps^4 pi*), with ln d floored at ln 2.
inline std::size_t trajectory_budget(std::size_t d, double pibar_star, double eps, const Constants& k = {}) {
  if (d == 0 || !(pibar_star > 0.0 && pibar_star < 1.0) || !(eps > 0.0 && eps < 1.0))
    throw Error(Errc::bad_args, "trajectory_budget: arguments out of range");
  const double dd = static_cast<double>(d);
  const double ld = std::log(std::max(dd, 2.0));
  const double v = k.c_len * std::pow(ld, 6) * std::log(1.0 / pibar_star) * std::log(std::max(dd, 2.0) / pibar_star) /
                   (std::pow(eps, 4) * pibar_star);
  return static_cast<std::size_t>(std::ceil(v));
}

inline TestReport identity_test(const TransitionMatrix& pbar, const Trajectory& traj, const TestConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw Error(Errc::bad_args, "eps must lie in (0,1)");
  const std::size_t d = pbar.size();
  if (!is_irreducible(pbar)) throw Error(Errc::not_reversible_reference, "reference chain is not irreducible");
  const auto pibar = stationary_distribution(pbar);
  if (detailed_balance_residual(pbar, pibar) > kReversibilityTolerance)
    throw Error(Errc::not_reversible_reference, "reference chain is not reversible");
  if (traj.d != d || traj.states.empty() ||
      std::any_of(traj.states.begin(), traj.states.end(), [&](std::size_t s) { return s >= d; }))
    throw Error(Errc::trajectory_alphabet_mismatch, "trajectory states do not match the reference state space");

  TestReport r;
  r.alpha = lazy_alpha(cfg.eps);
  r.beta = std::isnan(cfg.beta) ? cfg.eps / 16.0 : cfg.beta;
  r.delta_iid = std::isnan(cfg.delta_iid) ? 1.0 / (10.0 * static_cast<double>(d)) : cfg.delta_iid;
  r.eps_iid = cfg.eps / std::sqrt(128.0);

  const auto lazy_ref = lazy_version(pbar, r.alpha);
  const Trajectory observed =
      cfg.lazify == LazifyMode::emulate ? lazify_trajectory(traj, r.alpha, derive_seed(cfg.seed, 0x1Au)) : traj;
  r.trajectory_length = observed.states.size();

  PartitionOptions po;
  po.beta = r.beta;
  po.seed = derive_seed(cfg.seed, 0x9Au);
  po.certify = cfg.certify;
  po.constants = cfg.constants;
  r.partition = partition_states(lazy_ref, po);

  std::vector<StateSet> order = r.partition.components;
  std::stable_sort(order.begin(), order.end(),
                   [&](const StateSet& a, const StateSet& b) { return pibar.mass(a) > pibar.mass(b); });

  for (std::size_t c = 0; c < order.size(); ++c) {
    const StateSet& s = order[c];
    std::vector<double> nu(d, 0.0);
    const double ms = pibar.mass(s);
    for (auto i : s) nu[i] = pibar(i) / ms;
    const auto nu_p = ProbVector::from_values(nu);
    ComponentTrace tr;
    tr.S = s;
    tr.requested = iid_sample_size(s.size() * s.size() + 1, r.eps_iid, r.delta_iid, cfg.constants);
    const auto y = iid_generate(observed, s, nu_p, tr.requested, derive_seed(cfg.seed, 0x2Au, c));
    if (!y) {
      r.per_component.push_back(std::move(tr));
      continue;
    }
    tr.failed = false;
    const auto ref = induced_distribution(lazy_ref, pibar, s).dense();
    tr.verdict = iid_test(*y, ref, r.eps_iid, r.delta_iid, derive_seed(cfg.seed, 0x3Au, c), cfg.constants);
    r.verdict = tr.verdict->decision;
    r.tested_component = s;
    r.per_component.push_back(std::move(tr));
    return r;
  }
  r.verdict = 1;
  return r;
}

}  // namespace mcid
