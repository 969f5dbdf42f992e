#pragma once

// Randomised audit of the structural properties of the chain distance:
// laziness, time reversal, mixtures, powers, the large-power limit,
// reversibilization, and the two-state family with vanishing distance.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcid/generators.hpp"
#include "mcid/metrics.hpp"

namespace mcid {

struct PropertyCheck {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of (rhs - lhs); negative means violated
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  std::vector<PropertyCheck> checks;
  std::vector<double> family_alpha;
  std::vector<double> family_distance;
  std::vector<double> family_hellinger_sq;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

class PropertyTally {
 public:
  explicit PropertyTally(PropertyReport& r) : r_(r) {}

  PropertyCheck& check(const std::string& name) {
    for (auto& c : r_.checks)
      if (c.name == name) return c;
    r_.checks.push_back({name});
    return r_.checks.back();
  }

  /// Records lhs <= rhs + slack.
  void at_most(const std::string& name, double lhs, double rhs, double slack, std::size_t pair) {
    auto& c = check(name);
    ++c.evaluated;
    const double margin = rhs - lhs;
    c.worst_margin = std::min(c.worst_margin, margin);
    if (!(margin >= -slack)) {
      ++c.violations;
      if (r_.violations.size() < 50) {
        std::ostringstream os;
        os.precision(12);
        os << name << " pair " << pair << ": " << lhs << " > " << rhs;
        r_.violations.push_back(os.str());
      }
    }
  }

 private:
  PropertyReport& r_;
};

}  // namespace detail

inline PropertyReport property_suite(std::uint64_t seed, std::size_t pairs = 1000) {
  PropertyReport rep;
  rep.seed = seed;
  rep.pairs = pairs;
  detail::PropertyTally tally(rep);
  constexpr double slack = 1e-9;

  for (std::size_t k = 0; k < pairs; ++k) {
    std::mt19937_64 rng(derive_seed(seed, 0x9209u, k));
    const std::size_t d = 2 + k % 7;
    const bool reversible = k % 2 == 0;
    auto draw = [&] { return reversible ? gen::random_reversible(d, rng) : gen::random_irreducible(d, rng); };
    const TransitionMatrix p = draw();
    TransitionMatrix pbar = draw();
    if (k % 3 == 0) pbar = convex_combination(pbar, p, 0.05 + 0.3 * uniform01(rng));

    const double dist = chain_distance(p, pbar);

    // (i) laziness at alpha = eps^2 / (2 sqrt 2) keeps at least half the distance
    if (dist > 0.0 && dist < 1.0) {
      const double a = dist * dist / (2.0 * std::sqrt(2.0));
      tally.at_most("lazy_half_distance", dist / 2.0, chain_distance(lazy_version(p, a), lazy_version(pbar, a)), slack,
                    k);
    }

    // (ii) time reversal preserves the distance
    {
      const double rev = chain_distance(time_reversal(p), time_reversal(pbar));
      tally.at_most("time_reversal_equal", std::abs(rev - dist), 0.0, 1e-7, k);
    }

    // (iii) mixture lower bound for reversible pairs with close stationary laws
    if (reversible) {
      const double eps = ratio_distance(stationary_distribution(p), stationary_distribution(pbar)) + 1e-6;
      if (eps < 1.0) {
        const double a = uniform01(rng);
        const double f = 2.0 * std::sqrt((1.0 - a) / (1.0 - eps));
        const double bound = 1.0 - std::sqrt(a) - f + f * dist;
        tally.at_most("mixture_lower_bound", bound, chain_distance(p, convex_combination(p, pbar, a)), slack, k);
      }
    }

    // (iv) powers
    {
      const std::size_t pw = 1 + static_cast<std::size_t>(uniform_index(rng, 8));
      tally.at_most("power_upper_bound", chain_distance(matrix_power(p, pw), matrix_power(pbar, pw)),
                    1.0 - std::pow(1.0 - dist, static_cast<double>(pw)), slack, k);
    }

    // (v) large powers approach the squared Hellinger distance of the stationary laws
    if (validate(p).ergodic && validate(pbar).ergodic) {
      const double lim = hellinger_sq(stationary_distribution(p), stationary_distribution(pbar));
      const double big = chain_distance(matrix_power(p, 2048), matrix_power(pbar, 2048));
      tally.at_most("power_limit_hellinger", std::abs(big - lim), 0.0, 1e-4, k);
    }

    // (vi) multiplicative reversibilization at most doubles the distance
    tally.at_most("reversibilization_double",
                  chain_distance(multiplicative_reversibilization(p), multiplicative_reversibilization(pbar)),
                  2.0 * dist, slack, k);
  }

  // (vii) two-state family
  for (double a : {0.1, 0.01, 0.001}) {
    const auto [p, pbar] = gen::vanishing_pair(a);
    rep.family_alpha.push_back(a);
    rep.family_distance.push_back(chain_distance(p, pbar));
    rep.family_hellinger_sq.push_back(hellinger_sq(stationary_distribution(p), stationary_distribution(pbar)));
  }
  for (std::size_t i = 1; i < rep.family_distance.size(); ++i)
    tally.at_most("family_distance_decreasing", rep.family_distance[i], rep.family_distance[i - 1], 0.0, i);
  tally.at_most("family_distance_small", rep.family_distance.back(), 0.05, 0.0, 2);
  tally.at_most("family_hellinger_apart", 0.25, rep.family_hellinger_sq.back(), 0.0, 2);
  return rep;
}

}  // namespace mcid
