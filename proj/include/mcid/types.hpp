#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mcid/errors.hpp"

namespace mcid {

/// Sorted, duplicate-free list of 0-based state indices.
using StateSet = std::vector<std::size_t>;

inline StateSet make_set(std::vector<std::size_t> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

inline StateSet full_set(std::size_t d) {
  StateSet s(d);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

inline bool contains(const StateSet& s, std::size_t i) {
  return std::binary_search(s.begin(), s.end(), i);
}

inline StateSet set_difference(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline StateSet set_intersection(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const StateSet& inner, const StateSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline StateSet complement(const StateSet& s, std::size_t d) { return set_difference(full_set(d), s); }

/// Throws BadSubset unless `s` is sorted, unique and inside [0, d).
inline void check_subset(const StateSet& s, std::size_t d) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= d) throw Error(Errc::bad_subset, "state index out of range");
    if (k > 0 && s[k] <= s[k - 1]) throw Error(Errc::bad_subset, "subset must be sorted and unique");
  }
}

/// Members of `universe` selected by the bits of `mask`.
inline StateSet subset_from_mask(const StateSet& universe, std::uint64_t mask) {
  StateSet out;
  for (std::size_t k = 0; k < universe.size(); ++k)
    if (mask >> k & 1U) out.push_back(universe[k]);
  return out;
}

// Seeds ----------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (seed, stream, index); used for per-trial and per-stage RNGs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream + 0x51ed2701ULL)) + index);
}

/// Uniform double in [0, 1) built from the top 53 bits of a 64-bit engine draw.
template <class Engine>
double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n > 0.
template <class Engine>
std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace mcid
