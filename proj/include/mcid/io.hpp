#pragma once

// JSON documents for matrices, vectors, trajectories, samples, constants and
// reports. State indices are 1-based on disk and 0-based in memory.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcid/constants.hpp"
#include "mcid/identity.hpp"
#include "mcid/properties.hpp"

namespace mcid::io {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::parse_error, "cannot write " + path);
  out << text;
}

inline json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, what + ": " + e.what());
  }
}

/// FNV-1a 64-bit digest, hex encoded.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

/// Rounds every floating value in the document to 12 significant digits.
inline void round_numbers(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

inline std::string dump(json j) {
  round_numbers(j);
  return j.dump(2) + "\n";
}

namespace detail {

inline std::size_t read_d(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer() || j["d"].get<long long>() < 1)
    throw Error(Errc::parse_error, std::string(what) + ": missing positive integer \"d\"");
  return j["d"].get<std::size_t>();
}

template <class T>
std::vector<T> read_array(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array()) throw Error(Errc::parse_error, std::string(what) + ": missing \"" + key + "\"");
  try {
    return j[key].get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string(what) + ": " + e.what());
  }
}

inline std::vector<std::size_t> one_based(const std::vector<long long>& v, std::size_t d, const char* what) {
  std::vector<std::size_t> out;
  out.reserve(v.size());
  for (auto s : v) {
    if (s < 1 || static_cast<std::size_t>(s) > d)
      throw Error(Errc::parse_error, std::string(what) + ": state " + std::to_string(s) + " outside 1..d");
    out.push_back(static_cast<std::size_t>(s - 1));
  }
  return out;
}

template <class Container>
std::vector<std::size_t> plus_one(const Container& s) {
  std::vector<std::size_t> out(s.begin(), s.end());
  for (auto& v : out) ++v;
  return out;
}

}  // namespace detail

inline TransitionMatrix matrix_from_json(const json& j) {
  const auto d = detail::read_d(j, "matrix");
  const auto rows = detail::read_array<std::vector<double>>(j, "rows", "matrix");
  if (rows.size() != d) throw Error(Errc::malformed_matrix, "matrix: row count differs from d");
  return TransitionMatrix::from_rows(rows);
}

inline json to_json(const TransitionMatrix& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < p.size(); ++j) r.push_back(p(i, j));
    rows.push_back(std::move(r));
  }
  return {{"d", p.size()}, {"rows", rows}};
}

inline ProbVector prob_from_json(const json& j) {
  const auto d = detail::read_d(j, "distribution");
  const auto p = detail::read_array<double>(j, "p", "distribution");
  if (p.size() != d) throw Error(Errc::parse_error, "distribution: length differs from d");
  return ProbVector::from_values(p);
}

inline json to_json(const ProbVector& p) {
  return {{"d", p.size()}, {"p", std::vector<double>(p.values().begin(), p.values().end())}};
}

inline Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.d = detail::read_d(j, "trajectory");
  const auto states = detail::one_based(detail::read_array<long long>(j, "states", "trajectory"), t.d, "trajectory");
  t.states.assign(states.begin(), states.end());
  if (t.states.empty()) throw Error(Errc::parse_error, "trajectory: no states");
  if (j.contains("seed") && j["seed"].is_number_unsigned()) t.seed = j["seed"].get<std::uint64_t>();
  return t;
}

inline json to_json(const Trajectory& t) {
  return {{"d", t.d}, {"seed", t.seed}, {"states", detail::plus_one(t.states)}};
}

struct SampleFile {
  std::size_t d = 0;
  std::vector<std::size_t> samples;
};

inline SampleFile samples_from_json(const json& j) {
  SampleFile s;
  s.d = detail::read_d(j, "samples");
  s.samples = detail::one_based(detail::read_array<long long>(j, "samples", "samples"), s.d, "samples");
  return s;
}

inline json to_json(const Constants& k) {
  return {{"c_vis", k.c_vis},           {"c_hist", k.c_hist},         {"c_len", k.c_len},
          {"c_round", k.c_round},       {"c2", k.c2},                 {"c3", k.c3},
          {"c_iid", k.c_iid},           {"c_bourgain", k.c_bourgain}, {"c_tail_len", k.c_tail_len},
          {"c_tail_escape", k.c_tail_escape}};
}

/// Overrides the named constants present in `j`; unknown keys are rejected.
inline Constants constants_from_json(const json& j, Constants k = {}) {
  if (!j.is_object()) throw Error(Errc::parse_error, "constants: expected an object");
  const json known = to_json(k);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(Errc::parse_error, "constants: unknown key " + key);
    if (!value.is_number() || !(value.get<double>() > 0.0))
      throw Error(Errc::parse_error, "constants: " + key + " must be a positive number");
  }
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j[key].get<double>();
  };
  get("c_vis", k.c_vis);
  get("c_hist", k.c_hist);
  get("c_len", k.c_len);
  get("c_round", k.c_round);
  get("c2", k.c2);
  get("c3", k.c3);
  get("c_iid", k.c_iid);
  get("c_bourgain", k.c_bourgain);
  get("c_tail_len", k.c_tail_len);
  get("c_tail_escape", k.c_tail_escape);
  return k;
}

inline json to_json(const StatePartition& p) {
  json comps = json::array();
  for (const auto& c : p.certificates) {
    json e = {{"states", detail::plus_one(c.S)}, {"retention", c.retention}};
    e["min_bottleneck"] = std::isnan(c.min_bottleneck) ? json(nullptr) : json(c.min_bottleneck);
    comps.push_back(std::move(e));
  }
  json out = {{"components", comps}, {"tail", detail::plus_one(p.tail)}, {"beta", p.beta},
              {"theta2", p.theta2},  {"theta3", p.theta3},              {"certified", p.certified}};
  out["tail_min_escape"] = std::isnan(p.tail_min_escape) ? json(nullptr) : json(p.tail_min_escape);
  return out;
}

inline json to_json(const TestVerdict& v) {
  json out = {{"decision", v.decision}, {"threshold", v.threshold}, {"sample_size", v.sample_size}};
  out["statistic"] = std::isfinite(v.statistic) ? json(v.statistic) : json("inf");
  return out;
}

inline json to_json(const TestReport& r) {
  json comps = json::array();
  for (const auto& c : r.per_component) {
    json e = {{"states", detail::plus_one(c.S)}, {"requested", c.requested}, {"failed", c.failed}};
    if (c.verdict) e["verdict"] = to_json(*c.verdict);
    comps.push_back(std::move(e));
  }
  json out = {{"verdict", r.verdict == 0 ? "accept" : "reject"},
              {"decision", r.verdict},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"eps_iid", r.eps_iid},
              {"delta_iid", r.delta_iid},
              {"trajectory_length", r.trajectory_length},
              {"partition", to_json(r.partition)},
              {"per_component", comps}};
  out["tested_component"] = r.tested_component ? json(detail::plus_one(*r.tested_component)) : json(nullptr);
  return out;
}

inline json to_json(const PropertyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"evaluated", c.evaluated},
                      {"violations", c.violations},
                      {"worst_margin", c.worst_margin}});
  return {{"seed", r.seed},
          {"pairs", r.pairs},
          {"checks", checks},
          {"family", {{"alpha", r.family_alpha}, {"distance", r.family_distance}, {"hellinger_sq", r.family_hellinger_sq}}},
          {"violations", r.violations},
          {"ok", r.ok()}};
}

}  // namespace mcid::io
