// mcid: command-line front end.
//
//   mcid simulate  --matrix P.json --mu stationary --steps N --seed S [--out traj.json]
//   mcid partition --matrix P.json --beta B --seed S [--out part.json]
//   mcid distance  --a P.json --b Q.json
//   mcid iidtest   --pbar p.json --samples x.json --eps E --delta D --seed S
//   mcid test      --reference P.json --trajectory traj.json --eps E --seed S [--lazify emulate|assume]
//   mcid props     --seed S
//
// Exit codes: 0 success or accept, 1 reject, 2 usage/IO/parse error, 3 certification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "mcid/io.hpp"
#include "mcid/mcid.hpp"

namespace {

using mcid::io::json;

struct Inputs {
  std::map<std::string, std::string> digests;

  json load(const std::string& path, const std::string& what) {
    const auto text = mcid::io::read_file(path);
    digests[path] = mcid::io::digest(text);
    return mcid::io::parse(text, what);
  }
};

json manifest(const CLI::App& sub, const mcid::Constants& k, std::optional<std::uint64_t> seed, const Inputs& in) {
  json flags = json::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_name() == "--help") continue;
    const auto key = o->get_lnames().empty() ? o->get_name() : o->get_lnames().front();
    if (o->count() > 0) {
      const auto& r = o->results();
      flags[key] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!o->get_default_str().empty()) {
      flags[key] = o->get_default_str();
    }
  }
  json m = {{"subcommand", sub.get_name()},
            {"flags", flags},
            {"constants", mcid::io::to_json(k)},
            {"version", MCID_VERSION},
            {"inputs", in.digests}};
  m["seed"] = seed ? json(*seed) : json(nullptr);
  return m;
}

void emit(const json& doc, const std::string& out) {
  const auto text = mcid::io::dump(doc);
  if (out.empty())
    std::cout << text;
  else
    mcid::io::write_file(out, text);
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity testing of reversible Markov chains from one trajectory"};
  app.set_version_flag("--version", std::string("mcid ") + MCID_VERSION);
  app.require_subcommand(0, 1);

  bool dump_constants = false;
  std::string config;
  app.add_flag("--constants", dump_constants, "Print the resolved constant record");
  app.add_option("--config", config, "JSON file overriding named constants")->check(CLI::ExistingFile);

  std::string matrix, out, mu = "stationary";
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory");
  sim->add_option("--matrix", matrix, "Transition matrix file")->required();
  sim->add_option("--mu", mu, "Initial law: stationary, uniform or a distribution file")->capture_default_str();
  sim->add_option("--steps", steps, "Trajectory length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "RNG seed")->required();
  sim->add_option("--out", out, "Output file (default stdout)");

  double beta = 0.1;
  bool certify = true;
  auto* part = app.add_subcommand("partition", "Partition the states of a reversible chain");
  part->add_option("--matrix", matrix, "Transition matrix file")->required();
  part->add_option("--beta", beta, "Retention slack")->capture_default_str();
  part->add_option("--seed", seed, "RNG seed")->required();
  part->add_option("--certify", certify, "Brute-force certification for d <= 12")->capture_default_str();
  part->add_option("--out", out, "Output file (default stdout)");

  std::string fa, fb;
  auto* dist = app.add_subcommand("distance", "Chain distance and stationary ratio distance");
  dist->add_option("--a", fa, "First matrix file")->required();
  dist->add_option("--b", fb, "Second matrix file")->required();

  std::string pbar_file, samples_file;
  double eps = 0.3, delta = 0.1;
  auto* iid = app.add_subcommand("iidtest", "Identity test on iid samples");
  iid->add_option("--pbar", pbar_file, "Reference distribution file")->required();
  iid->add_option("--samples", samples_file, "Sample file")->required();
  iid->add_option("--eps", eps, "Hellinger distance to detect")->required();
  iid->add_option("--delta", delta, "Error probability")->capture_default_str();
  iid->add_option("--seed", seed, "RNG seed")->required();
  iid->add_option("--out", out, "Output file (default stdout)");

  std::string reference, trajectory, lazify = "emulate", report;
  auto* test = app.add_subcommand("test", "Identity test of a trajectory against a reference chain");
  test->add_option("--reference", reference, "Reference matrix file")->required();
  test->add_option("--trajectory", trajectory, "Trajectory file")->required();
  test->add_option("--eps", eps, "Distance to detect")->required();
  test->add_option("--seed", seed, "RNG seed")->required();
  test->add_option("--lazify", lazify, "emulate or assume")
      ->check(CLI::IsMember({"emulate", "assume"}))
      ->capture_default_str();
  test->add_option("--report", report, "Report file (default stdout)");

  auto* props = app.add_subcommand("props", "Randomised audit of the distance properties");
  std::size_t pairs = 1000;
  props->add_option("--seed", seed, "RNG seed")->required();
  props->add_option("--pairs", pairs, "Random pairs")->capture_default_str();
  props->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Inputs in;
    mcid::Constants k;
    if (!config.empty()) k = mcid::io::constants_from_json(in.load(config, "config"));
    if (dump_constants) {
      std::cout << mcid::io::dump(mcid::io::to_json(k));
      if (app.get_subcommands().empty()) return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }

    if (*sim) {
      const auto p = mcid::io::matrix_from_json(in.load(matrix, "matrix"));
      mcid::ProbVector start = mcid::ProbVector::uniform(p.size());
      if (mu == "stationary")
        start = mcid::stationary_distribution(p);
      else if (mu != "uniform")
        start = mcid::io::prob_from_json(in.load(mu, "initial distribution"));
      auto doc = mcid::io::to_json(mcid::simulate(p, start, steps, seed));
      doc["manifest"] = manifest(*sim, k, seed, in);
      emit(doc, out);
      return 0;
    }

    if (*part) {
      const auto p = mcid::io::matrix_from_json(in.load(matrix, "matrix"));
      mcid::PartitionOptions po;
      po.beta = beta;
      po.seed = seed;
      po.certify = certify;
      po.constants = k;
      auto doc = mcid::io::to_json(mcid::partition_states(p, po));
      doc["manifest"] = manifest(*part, k, seed, in);
      emit(doc, out);
      return 0;
    }

    if (*dist) {
      const auto a = mcid::io::matrix_from_json(in.load(fa, "matrix a"));
      const auto b = mcid::io::matrix_from_json(in.load(fb, "matrix b"));
      if (a.size() != b.size()) throw mcid::Error(mcid::Errc::shape_mismatch, "matrices differ in size");
      std::cout << "distance " << g12(mcid::chain_distance(a, b)) << "\n";
      std::cout << "ratio_distance "
                << g12(mcid::ratio_distance(mcid::stationary_distribution(a), mcid::stationary_distribution(b)))
                << "\n";
      return 0;
    }

    if (*iid) {
      const auto p = mcid::io::prob_from_json(in.load(pbar_file, "reference distribution"));
      const auto s = mcid::io::samples_from_json(in.load(samples_file, "samples"));
      if (s.d != p.size()) throw mcid::Error(mcid::Errc::alphabet_mismatch, "sample alphabet differs from reference");
      auto doc = mcid::io::to_json(mcid::iid_test(s.samples, p.values(), eps, delta, seed, k));
      doc["manifest"] = manifest(*iid, k, seed, in);
      emit(doc, out);
      return 0;
    }

    if (*test) {
      const auto p = mcid::io::matrix_from_json(in.load(reference, "reference"));
      const auto t = mcid::io::trajectory_from_json(in.load(trajectory, "trajectory"));
      mcid::TestConfig cfg;
      cfg.eps = eps;
      cfg.seed = seed;
      cfg.constants = k;
      cfg.lazify = lazify == "assume" ? mcid::LazifyMode::assume : mcid::LazifyMode::emulate;
      const auto r = mcid::identity_test(p, t, cfg);
      auto doc = mcid::io::to_json(r);
      doc["manifest"] = manifest(*test, k, seed, in);
      emit(doc, report);
      if (!report.empty()) std::cout << (r.verdict == 0 ? "accept" : "reject") << "\n";
      return r.verdict == 0 ? 0 : 1;
    }

    if (*props) {
      const auto r = mcid::property_suite(seed, pairs);
      auto doc = mcid::io::to_json(r);
      doc["manifest"] = manifest(*props, k, seed, in);
      emit(doc, out);
      return 0;
    }
  } catch (const mcid::Error& e) {
    std::cerr << "mcid: " << mcid::to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == mcid::Errc::certification_failed ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "mcid: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
