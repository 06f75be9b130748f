#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nring/experiments.hpp"

namespace {

// Exit codes: 0 all bounds satisfied / converged, 1 a bound failed or a
// run diverged, 2 bad config or bad command line.

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw nring::config_error("cannot open output file " + out_path);
  out << text;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw nring::config_error("bad coordinate '" + item + "' in point");
    }
  }
  if (coords.empty()) throw nring::config_error("empty point");
  return coords;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability toolkit for approximate ring homomorphisms and "
               "derivations on finite-dimensional normed algebras"};
  app.require_subcommand(1);

  // run
  std::string run_config;
  std::string run_format, run_out;
  bool run_no_timestamp = false;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", run_config, "path to the config file")->required();
  auto* run_format_opt =
      run->add_option("--format", run_format, "json or csv")
          ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", run_out, "write the report to this file");
  run->add_flag("--no-timestamp", run_no_timestamp,
                "omit the generated_at field (reproducible output)");
  auto* run_seed_opt =
      run->add_option("--seed", run_seed, "override the experiment seed");

  // list
  auto* list = app.add_subcommand("list", "list the built-in experiments");

  // counterexample
  std::string ce_name;
  std::string ce_format = "json", ce_out;
  bool ce_no_timestamp = false;
  auto* ce = app.add_subcommand("counterexample",
                                "run one of the counterexample experiments");
  ce->add_option("name", ce_name, "luminet or nilpotent")
      ->required()
      ->check(CLI::IsMember({"luminet", "nilpotent"}));
  ce->add_option("--format", ce_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  ce->add_option("--out", ce_out, "write the report to this file");
  ce->add_flag("--no-timestamp", ce_no_timestamp,
               "omit the generated_at field");

  // limit
  std::string lim_experiment = "hyers-hom";
  std::string lim_point;
  std::string lim_kind = "dyadic";
  int lim_s = +1;
  int lim_m_max = 40;
  double lim_tol = 1e-9;
  std::string lim_format = "json", lim_out;
  double lim_eps = -1.0;
  double lim_p = -1.0;
  std::uint64_t lim_seed = 0;
  auto* lim = app.add_subcommand(
      "limit", "trace the direct method for an experiment's map at a point");
  lim->add_option("point", lim_point,
                  "comma-separated coordinates in the map's domain")
      ->required();
  lim->add_option("--experiment", lim_experiment,
                  "which experiment's map to trace");
  lim->add_option("--kind", lim_kind, "dyadic or integer")
      ->check(CLI::IsMember({"dyadic", "integer"}));
  lim->add_option("--s", lim_s, "schedule direction, +1 or -1")
      ->check(CLI::IsMember({-1, 1}));
  lim->add_option("--m-max", lim_m_max, "number of iterates");
  lim->add_option("--tol", lim_tol, "step tolerance");
  lim->add_option("--format", lim_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  lim->add_option("--out", lim_out, "write the trace to this file");
  auto* lim_eps_opt = lim->add_option("--eps", lim_eps, "noise amplitude");
  auto* lim_p_opt = lim->add_option("--p", lim_p, "noise exponent");
  auto* lim_seed_opt = lim->add_option("--seed", lim_seed, "noise seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*list) {
      for (const auto& entry : nring::experiment_catalog())
        std::cout << entry.name << "  -  " << entry.summary << "\n";
      return 0;
    }

    if (*run) {
      auto cfg = nring::parse_config_file(run_config);
      if (*run_format_opt) cfg.format = run_format;
      if (!run_out.empty()) cfg.out = run_out;
      if (run_no_timestamp) cfg.with_timestamp = false;
      if (*run_seed_opt) cfg.seed = run_seed;
      const auto result = nring::run_experiment(cfg);
      emit(result.rendered, cfg.out.value_or(""));
      return result.all_satisfied ? 0 : 1;
    }

    if (*ce) {
      nring::experiment_config cfg;
      cfg.experiment = ce_name;
      cfg.format = ce_format;
      if (ce_no_timestamp) cfg.with_timestamp = false;
      const auto result = nring::run_experiment(cfg);
      emit(result.rendered, ce_out);
      return result.all_satisfied ? 0 : 1;
    }

    // limit
    nring::experiment_config mcfg;
    mcfg.experiment = lim_experiment;
    if (*lim_eps_opt) mcfg.eps = lim_eps;
    if (*lim_p_opt) mcfg.p = lim_p;
    if (*lim_seed_opt) mcfg.seed = lim_seed;
    const auto f = nring::experiment_map(mcfg);
    const auto coords = parse_point(lim_point);
    if (coords.size() != f.domain()->dim())
      throw nring::config_error(
          "point has " + std::to_string(coords.size()) +
          " coordinates, the domain needs " +
          std::to_string(f.domain()->dim()));
    nring::schedule sched;
    sched.kind = lim_kind == "integer" ? nring::schedule_kind::integer
                                       : nring::schedule_kind::dyadic;
    sched.s = lim_s;
    sched.m_max = lim_m_max;
    sched.tol = lim_tol;
    const auto trace =
        nring::direct_limit(f, f.domain()->make_element(coords), sched);
    if (lim_format == "csv") {
      emit(nring::trace_csv(trace), lim_out);
    } else {
      emit(nring::to_json(trace).dump(2) + "\n", lim_out);
    }
    std::cerr << "verdict: " << nring::to_string(trace.verdict) << "\n";
    return trace.verdict == nring::verdict_kind::converged ? 0 : 1;
  } catch (const nring::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nring::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
