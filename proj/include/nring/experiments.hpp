#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nring/report_io.hpp"

namespace nring {

// Flat JSON config for the experiment runner. Unknown keys and keys the
// chosen experiment does not consume are rejected (config_error), so a
// typo cannot silently fall back to a default.
struct experiment_config {
  std::string experiment;
  std::optional<std::string> algebra;  // path to a structure-constant file
  std::optional<double> eps;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::optional<int> m_max;
  std::optional<double> tol;
  std::optional<double> grid_radius;
  std::optional<int> lattice_extent;
  std::optional<std::size_t> random_points;
  std::optional<std::size_t> tuple_count;
  std::optional<int> oracle_extent;
  std::optional<int> profile_m_max;
  std::string format = "json";
  std::optional<std::string> out;
  bool with_timestamp = true;
};

experiment_config parse_config_text(const std::string& text);
experiment_config parse_config_file(const std::string& path);

struct experiment_entry {
  std::string name;
  std::string summary;
};

const std::vector<experiment_entry>& experiment_catalog();

struct experiment_result {
  ojson report;           // full document
  std::string rendered;   // serialized per config.format
  bool all_satisfied = false;
};

experiment_result run_experiment(const experiment_config& cfg);

// The map an experiment puts under test, for tracing the direct method
// at chosen points. Experiments without a single canonical map reject.
map_spec experiment_map(const experiment_config& cfg);

}  // namespace nring
