#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "petzlab/checks.hpp"

namespace petzlab {

// One deterministic pass over every requested check: instances are keyed by
// (seed, check, dim, index) and regenerate bit-identically, so a report can
// always be traced back to its inputs.
struct SuiteConfig {
  std::vector<std::string> checks{"all"};
  std::vector<int> dims{2, 3, 4};
  int instances_per_dim = 500;
  std::uint64_t seed = 42;
  std::vector<double> p_values;  // empty = per-check default grids
  std::string output_path;       // empty = no report file
  std::string format = "json";   // "json" or "csv"
  int threads = 0;               // 0 = PETZLAB_THREADS, else 1
  bool timings = false;          // stamp wall times into the report
  std::string replay_dir;        // empty = "<output dir>/replay"
};

struct CheckSummary {
  std::string check;
  std::string params;  // JSON echo of the parameter cycles in force
  int instances = 0;
  double min_margin = 0.0;
  double mean_margin = 0.0;
  std::vector<std::string> failures;  // instance ids
  double runtime_ms = 0.0;
  std::vector<GapReport> reports;  // ordered by (dim, index)
};

struct SuiteResult {
  std::vector<CheckSummary> checks;
  std::size_t total_failures = 0;
  double runtime_ms = 0.0;
};

// registered check names in canonical order
const std::vector<std::string>& check_registry();
bool is_registered_check(const std::string& name);

// runs one ensemble instance; every input is regenerated from the key
GapReport run_check_instance(const std::string& check, int dim, int index,
                             std::uint64_t seed,
                             const std::vector<double>& p_values = {});

// JSON blob with the regenerated inputs and parameters of one instance
std::string replay_instance_json(const std::string& check, int dim, int index,
                                 std::uint64_t seed,
                                 const std::vector<double>& p_values = {});

// Runs the configured checks, prints one summary line per check, writes the
// report and failure replays when paths are configured. Throws
// std::invalid_argument on bad config and std::runtime_error on I/O failure.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace petzlab
