#pragma once

#include <string>

#include "json.hpp"
#include "petzlab/states.hpp"
#include "petzlab/suite.hpp"

namespace petzlab {

using Json = nlohmann::ordered_json;

// Matrix files: {"dim": n, "re": [[..]], "im": [[..]]}, dim capped at 64.
// Rectangular blocks (Kraus operators) use {"rows", "cols", "re", "im"}.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// Channel files: {"d_in", "d_out", "kraus": [matrix, ...]}
Json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const Json& j);

// file helpers; parse and I/O problems surface as std::runtime_error
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);
Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);
QuantumChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const QuantumChannel& ch);

// Suite reports. JSON nests one object per check; CSV flattens one row per
// (check, instance). Wall times are stamped only when config.timings is set,
// keeping default reports byte-identical across runs.
Json report_to_json(const SuiteConfig& config, const SuiteResult& result);
std::string report_to_csv(const SuiteConfig& config, const SuiteResult& result);
void write_report(const SuiteConfig& config, const SuiteResult& result);

// Ensemble generation descriptor:
// {"dim", "count", "seed", "state_kind", "channel_kind", "delta"}
struct EnsembleDescriptor {
  int dim = 2;
  int count = 1;
  std::uint64_t seed = 42;
  std::string state_kind = "mixed";      // mixed | pure | near_degenerate | comparable
  std::string channel_kind = "cycle";    // cycle | depolarizing | unitary | pinching
                                         // | conditional_expectation | isometry | identity
  double delta = 0.3;                    // comparability constant for "comparable"
};

EnsembleDescriptor descriptor_from_json(const Json& j);
// writes rho_<i>.json / eta_<i>.json / channel_<i>.json per instance
void generate_ensemble(const EnsembleDescriptor& desc, const std::string& out_dir);

}  // namespace petzlab
