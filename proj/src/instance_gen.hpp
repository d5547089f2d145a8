#pragma once

// Deterministic instance generation shared by the suite runner and the
// ensemble writer. Defined in suite.cpp.

#include <cstdint>
#include <string>

#include "petzlab/states.hpp"

namespace petzlab {
namespace gen {

// FNV-1a over (tag, dim, index); feeds the per-instance rng stream
std::uint64_t stream_key(const std::string& tag, int dim, int index);

// full-rank state with eigenvalues bounded away from zero
DensityMatrix faithful_state(int d, SplitRng& rng);
DensityMatrix diagonal_state(int d, SplitRng& rng);

std::vector<int> pinch_blocks(int d);

struct ChannelPick {
  QuantumChannel ch;
  std::string kind;
};

int channel_variant_count();
ChannelPick channel_variant(int d, int variant, SplitRng& rng);

// (rho, eta, phi) triples for which the transpose-channel recovery is exact
struct SufficientInstance {
  DensityMatrix rho;
  DensityMatrix eta;
  QuantumChannel phi;
  std::string kind;
};

SufficientInstance sufficient_instance(int d, int flavor, SplitRng& rng);

}  // namespace gen
}  // namespace petzlab
