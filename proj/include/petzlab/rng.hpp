#pragma once

#include <complex>
#include <cstdint>

namespace petzlab {

// Splittable deterministic generator. Every ensemble instance owns its own
// stream keyed by (master seed, instance index), so results do not depend on
// evaluation order or thread count. We avoid std::normal_distribution and
// friends on purpose: their output is implementation defined, and reports
// must be reproducible byte for byte.
class SplitRng {
 public:
  SplitRng(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // uniform in [0, 1), 53-bit mantissa
  double uniform();
  double uniform(double lo, double hi);

  // standard normal via Box-Muller
  double normal();

  // complex standard normal, variance 1 per component
  std::complex<double> cnormal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace petzlab
