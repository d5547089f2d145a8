#include "petzlab/rng.hpp"

#include <cmath>

namespace petzlab {

namespace {

// splitmix64 finalizer (Vigna / Steele et al.)
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitRng::SplitRng(std::uint64_t master_seed, std::uint64_t stream_index) {
  // decorrelate streams by running the finalizer over both keys
  std::uint64_t a = mix64(master_seed);
  std::uint64_t b = mix64(stream_index * 0x9e3779b97f4a7c15ULL + 0x7f4a7c159e3779b9ULL);
  state_ = mix64(a ^ (b + 0x2545f4914f6cdd1dULL));
}

std::uint64_t SplitRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double SplitRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double c = std::cos(2.0 * M_PI * u2);
  double s = std::sin(2.0 * M_PI * u2);
  spare_ = r * s;
  has_spare_ = true;
  return r * c;
}

std::complex<double> SplitRng::cnormal() {
  return {normal(), normal()};
}

}  // namespace petzlab
