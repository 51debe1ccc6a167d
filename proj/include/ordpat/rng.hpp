#pragma once

#include <cstdint>

namespace ordpat {

// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double inverse_normal_cdf(double p);

// SplitMix64: the project-wide generator. The algorithm is fixed so that
// (seed, draw index) -> output is reproducible byte-for-byte across runs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an exact 0 or 1.
  double next_double() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() { return inverse_normal_cdf(next_double()); }

 private:
  std::uint64_t state_;
};

// Avalanche finalizer used for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, stream, index), e.g.
// (experiment seed, configuration tag, replicate number). Pure function;
// replicates can be generated in any order or in parallel.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t h = mix64(master ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  return mix64(h ^ (0xC2B2AE3D27D4EB4Full * (index + 1)));
}

}  // namespace ordpat
