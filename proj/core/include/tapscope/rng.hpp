#pragma once

#include <cstdint>

namespace tapscope {

// Deterministic random stream used by all sampling code. The generator is a
// hand-rolled xoshiro256++ seeded through splitmix64, with our own Gaussian
// and binomial samplers on top, so that a given (seed, call order) produces
// identical values on every platform and every rerun. Standard library
// distributions are implementation-defined and would break that contract.
//
// Fan-out scheme: stream i of a global seed is seeded from
// splitmix64(seed XOR (i + 1) * 0x9e3779b97f4a7c15). Streams are keyed by
// case index, so adding cases to a dataset never perturbs the draws of
// earlier cases, and the same case index reuses the same draws across runs
// that share a seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Substream for one generation unit (e.g. one dataset case).
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_unit();

  /// Box-Muller; one value per call, the sine partner is cached.
  double next_gaussian(double mean, double sigma);

  /// Exact binomial draw via mode-centered CDF inversion, O(sqrt(n p)) steps.
  std::int64_t next_binomial(std::int64_t n, double p);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}
