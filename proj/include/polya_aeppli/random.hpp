#ifndef POLYA_AEPPLI_RANDOM_HPP
#define POLYA_AEPPLI_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "polya_aeppli/params.hpp"

namespace polya_aeppli {

/// Sample size and generator seed for one reproducible draw.
struct SampleSpec {
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Owns one 64-bit Mersenne Twister stream. Not thread-safe; use one sampler
/// per thread, each with its own seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// One variate: N ~ Poisson(lambda), then the sum of N shifted geometric
  /// variates on {1, 2, ...} with P(Y = y) = prob^(y-1) (1 - prob).
  std::uint64_t operator()(const DistParams& params);

 private:
  std::mt19937_64 engine_;
};

/// spec.n variates from a fresh Sampler seeded with spec.seed.
std::vector<std::uint64_t> sample(const SampleSpec& spec, const DistParams& params);

}  // namespace polya_aeppli

#endif  // POLYA_AEPPLI_RANDOM_HPP
