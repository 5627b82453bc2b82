#include "polya_aeppli/random.hpp"

namespace polya_aeppli {

std::uint64_t Sampler::operator()(const DistParams& params) {
  if (params.is_point_mass()) return 0;
  std::poisson_distribution<std::uint64_t> count(params.lambda());
  const std::uint64_t n = count(engine_);
  if (params.is_poisson()) return n;

  // std::geometric_distribution counts failures before the first success,
  // so each summand is shifted by one.
  std::geometric_distribution<std::uint64_t> failures(1.0 - params.prob());
  std::uint64_t total = n;
  for (std::uint64_t i = 0; i < n; ++i) {
    total += failures(engine_);
  }
  return total;
}

std::vector<std::uint64_t> sample(const SampleSpec& spec, const DistParams& params) {
  Sampler sampler(spec.seed);
  std::vector<std::uint64_t> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    out.push_back(sampler(params));
  }
  return out;
}

}  // namespace polya_aeppli
