#include "polya_aeppli/params.hpp"

#include <cmath>
#include <sstream>

namespace polya_aeppli {

DistParams::DistParams(double lambda, double prob) : lambda_(lambda), prob_(prob) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("lambda must be a finite non-negative value, got " + std::to_string(lambda));
  }
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw DomainError("prob must lie in [0, 1), got " + std::to_string(prob));
  }
}

Moments moments(const DistParams& params) {
  const double q = 1.0 - params.prob();
  return {params.lambda() / q, params.lambda() * (1.0 + params.prob()) / (q * q)};
}

DistParams params_from_moments(const Moments& m) {
  if (!std::isfinite(m.mu) || m.mu <= 0.0) {
    throw DomainError("mean must be a positive finite value");
  }
  if (!std::isfinite(m.sigma2)) {
    throw DomainError("variance must be finite");
  }
  if (m.sigma2 < m.mu) {
    throw DomainError("variance below the mean (underdispersion) cannot be represented");
  }
  const double denom = m.sigma2 + m.mu;
  return DistParams(2.0 * m.mu * m.mu / denom, (m.sigma2 - m.mu) / denom);
}

std::string to_string(const DistParams& params) {
  std::ostringstream os;
  os.precision(17);
  os << "(lambda=" << params.lambda() << ", prob=" << params.prob() << ")";
  return os.str();
}

}  // namespace polya_aeppli
