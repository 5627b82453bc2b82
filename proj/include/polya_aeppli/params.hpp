#ifndef POLYA_AEPPLI_PARAMS_HPP
#define POLYA_AEPPLI_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace polya_aeppli {

/// Raised for parameter values outside the distribution's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to produce a trustworthy value
/// (for example a series that does not converge within its iteration cap).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Parameters (lambda, prob) of one Polya-Aeppli distribution.
 *
 * X = Y_1 + ... + Y_N with N ~ Poisson(lambda) and Y_i shifted geometric on
 * {1, 2, ...} with P(Y = y) = prob^(y-1) (1 - prob).
 *
 * lambda must be finite and >= 0 (lambda = 0 is the point mass at zero);
 * prob must lie in [0, 1). prob = 0 is the Poisson(lambda) distribution.
 */
class DistParams {
 public:
  DistParams(double lambda, double prob);

  double lambda() const noexcept { return lambda_; }
  double prob() const noexcept { return prob_; }

  bool is_poisson() const noexcept { return prob_ == 0.0; }
  bool is_point_mass() const noexcept { return lambda_ == 0.0; }

  friend bool operator==(const DistParams&, const DistParams&) = default;

 private:
  double lambda_;
  double prob_;
};

/// Mean and variance. Requires mu > 0 and sigma2 >= mu (no underdispersion).
struct Moments {
  double mu;
  double sigma2;
};

/// Mean and variance of the distribution.
Moments moments(const DistParams& params);

/// Inverts moments(): lambda = 2 mu^2 / (sigma2 + mu), p = (sigma2 - mu) / (sigma2 + mu).
/// Throws DomainError when sigma2 < mu or mu is not a positive finite value.
DistParams params_from_moments(const Moments& m);

std::string to_string(const DistParams& params);

}  // namespace polya_aeppli

#endif  // POLYA_AEPPLI_PARAMS_HPP
