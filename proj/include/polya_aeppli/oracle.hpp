#ifndef POLYA_AEPPLI_ORACLE_HPP
#define POLYA_AEPPLI_ORACLE_HPP

// Brute-force reference values for testing the log-space kernel.
// Nothing here is used by the production path.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "polya_aeppli/params.hpp"

namespace polya_aeppli::oracle {

/// 50 significant decimal digits; exponent range wide enough that e^{-lambda}
/// never underflows for any representable lambda.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

/// Largest x accepted by direct_pmf and the Poisson references.
inline constexpr std::size_t kMaxDirectX = 4096;

/// Largest lambda for which the linear-space recurrence is attempted;
/// beyond it e^{-lambda} is within a few orders of the double underflow limit.
inline constexpr double kMaxEvensLambda = 700.0;

/// Argument outside an oracle's documented domain.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class Method { kDirectSum, kEvensRecurrence, kPoissonReference };

struct OracleResult {
  std::size_t x;
  HighPrecision value;
  Method method;
};

/// e^{-lambda} sum_{n=1}^{x} lambda^n/n! C(x-1, n-1) p^{x-n} (1-p)^n, or
/// e^{-lambda} at x = 0, summed term by term in HighPrecision.
HighPrecision direct_pmf(std::size_t x, const DistParams& params);

/// Linear-space three-term recurrence
///   (x+1) P(x+1) = [lambda(1-p) + 2px] P(x) - p^2 (x-1) P(x-1)
/// from P(0) = e^{-lambda}, P(1) = lambda(1-p) e^{-lambda}, in double.
/// Loses everything once e^{-lambda} underflows, so lambda > kMaxEvensLambda
/// throws RangeError.
std::vector<double> evens_pmf_table(const DistParams& params, std::size_t xmax);

/// Poisson(lambda) mass at x.
HighPrecision poisson_reference(std::size_t x, double lambda);

/// P(N <= x) for N ~ Poisson(lambda), by summing the mass from 0.
HighPrecision poisson_lower_cdf(std::size_t x, double lambda);

/// P(N > x) for N ~ Poisson(lambda), summing upward from x + 1 until the
/// terms no longer affect the result.
HighPrecision poisson_upper_tail(std::size_t x, double lambda);

/// Dispatches to one of the oracles above. kPoissonReference requires prob = 0;
/// kEvensRecurrence builds a table to x and reports its last entry.
OracleResult reference_pmf(Method method, std::size_t x, const DistParams& params);

}  // namespace polya_aeppli::oracle

#endif  // POLYA_AEPPLI_ORACLE_HPP
