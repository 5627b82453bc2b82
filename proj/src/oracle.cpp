#include "polya_aeppli/oracle.hpp"

#include <string>

namespace polya_aeppli::oracle {
namespace {

void require_direct_range(std::size_t x) {
  if (x > kMaxDirectX) {
    throw RangeError("oracle supports x <= " + std::to_string(kMaxDirectX) + ", got " +
                     std::to_string(x));
  }
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !boost::math::isfinite(lambda)) {
    throw RangeError("poisson reference needs a finite non-negative lambda");
  }
}

}  // namespace

HighPrecision direct_pmf(std::size_t x, const DistParams& params) {
  require_direct_range(x);
  const HighPrecision lambda = params.lambda();
  const HighPrecision p = params.prob();
  const HighPrecision q = 1 - p;
  const HighPrecision weight = exp(-lambda);
  if (x == 0) return weight;
  if (params.is_poisson()) return poisson_reference(x, params.lambda());

  // Term n: lambda^n/n! C(x-1, n-1) p^(x-n) q^n; successive terms differ by
  // the factor lambda/(n+1) * (x-n)/n * q/p.
  HighPrecision term = lambda * pow(p, static_cast<int>(x - 1)) * q;
  HighPrecision sum = term;
  for (std::size_t n = 1; n < x; ++n) {
    term *= lambda / (n + 1);
    term *= HighPrecision(x - n) / n;
    term *= q / p;
    sum += term;
  }
  return weight * sum;
}

std::vector<double> evens_pmf_table(const DistParams& params, std::size_t xmax) {
  if (params.lambda() > kMaxEvensLambda) {
    throw RangeError("linear-space recurrence underflows: e^{-lambda} is not representable for " +
                     to_string(params));
  }
  const double lambda = params.lambda();
  const double p = params.prob();
  std::vector<double> pmf(xmax + 1);
  pmf[0] = std::exp(-lambda);
  if (xmax == 0) return pmf;
  pmf[1] = lambda * (1.0 - p) * pmf[0];
  for (std::size_t x = 1; x < xmax; ++x) {
    const double xd = static_cast<double>(x);
    pmf[x + 1] =
        ((lambda * (1.0 - p) + 2.0 * p * xd) * pmf[x] - p * p * (xd - 1.0) * pmf[x - 1]) /
        (xd + 1.0);
  }
  return pmf;
}

HighPrecision poisson_reference(std::size_t x, double lambda) {
  require_direct_range(x);
  require_lambda(lambda);
  HighPrecision term = exp(-HighPrecision(lambda));
  for (std::size_t k = 1; k <= x; ++k) {
    term *= HighPrecision(lambda) / k;
  }
  return term;
}

HighPrecision poisson_lower_cdf(std::size_t x, double lambda) {
  require_direct_range(x);
  require_lambda(lambda);
  HighPrecision term = exp(-HighPrecision(lambda));
  HighPrecision sum = term;
  for (std::size_t k = 1; k <= x; ++k) {
    term *= HighPrecision(lambda) / k;
    sum += term;
  }
  return sum;
}

HighPrecision poisson_upper_tail(std::size_t x, double lambda) {
  require_direct_range(x);
  require_lambda(lambda);
  if (lambda == 0.0) return HighPrecision(0);
  const HighPrecision eps = std::numeric_limits<HighPrecision>::epsilon();
  HighPrecision term = poisson_reference(x, lambda);
  HighPrecision sum = 0;
  for (std::size_t k = x + 1;; ++k) {
    term *= HighPrecision(lambda) / k;
    sum += term;
    // Past the mode the terms shrink geometrically.
    if (k > lambda && term < eps * sum) break;
  }
  return sum;
}

OracleResult reference_pmf(Method method, std::size_t x, const DistParams& params) {
  switch (method) {
    case Method::kDirectSum:
      return {x, direct_pmf(x, params), method};
    case Method::kEvensRecurrence:
      return {x, HighPrecision(evens_pmf_table(params, x).back()), method};
    case Method::kPoissonReference:
      if (!params.is_poisson()) {
        throw RangeError("poisson reference requires prob = 0");
      }
      return {x, poisson_reference(x, params.lambda()), method};
  }
  throw RangeError("unknown oracle method");
}

}  // namespace polya_aeppli::oracle
