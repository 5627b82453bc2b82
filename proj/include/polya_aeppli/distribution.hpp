#ifndef POLYA_AEPPLI_DISTRIBUTION_HPP
#define POLYA_AEPPLI_DISTRIBUTION_HPP

// Mass, distribution and quantile functions of the Polya-Aeppli distribution.
//
// Every function takes one parameter pair and a batch of arguments, and is
// evaluated element-wise: NaN arguments give NaN results and never abort the
// batch. One log-pmf table is built per call, out to the largest finite
// argument in the batch. Results for an element do not depend on the other
// elements of the batch.

#include <span>
#include <string>
#include <vector>

#include "polya_aeppli/params.hpp"

namespace polya_aeppli {

enum class Tail { kLower, kUpper };   // P(X <= x) or P(X > x)
enum class Scale { kLinear, kLog };   // probabilities as-is or as natural logs

/// Collects non-fatal diagnostics (non-integer arguments, out-of-range
/// probabilities) from a batch call.
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// A batch of quantiles (for cdf) or probabilities (for quantile) together
/// with the output convention.
struct ProbQuery {
  std::vector<double> values;
  Tail tail = Tail::kLower;
  Scale scale = Scale::kLinear;
};

/// P(X = x), or log P(X = x) with Scale::kLog.
/// Negative, infinite and non-integer x have zero mass; non-integer x also
/// adds a warning to `diag`.
std::vector<double> pmf(std::span<const double> x, const DistParams& params,
                        Scale scale = Scale::kLinear, Diagnostics* diag = nullptr);

/// P(X <= floor(q)) or P(X > floor(q)).
/// q < 0 gives 0 (lower) / 1 (upper); q = +inf gives 1 (lower) / 0 (upper).
std::vector<double> cdf(std::span<const double> q, const DistParams& params,
                        Tail tail = Tail::kLower, Scale scale = Scale::kLinear);
std::vector<double> cdf(const ProbQuery& query, const DistParams& params);

/**
 * Generalized inverse Q(u) = min{x >= 0 : F(x) >= u}.
 *
 * With Tail::kUpper the input s is an upper-tail probability and the result
 * is min{x : P(X > x) <= s}; comparisons are made directly against the same
 * log tables cdf() returns, so cdf(quantile(u)) >= u holds exactly in double
 * arithmetic. Q(0) = 0 and Q(1) = +inf (lower tail). Returned values are
 * whole numbers stored as double, or +inf. Probabilities outside [0, 1]
 * (log-probabilities above 0) give NaN and a warning.
 */
std::vector<double> quantile(std::span<const double> pr, const DistParams& params,
                             Tail tail = Tail::kLower, Scale scale = Scale::kLinear,
                             Diagnostics* diag = nullptr);
std::vector<double> quantile(const ProbQuery& query, const DistParams& params,
                             Diagnostics* diag = nullptr);

namespace detail {

/// Standard normal quantile (Wichura AS 241) of a probability given as its
/// natural log; `tail` says which side the probability measures.
double normal_quantile_from_log(double log_p, Tail tail);

/// Wilson-Hilferty approximation to the quantile of the gamma distribution
/// with the given mean and variance, at the normal deviate z.
double wilson_hilferty_gamma_quantile(double mean, double variance, double z);

/// log P(X > x) for x = 0..upto (the vector may extend further).
/// The downward recurrence is restarted from a fresh tail series at fixed
/// anchor points that depend only on the parameters, so each entry is the
/// same whatever `upto` is.
std::vector<double> log_survival_table(const DistParams& params, std::size_t upto);

/// Anchor points used by log_survival_table, in increasing order, up to
/// the first one at or beyond `upto`.
std::vector<std::size_t> survival_anchors(const DistParams& params, std::size_t upto);

}  // namespace detail
}  // namespace polya_aeppli

#endif  // POLYA_AEPPLI_DISTRIBUTION_HPP
