#ifndef POLYA_AEPPLI_CHECK_HPP
#define POLYA_AEPPLI_CHECK_HPP

// Invariant suite comparing the library against the brute-force oracles.
// Run by `polya-aeppli check` and by the acceptance tests.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polya_aeppli/params.hpp"

namespace polya_aeppli::check {

inline constexpr std::array<double, 4> kLambdaGrid{0.5, 2.0, 8.0, 20.0};
inline constexpr std::array<double, 4> kProbGrid{0.0, 0.1, 0.5, 0.9};

/// Fixed seeds used wherever a check draws random variates.
inline constexpr std::array<std::uint64_t, 3> kSeeds{20130611, 4000405, 8152};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool all_passed() const;
};

/// Every (lambda, prob) pair of the test grid.
std::vector<DistParams> parameter_grid();

/// floor(mu + k sigma).
std::size_t upper_reach(const DistParams& params, double k);

/// Standard error of the sample variance of n draws, from the fourth
/// central moment of the distribution (via its cumulants).
double sample_variance_standard_error(const DistParams& params, std::size_t n);

/// Fourth central moment from the cumulants lambda E[Y^r] of the compound sum.
double fourth_central_moment(const DistParams& params);

struct ChiSquaredResult {
  double statistic = 0.0;
  double critical = 0.0;
  int bins = 0;
  bool passed() const { return statistic <= critical; }
};

/// Pearson goodness of fit of a sample against pmf(), bins merged so that
/// every expected count is at least 5, at the given significance level.
ChiSquaredResult chi_squared_fit(const std::vector<std::uint64_t>& sample,
                                 const DistParams& params, double significance);

CheckResult oracle_equivalence();
CheckResult oracle_mutual_agreement();
CheckResult oracle_normalization();
CheckResult evens_recurrence_residual();
CheckResult normalization();
CheckResult complementarity();
CheckResult monotonicity();
CheckResult poisson_reduction();
CheckResult log_consistency();
CheckResult tail_side_consistency();
CheckResult batch_invariance();
CheckResult moment_round_trip();
CheckResult quantile_generalized_inverse();
CheckResult rng_determinism();
CheckResult rng_distribution();

/// All of the checks above, in order, each timed.
CheckReport run_property_suite();

/// Runs one check body and times it.
CheckResult timed(const std::string& name, const std::function<CheckResult()>& body);

}  // namespace polya_aeppli::check

#endif  // POLYA_AEPPLI_CHECK_HPP
