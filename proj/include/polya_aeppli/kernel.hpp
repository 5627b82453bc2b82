#ifndef POLYA_AEPPLI_KERNEL_HPP
#define POLYA_AEPPLI_KERNEL_HPP

// Log-space recurrences for the Polya-Aeppli mass and distribution functions.
//
// All quantities are natural logarithms. Tables are built in strict index
// order, so an entry at x never depends on how far the table extends.

#include <cstddef>
#include <span>
#include <vector>

#include "polya_aeppli/params.hpp"

namespace polya_aeppli::kernel {

/// Stops the tail series after this many terms and reports NumericalError.
inline constexpr std::size_t kTailSeriesMaxTerms = 1'000'000;

/// Consecutive negligible terms required before the tail series stops.
inline constexpr int kTailSeriesQuietTerms = 3;

/// l(x) = log P(X = x) for x = 0..xmax.
class LogPmfTable {
 public:
  LogPmfTable(DistParams params, std::vector<double> logp);

  const DistParams& params() const noexcept { return params_; }
  std::size_t xmax() const noexcept { return logp_.size() - 1; }
  std::size_t size() const noexcept { return logp_.size(); }
  double operator[](std::size_t x) const { return logp_[x]; }
  std::span<const double> values() const noexcept { return logp_; }

 private:
  DistParams params_;
  std::vector<double> logp_;
};

/// Log lower tail g(x) = log P(X <= x) and log upper tail h(x) = log P(X > x)
/// over the full index range of one LogPmfTable.
struct TailTables {
  std::vector<double> g;
  std::vector<double> h;
};

/// log(e^a + e^b), exact for infinite arguments.
double log_add_exp(double a, double b) noexcept;

/// Builds l(0..xmax). l(0) = -lambda and
///   l(x+1) = l(x) + log{[lambda(1-p) + 2px - p^2 (x-1) e^{l(x-1) - l(x)}] / (x+1)}.
/// p = 0 uses the Poisson step l(x+1) = l(x) + log(lambda) - log(x+1).
/// Throws std::length_error when xmax + 1 entries cannot be allocated.
LogPmfTable log_pmf_table(const DistParams& params, std::size_t xmax);

/// g(0..xmax): g(0) = l(0), g(i+1) = g(i) + log(1 + e^{l(i+1) - g(i)}),
/// capped at 0 so that rounding in the summed mass never yields log P > 0.
std::vector<double> log_cdf_lower(const LogPmfTable& table);

/**
 * h(xstart) = log P(X > xstart), summed from the log-pmf recurrence continued
 * upward from xstart:
 *
 *   h(xstart) = l(xstart+1) + log sum_{i > xstart} e^{l(i) - l(xstart+1)}.
 *
 * The sum is rescaled on the fly so that terms growing toward the mode cannot
 * overflow. It stops once kTailSeriesQuietTerms consecutive terms fall below
 * 2^-53 of the running sum. The result depends only on the table entries at
 * xstart-1 and xstart.
 *
 * Throws std::out_of_range if xstart > table.xmax() and NumericalError if
 * the series has not converged after kTailSeriesMaxTerms terms.
 */
double log_tail_init(const LogPmfTable& table, std::size_t xstart);

/// h(0..xstart) by the downward step h(i-1) = h(i) + log(1 + e^{l(i) - h(i)}),
/// seeded with h(xstart) = h_init and capped at 0 like log_cdf_lower. Throws std::out_of_range if xstart > table.xmax().
std::vector<double> log_cdf_upper(const LogPmfTable& table, double h_init, std::size_t xstart);

/// g and h over the whole table, with h seeded at table.xmax().
TailTables tail_tables(const LogPmfTable& table);

}  // namespace polya_aeppli::kernel

#endif  // POLYA_AEPPLI_KERNEL_HPP
