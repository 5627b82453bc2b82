#include "polya_aeppli/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace polya_aeppli::kernel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailRelativeCutoff = 0x1p-53;

// Steps l(x) -> l(x+1). The running log-pmf is carried as an unevaluated
// sum hi + lo so that rounding in the large-magnitude entries near x = 0
// (l(0) = -lambda) does not accumulate along the table.
class LogPmfStepper {
 public:
  LogPmfStepper(const DistParams& params, std::size_t x, double prev, double cur)
      : lambda_(params.lambda()),
        prob_(params.prob()),
        first_ratio_(params.lambda() * (1.0 - params.prob())),
        x_(x),
        prev_(prev),
        hi_(cur) {}

  std::size_t position() const noexcept { return x_; }

  double advance() {
    const double x = static_cast<double>(x_);
    double step;
    if (prob_ == 0.0) {
      step = std::log(lambda_ / (x + 1.0));
    } else if (x_ == 0) {
      step = std::log(first_ratio_);
    } else {
      const double numer =
          first_ratio_ + 2.0 * prob_ * x - prob_ * prob_ * (x - 1.0) * std::exp(prev_ - hi_);
      if (!(numer > 0.0)) {
        throw NumericalError("log-pmf recurrence lost positivity at x = " + std::to_string(x_));
      }
      step = std::log(numer / (x + 1.0));
    }
    prev_ = hi_;
    accumulate(step);
    ++x_;
    return hi_;
  }

 private:
  void accumulate(double step) noexcept {
    const double s = hi_ + step;
    const double bb = s - hi_;
    const double err = (hi_ - (s - bb)) + (step - bb);
    lo_ += err;
    const double t = s + lo_;
    lo_ -= t - s;
    hi_ = t;
  }

  double lambda_;
  double prob_;
  double first_ratio_;
  std::size_t x_;
  double prev_;
  double hi_;
  double lo_ = 0.0;
};

void require_index(const LogPmfTable& table, std::size_t x, const char* what) {
  if (x > table.xmax()) {
    throw std::out_of_range(std::string(what) + ": index " + std::to_string(x) +
                            " beyond table end " + std::to_string(table.xmax()));
  }
}

}  // namespace

LogPmfTable::LogPmfTable(DistParams params, std::vector<double> logp)
    : params_(params), logp_(std::move(logp)) {
  if (logp_.empty()) {
    throw std::invalid_argument("log-pmf table must hold at least l(0)");
  }
}

double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (a == -kInf || a == kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

LogPmfTable log_pmf_table(const DistParams& params, std::size_t xmax) {
  std::vector<double> logp;
  if (xmax >= logp.max_size()) {
    throw std::length_error("log-pmf table length exceeds the addressable range");
  }
  logp.reserve(xmax + 1);

  if (params.is_point_mass()) {
    logp.push_back(0.0);
    logp.resize(xmax + 1, -kInf);
    return LogPmfTable(params, std::move(logp));
  }

  logp.push_back(-params.lambda());
  LogPmfStepper stepper(params, 0, -kInf, logp.front());
  while (logp.size() <= xmax) {
    logp.push_back(stepper.advance());
  }
  return LogPmfTable(params, std::move(logp));
}

std::vector<double> log_cdf_lower(const LogPmfTable& table) {
  std::vector<double> g(table.size());
  g[0] = table[0];
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    g[i + 1] = std::min(0.0, log_add_exp(g[i], table[i + 1]));
  }
  return g;
}

double log_tail_init(const LogPmfTable& table, std::size_t xstart) {
  require_index(table, xstart, "log_tail_init");
  if (table.params().is_point_mass()) return -kInf;

  const double prev = xstart == 0 ? -kInf : table[xstart - 1];
  LogPmfStepper stepper(table.params(), xstart, prev, table[xstart]);

  // Terms are kept relative to the largest log-pmf seen so far.
  double ref = stepper.advance();
  double sum = 1.0;
  int quiet = 0;
  for (std::size_t n = 1; n < kTailSeriesMaxTerms; ++n) {
    const double l = stepper.advance();
    if (l > ref) {
      sum = sum * std::exp(ref - l) + 1.0;
      ref = l;
      quiet = 0;
      continue;
    }
    const double term = std::exp(l - ref);
    sum += term;
    quiet = term < kTailRelativeCutoff * sum ? quiet + 1 : 0;
    if (quiet == kTailSeriesQuietTerms) {
      return ref + std::log(sum);
    }
  }
  throw NumericalError("upper-tail series did not converge within " +
                       std::to_string(kTailSeriesMaxTerms) + " terms starting at x = " +
                       std::to_string(xstart) + " for " + to_string(table.params()));
}

std::vector<double> log_cdf_upper(const LogPmfTable& table, double h_init, std::size_t xstart) {
  require_index(table, xstart, "log_cdf_upper");
  std::vector<double> h(xstart + 1);
  h[xstart] = h_init;
  for (std::size_t i = xstart; i > 0; --i) {
    h[i - 1] = std::min(0.0, log_add_exp(h[i], table[i]));
  }
  return h;
}

TailTables tail_tables(const LogPmfTable& table) {
  const std::size_t top = table.xmax();
  return {log_cdf_lower(table), log_cdf_upper(table, log_tail_init(table, top), top)};
}

}  // namespace polya_aeppli::kernel
