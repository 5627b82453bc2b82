#include "polya_aeppli/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "polya_aeppli/kernel.hpp"

namespace polya_aeppli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Largest argument converted to a table index; anything beyond cannot be
// tabulated on any real machine.
constexpr double kMaxIndexArgument = 0x1p62;

// Quantile search gives up doubling past this table length.
constexpr std::size_t kMaxQuantileBound = std::size_t{1} << 40;

double to_linear(double log_value) {
  const double v = std::exp(log_value);
  return v < std::numeric_limits<double>::min() ? 0.0 : v;
}

double in_scale(double log_value, Scale scale) {
  return scale == Scale::kLog ? log_value : to_linear(log_value);
}

std::size_t to_index(double v) {
  if (v >= kMaxIndexArgument) {
    throw std::length_error("argument too large to tabulate");
  }
  return static_cast<std::size_t>(v);
}

void warn(Diagnostics* diag, const std::string& what, double value) {
  if (diag == nullptr) return;
  std::ostringstream os;
  os.precision(17);
  os << what << value;
  diag->warnings.push_back(os.str());
}

// One batch element after its boundary cases have been settled.
struct Pending {
  std::size_t slot;
  std::size_t index;
};

}  // namespace

std::vector<double> pmf(std::span<const double> x, const DistParams& params, Scale scale,
                        Diagnostics* diag) {
  const double zero = scale == Scale::kLog ? -kInf : 0.0;
  std::vector<double> out(x.size(), zero);
  std::vector<Pending> pending;
  std::size_t top = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (std::isnan(v)) {
      out[i] = kNaN;
    } else if (v < 0.0 || std::isinf(v)) {
      continue;
    } else if (std::floor(v) != v) {
      warn(diag, "pmf: non-integer x has zero mass: x = ", v);
    } else {
      pending.push_back({i, to_index(v)});
      top = std::max(top, pending.back().index);
    }
  }
  if (pending.empty()) return out;

  const auto table = kernel::log_pmf_table(params, top);
  for (const auto& p : pending) {
    out[p.slot] = in_scale(table[p.index], scale);
  }
  return out;
}

std::vector<double> cdf(std::span<const double> q, const DistParams& params, Tail tail,
                        Scale scale) {
  const bool lower = tail == Tail::kLower;
  const double zero = scale == Scale::kLog ? -kInf : 0.0;
  const double one = scale == Scale::kLog ? 0.0 : 1.0;
  std::vector<double> out(q.size());
  std::vector<Pending> pending;
  std::size_t top = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = q[i];
    if (std::isnan(v)) {
      out[i] = kNaN;
    } else if (v < 0.0) {
      out[i] = lower ? zero : one;
    } else if (std::isinf(v)) {
      out[i] = lower ? one : zero;
    } else {
      pending.push_back({i, to_index(std::floor(v))});
      top = std::max(top, pending.back().index);
    }
  }
  if (pending.empty()) return out;

  const std::vector<double> logs =
      lower ? kernel::log_cdf_lower(kernel::log_pmf_table(params, top))
            : detail::log_survival_table(params, top);
  for (const auto& p : pending) {
    out[p.slot] = in_scale(logs[p.index], scale);
  }
  return out;
}

std::vector<double> cdf(const ProbQuery& query, const DistParams& params) {
  return cdf(query.values, params, query.tail, query.scale);
}

std::vector<double> quantile(std::span<const double> pr, const DistParams& params, Tail tail,
                             Scale scale, Diagnostics* diag) {
  const bool lower = tail == Tail::kLower;
  const bool log_scale = scale == Scale::kLog;
  // Probability values meaning "certain" and "impossible" for the given tail.
  const double p_zero = log_scale ? -kInf : 0.0;
  const double p_one = log_scale ? 0.0 : 1.0;

  std::vector<double> out(pr.size(), kNaN);
  std::vector<std::size_t> interior;
  std::optional<double> extreme;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double u = pr[i];
    if (std::isnan(u)) continue;
    if (u > p_one || (!log_scale && u < 0.0)) {
      warn(diag, "quantile: probability out of range: ", u);
      continue;
    }
    if (u == p_zero) {
      out[i] = lower ? 0.0 : kInf;
    } else if (u == p_one) {
      out[i] = lower ? kInf : 0.0;
    } else {
      interior.push_back(i);
      extreme = !extreme ? u : (lower ? std::max(*extreme, u) : std::min(*extreme, u));
    }
  }
  if (interior.empty()) return out;

  // x satisfies the element u once the tail probability at x has reached it.
  auto satisfied = [&](double log_tail_value, double u) {
    const double v = in_scale(log_tail_value, scale);
    return lower ? v >= u : v <= u;
  };

  std::size_t bound = 0;
  if (!params.is_point_mass()) {
    const Moments m = moments(params);
    const double log_extreme = log_scale ? *extreme : std::log(*extreme);
    const double z = detail::normal_quantile_from_log(log_extreme, tail);
    const double guess =
        detail::wilson_hilferty_gamma_quantile(m.mu, m.sigma2, z) + std::sqrt(m.sigma2);
    bound = std::isfinite(guess) && guess > 0.0 ? to_index(std::ceil(guess)) : 0;
  }

  // Verify the bound covers the most extreme element; double it until it does.
  // A lower-tail table whose last entry stops changing over a whole doubling
  // has saturated, and elements it never reaches have no finite quantile.
  std::vector<double> logs;
  std::optional<double> previous_end;
  for (;;) {
    logs = lower ? kernel::log_cdf_lower(kernel::log_pmf_table(params, bound))
                 : detail::log_survival_table(params, bound);
    if (satisfied(logs.back(), *extreme)) break;
    if (lower && previous_end && *previous_end == logs.back()) break;
    if (bound >= kMaxQuantileBound) {
      throw NumericalError("quantile search bound exceeded the tabulation limit for " +
                           to_string(params));
    }
    previous_end = logs.back();
    bound = 2 * bound + 1;
  }

  for (const std::size_t slot : interior) {
    const double u = pr[slot];
    const auto it = std::partition_point(logs.begin(), logs.end(),
                                         [&](double v) { return !satisfied(v, u); });
    out[slot] = it == logs.end() ? kInf : static_cast<double>(it - logs.begin());
  }
  return out;
}

std::vector<double> quantile(const ProbQuery& query, const DistParams& params,
                             Diagnostics* diag) {
  return quantile(query.values, params, query.tail, query.scale, diag);
}

namespace detail {

double normal_quantile_from_log(double log_p, Tail tail) {
  if (std::isnan(log_p) || log_p > 0.0) return kNaN;
  const bool lower = tail == Tail::kLower;
  if (log_p == -kInf) return lower ? -kInf : kInf;
  if (log_p == 0.0) return lower ? kInf : -kInf;

  const double p_lower = lower ? std::exp(log_p) : -std::expm1(log_p);
  const double q = p_lower - 0.5;
  double val;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    val = q *
          (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                67265.770927008700853) * r + 45921.953931549871457) * r +
              13731.693765509461125) * r + 1971.5909503065514427) * r +
            133.14166789178437745) * r + 3.387132872796366608) /
          (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                39307.89580009271061) * r + 21213.794301586595867) * r +
              5394.1960214247511077) * r + 687.1870074920579083) * r +
            42.313330701600911252) * r + 1.0);
    return val;
  }

  // log of min(p, 1 - p), taken from the input directly when it is the
  // smaller side so that extreme log-probabilities keep full precision.
  const bool given_is_small = lower == (q < 0.0);
  const double log_small = given_is_small ? log_p : std::log(-std::expm1(log_p));
  double r = std::sqrt(-log_small);
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + .0227238449892691845833) * r +
                .24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                .0151986665636164571966) * r + .14810397642748007459) * r +
              .68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                .0012426609473880784386) * r + .026532189526576123093) * r +
              .29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              .0148753612908506148525) * r + .13692988092273580531) * r +
            .59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double wilson_hilferty_gamma_quantile(double mean, double variance, double z) {
  // Shape k = mean^2 / variance; the cube root of a gamma variate is close
  // to normal with mean 1 - 1/(9k) and variance 1/(9k) (after scaling).
  const double c = variance / (9.0 * mean * mean);
  const double t = 1.0 - c + z * std::sqrt(c);
  return t <= 0.0 ? 0.0 : mean * t * t * t;
}

std::vector<std::size_t> survival_anchors(const DistParams& params, std::size_t upto) {
  const Moments m = params.is_point_mass() ? Moments{0.0, 0.0} : moments(params);
  const double first = std::max(63.0, std::ceil(m.mu));
  const double stride = std::max(64.0, std::ceil(std::sqrt(m.sigma2)));
  std::vector<std::size_t> anchors;
  double span = 0.0;
  for (;;) {
    const double anchor = first + stride * span;
    if (anchor >= kMaxIndexArgument) {
      throw std::length_error("survival table too long to tabulate");
    }
    anchors.push_back(static_cast<std::size_t>(anchor));
    if (anchors.back() >= upto) return anchors;
    span = 2.0 * span + 1.0;
  }
}

std::vector<double> log_survival_table(const DistParams& params, std::size_t upto) {
  const auto anchors = survival_anchors(params, upto);
  const auto table = kernel::log_pmf_table(params, anchors.back());
  std::vector<double> h(table.size());
  for (std::size_t j = anchors.size(); j-- > 0;) {
    const std::size_t top = anchors[j];
    const std::size_t bottom = j == 0 ? 0 : anchors[j - 1] + 1;
    h[top] = kernel::log_tail_init(table, top);
    for (std::size_t i = top; i > bottom; --i) {
      h[i - 1] = std::min(0.0, kernel::log_add_exp(h[i], table[i]));
    }
  }
  return h;
}

}  // namespace detail
}  // namespace polya_aeppli
