#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "polya_aeppli/check.hpp"
#include "polya_aeppli/distribution.hpp"
#include "polya_aeppli/oracle.hpp"
#include "polya_aeppli/random.hpp"

using namespace polya_aeppli;

namespace {

struct SampleMoments {
  double mean;
  double variance;
};

SampleMoments sample_moments(const std::vector<std::uint64_t>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (const auto x : v) mean += static_cast<double>(x);
  mean /= n;
  double ss = 0.0;
  for (const auto x : v) ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace

TEST_CASE("empty sample") {
  CHECK(sample({0, 42}, DistParams(8.0, 0.2)).empty());
}

TEST_CASE("same seed, same variates") {
  const DistParams p(8.0, 0.2);
  CHECK(sample({500, 7}, p) == sample({500, 7}, p));
  CHECK(sample({500, 7}, p) != sample({500, 8}, p));
  // A longer draw extends a shorter one.
  const auto longer = sample({600, 7}, p);
  const auto shorter = sample({500, 7}, p);
  CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST_CASE("point mass and Poisson special cases") {
  const auto zeros = sample({100, 1}, DistParams(0.0, 0.7));
  CHECK(std::all_of(zeros.begin(), zeros.end(), [](auto v) { return v == 0; }));
}

TEST_CASE("figure one sample moments") {
  const DistParams p(8.0, 0.2);
  constexpr std::size_t n = 10'000;
  const double mean_tol = 4.0 * std::sqrt(15.0 / n);
  const double var_tol = 4.0 * check::sample_variance_standard_error(p, n);
  for (const auto seed : check::kSeeds) {
    CAPTURE(seed);
    const auto m = sample_moments(sample({n, seed}, p));
    CHECK(std::fabs(m.mean - 10.0) <= mean_tol);
    CHECK(std::fabs(m.variance - 15.0) <= var_tol);
  }
}

TEST_CASE("moments of a (1, 0.5) sample") {
  const auto m = sample_moments(sample({200'000, 11}, DistParams(1.0, 0.5)));
  CHECK(m.mean == doctest::Approx(2.0).epsilon(0.02));
  CHECK(m.variance == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("Poisson(5) sample against the oracle expected counts") {
  constexpr std::size_t n = 10'000;
  const auto draws = sample({n, check::kSeeds[0]}, DistParams(5.0, 0.0));
  std::vector<double> observed(40, 0.0);
  for (const auto v : draws) observed[std::min<std::uint64_t>(v, 39)] += 1.0;

  // Bins 0..12 individually, 13+ pooled: every expected count is >= 5.
  double chi2 = 0.0;
  oracle::HighPrecision covered = 0;
  for (std::size_t x = 0; x <= 12; ++x) {
    const auto mass = oracle::poisson_reference(x, 5.0);
    covered += mass;
    const double expected = n * static_cast<double>(mass);
    REQUIRE(expected >= 5.0);
    chi2 += (observed[x] - expected) * (observed[x] - expected) / expected;
  }
  const double tail_expected = n * static_cast<double>(1 - covered);
  const double tail_observed = std::accumulate(observed.begin() + 13, observed.end(), 0.0);
  REQUIRE(tail_expected >= 5.0);
  chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;

  boost::math::chi_squared dist(13);
  CHECK(chi2 <= boost::math::quantile(boost::math::complement(dist, 1e-3)));
}

TEST_CASE("chi-squared fit helper accepts own samples and rejects a wrong model") {
  const DistParams p(8.0, 0.2);
  const auto draws = sample({10'000, 5}, p);
  const auto good = check::chi_squared_fit(draws, p, 1e-3);
  CHECK(good.passed());
  CHECK(good.bins > 10);
  CHECK_FALSE(check::chi_squared_fit(draws, DistParams(10.0, 0.0), 1e-3).passed());
}

TEST_CASE("fourth central moment matches the pmf") {
  for (const auto& p : {DistParams(8.0, 0.2), DistParams(2.0, 0.5), DistParams(5.0, 0.0)}) {
    const double mu = moments(p).mu;
    std::vector<double> xs(600);
    std::iota(xs.begin(), xs.end(), 0.0);
    const auto mass = pmf(xs, p);
    double m4 = 0.0;
    for (std::size_t x = 0; x < xs.size(); ++x) m4 += std::pow(xs[x] - mu, 4) * mass[x];
    CHECK(check::fourth_central_moment(p) == doctest::Approx(m4).epsilon(1e-10));
  }
}
