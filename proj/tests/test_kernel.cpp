#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "polya_aeppli/kernel.hpp"
#include "polya_aeppli/oracle.hpp"

using namespace polya_aeppli;
using namespace polya_aeppli::kernel;

namespace {

double rel(double value, const oracle::HighPrecision& ref) {
  return static_cast<double>(abs((oracle::HighPrecision(value) - ref) / ref));
}

}  // namespace

TEST_CASE("log_pmf_table start values") {
  const DistParams p(8.0, 0.2);
  CHECK(log_pmf_table(p, 0)[0] == -8.0);
  CHECK(log_pmf_table(p, 0).xmax() == 0);
  const auto t = log_pmf_table(p, 1);
  CHECK(t[1] == doctest::Approx(-8.0 + std::log(6.4)).epsilon(1e-15));
}

TEST_CASE("log_pmf_table matches the direct sum") {
  const DistParams p(2.0, 0.5);
  const auto t = log_pmf_table(p, 5);
  for (std::size_t x = 0; x <= 5; ++x) {
    CAPTURE(x);
    CHECK(rel(std::exp(t[x]), oracle::direct_pmf(x, p)) <= 1e-12);
  }
}

TEST_CASE("prob = 0 reproduces the Poisson log-pmf") {
  const DistParams p(8.0, 0.0);
  const auto t = log_pmf_table(p, 20);
  for (std::size_t x = 0; x <= 20; ++x) {
    CAPTURE(x);
    CHECK(rel(std::exp(t[x]), oracle::poisson_reference(x, 8.0)) <= 1e-12);
  }
}

TEST_CASE("lambda = 0 is a point mass at zero") {
  const DistParams p(0.0, 0.4);
  const auto t = log_pmf_table(p, 10);
  CHECK(t[0] == 0.0);
  for (std::size_t x = 1; x <= 10; ++x) CHECK(t[x] == -INFINITY);
  const auto tails = tail_tables(t);
  for (std::size_t x = 0; x <= 10; ++x) {
    CHECK(tails.g[x] == 0.0);
    CHECK(tails.h[x] == -INFINITY);
  }
}

TEST_CASE("table entries do not depend on the table length") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> lam(0.0, 40.0);
  std::uniform_real_distribution<double> pr(0.0, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const DistParams p(lam(gen), trial % 5 == 0 ? 0.0 : pr(gen));
    const auto short_table = log_pmf_table(p, 37);
    const auto long_table = log_pmf_table(p, 400);
    for (std::size_t x = 0; x <= 37; ++x) {
      REQUIRE(std::bit_cast<std::uint64_t>(short_table[x]) ==
              std::bit_cast<std::uint64_t>(long_table[x]));
    }
  }
}

TEST_CASE("random parameters agree with the oracle and give monotone tails") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> lam(0.01, 30.0);
  std::uniform_real_distribution<double> pr(0.0, 0.95);
  for (int trial = 0; trial < 40; ++trial) {
    const DistParams p(lam(gen), pr(gen));
    CAPTURE(to_string(p));
    const auto t = log_pmf_table(p, 40);
    for (std::size_t x = 0; x <= 40; ++x) {
      CHECK(rel(std::exp(t[x]), oracle::direct_pmf(x, p)) <= 1e-10);
    }
    const auto tails = tail_tables(t);
    for (std::size_t x = 1; x <= 40; ++x) {
      CHECK(tails.g[x] >= tails.g[x - 1]);
      CHECK(tails.h[x] <= tails.h[x - 1]);
    }
  }
}

TEST_CASE("log_cdf_lower") {
  SUBCASE("starts at -lambda and climbs to 0") {
    const auto g = log_cdf_lower(log_pmf_table(DistParams(8.0, 0.2), 400));
    CHECK(g[0] == -8.0);
    for (std::size_t x = 1; x < g.size(); ++x) CHECK(g[x] >= g[x - 1]);
    CHECK(g.back() <= 0.0);
    CHECK(g.back() > -1e-15);
  }
  SUBCASE("sum of the direct pmf") {
    const DistParams p(2.0, 0.5);
    const auto g = log_cdf_lower(log_pmf_table(p, 10));
    oracle::HighPrecision sum = 0;
    for (std::size_t x = 0; x <= 10; ++x) sum += oracle::direct_pmf(x, p);
    CHECK(rel(std::exp(g[10]), sum) <= 1e-12);
    // Frozen from an independent 50-digit evaluation.
    CHECK(std::exp(g[10]) == doctest::Approx(0.94645959075556905644).epsilon(1e-12));
  }
}

TEST_CASE("log_tail_init") {
  SUBCASE("survival at zero") {
    const auto t = log_pmf_table(DistParams(8.0, 0.2), 0);
    CHECK(log_tail_init(t, 0) == doctest::Approx(std::log1p(-std::exp(-8.0))).epsilon(1e-14));
  }
  SUBCASE("moderate tail against the oracle") {
    const DistParams p(2.0, 0.5);
    const auto t = log_pmf_table(p, 15);
    oracle::HighPrecision head = 0;
    for (std::size_t x = 0; x <= 15; ++x) head += oracle::direct_pmf(x, p);
    CHECK(rel(std::exp(log_tail_init(t, 15)), 1 - head) <= 1e-10);
    CHECK(std::exp(log_tail_init(t, 15)) ==
          doctest::Approx(0.0079919724457506827482).epsilon(1e-10));
  }
  SUBCASE("Poisson tail at 40") {
    const auto t = log_pmf_table(DistParams(8.0, 0.0), 40);
    const double h = log_tail_init(t, 40);
    CHECK(rel(std::exp(h), oracle::poisson_upper_tail(40, 8.0)) <= 1e-10);
    CHECK(std::exp(h) == doctest::Approx(1.3156157815278616727e-16).epsilon(1e-10));
  }
  SUBCASE("only the last two table entries matter") {
    const DistParams p(5.0, 0.3);
    CHECK(log_tail_init(log_pmf_table(p, 30), 30) == log_tail_init(log_pmf_table(p, 90), 30));
  }
  SUBCASE("starting far below the mode does not overflow") {
    const DistParams p(3000.0, 0.01);
    const double h = log_tail_init(log_pmf_table(p, 100), 100);
    CHECK(std::isfinite(h));
    CHECK(h <= 0.0);
    CHECK(h > -1e-12);
  }
  SUBCASE("index beyond the table") {
    CHECK_THROWS_AS(log_tail_init(log_pmf_table(DistParams(1.0, 0.5), 3), 4), std::out_of_range);
  }
  SUBCASE("series that cannot converge within the cap") {
    const auto t = log_pmf_table(DistParams(1e7, 0.0), 0);
    CHECK_THROWS_AS(log_tail_init(t, 0), NumericalError);
  }
}

TEST_CASE("log_cdf_upper") {
  SUBCASE("survival at zero for several parameters") {
    for (const auto& p : {DistParams(0.5, 0.1), DistParams(8.0, 0.2), DistParams(30.0, 0.7)}) {
      const auto tails = tail_tables(log_pmf_table(p, 60));
      CHECK(std::fabs(tails.h[0] - std::log1p(-std::exp(-p.lambda()))) <= 1e-12);
    }
  }
  SUBCASE("complements the lower tail") {
    const auto tails = tail_tables(log_pmf_table(DistParams(2.0, 0.5), 20));
    for (std::size_t x = 0; x <= 20; ++x) {
      CHECK(std::fabs(std::exp(tails.g[x]) + std::exp(tails.h[x]) - 1.0) <= 1e-12);
    }
  }
  SUBCASE("strictly decreasing far into the tail of the figure two setting") {
    const DistParams p = params_from_moments({4000.0, 4050.0});
    const std::size_t top = static_cast<std::size_t>(4000.0 + 60.0 * std::sqrt(4050.0));
    const auto t = log_pmf_table(p, top);
    const auto h = log_cdf_upper(t, log_tail_init(t, top), top);
    REQUIRE(h.size() == top + 1);
    for (std::size_t x = 4000; x <= top; ++x) {
      REQUIRE(std::isfinite(h[x]));
      REQUIRE(h[x] < h[x - 1]);
    }
    CHECK(h[top] < -1000.0);
  }
  SUBCASE("index beyond the table") {
    CHECK_THROWS_AS(log_cdf_upper(log_pmf_table(DistParams(1.0, 0.5), 3), -1.0, 4),
                    std::out_of_range);
  }
}

TEST_CASE("log_add_exp") {
  CHECK(log_add_exp(-INFINITY, -INFINITY) == -INFINITY);
  CHECK(log_add_exp(-INFINITY, -3.0) == -3.0);
  CHECK(log_add_exp(std::log(0.25), std::log(0.5)) == doctest::Approx(std::log(0.75)));
  CHECK(log_add_exp(-1000.0, -1000.0) == doctest::Approx(-1000.0 + std::log(2.0)));
}
