#include "percnat/error.hpp"
#include "percnat/fit.hpp"
#include "percnat/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace percnat;

TEST_CASE("exact power law") {
  std::vector<ScalingRow> rows;
  for (double x : {0.5, 0.25, 0.125, 0.0625}) rows.push_back({x, 3 * std::pow(x, -1.75), 0.01});
  const PowerFit f = fit_exponent(rows);
  CHECK(std::abs(f.slope + 1.75) < 1e-12);
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  for (auto& r : rows) r.estimate = 2;
  CHECK(std::abs(fit_exponent(rows).slope) < 1e-12);
}

TEST_CASE("noisy power law: slope estimator is unbiased") {
  std::mt19937_64 g(6);
  std::normal_distribution<double> z(0, 1);
  const double slope = 0.75, rel = 0.05;
  const int reps = 10000;
  double sum = 0, sum_se = 0;
  for (int r = 0; r < reps; ++r) {
    std::vector<ScalingRow> rows;
    for (int k = 5; k <= 9; ++k) {
      const double x = std::ldexp(1.0, -k);
      const double y = std::pow(x, slope) * (1 + rel * z(g));
      rows.push_back({x, y, rel * std::pow(x, slope)});
    }
    const PowerFit f = fit_exponent(rows);
    sum += f.slope;
    sum_se += f.slope_stderr;
  }
  const double mean = sum / reps, se = sum_se / reps / std::sqrt(static_cast<double>(reps));
  CHECK(std::abs(mean - slope) <= 3 * se);
}

TEST_CASE("fit errors") {
  std::vector<ScalingRow> two{{1, 1, 0.1}, {2, 2, 0.1}};
  try {
    fit_exponent(two);
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewPoints);
  }
  std::vector<ScalingRow> zero{{1, 1, 0.1}, {2, 0, 0.1}, {4, 3, 0.1}};
  try {
    fit_exponent(zero);
    FAIL("expected NonPositiveEstimate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveEstimate);
  }
}

TEST_CASE("unweighted fallback when a stderr is zero") {
  std::vector<ScalingRow> rows{{1, 1, 0}, {2, 2.1, 0.1}, {4, 3.9, 0.1}, {8, 8.2, 0.2}};
  const PowerFit f = fit_exponent(rows);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f.slope_stderr > 0);
}
