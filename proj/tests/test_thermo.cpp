#include <doctest.h>

#include <cmath>
#include <map>

#include "schottky/thermo.hpp"
#include "schottky/util.hpp"

using namespace schottky;

TEST_CASE("pressure closed form at r = 0") {
  SchottkyData data = reference_schottky();
  PressureEstimate est = pressure_estimate(data, 0.0, 5);
  CHECK(est.value == doctest::Approx(std::log(324.0) / 5.0).epsilon(1e-15));
  CHECK(est.raw_sum == doctest::Approx(324.0).epsilon(1e-12));
}

TEST_CASE("r = 0 estimates approach log(2d-1) at the algebraic rate") {
  SchottkyData data = reference_schottky();
  double prev_gap = 1e300;
  for (int n : {6, 8, 10}) {
    double value = pressure_estimate(data, 0.0, n).value;
    double expected_gap = (std::log(4.0) - std::log(3.0)) / n;
    CHECK(value - std::log(3.0) == doctest::Approx(expected_gap).epsilon(1e-12));
    CHECK(value - std::log(3.0) < prev_gap);
    prev_gap = value - std::log(3.0);
  }
}

TEST_CASE("pressure at r = 1 is strictly negative") {
  CHECK(pressure_estimate(reference_schottky(), 1.0, 10).value < 0.0);
}

TEST_CASE("pressure estimate is strictly decreasing and N*value convex in r") {
  SchottkyData data = reference_schottky();
  auto table = log_interval_length_table(data, 8);
  std::vector<double> values;
  for (double r = 0.0; r <= 2.0 + 1e-9; r += 0.25)
    values.push_back(pressure_estimate(table, r, 8).value);
  for (std::size_t k = 1; k < values.size(); ++k) CHECK(values[k] < values[k - 1]);
  for (std::size_t k = 2; k < values.size(); ++k)
    CHECK(values[k] - 2.0 * values[k - 1] + values[k - 2] >= -1e-9 / 8.0);
}

TEST_CASE("depth stability improves with N near the dimension") {
  SchottkyData data = reference_schottky();
  std::map<int, std::vector<double>> tables;
  for (int n : {6, 8, 10, 12, 14}) tables[n] = log_interval_length_table(data, n, 2);
  for (double r : {0.22, 0.42}) {
    double prev = 1e300;
    for (int n : {6, 8, 10, 12}) {
      double gap = std::abs(pressure_estimate(tables[n], r, n).value -
                            pressure_estimate(tables[n + 2], r, n + 2).value);
      CHECK(gap < prev);
      prev = gap;
    }
  }
}

TEST_CASE("hausdorff dimension: bracket, residual, and known bias decay") {
  SchottkyData data = reference_schottky();
  DimensionResult d8 = hausdorff_dimension(data, 8, 1e-6);
  CHECK(d8.delta > 0.0);
  CHECK(d8.delta < 1.0);
  CHECK(d8.bracket.second - d8.bracket.first <= 1e-6);
  CHECK(d8.residual < 1e-4);

  // The finite-depth zero approaches the dimension like b/N from above;
  // consecutive gaps must shrink with the 1/N fingerprint.
  DimensionResult d10 = hausdorff_dimension(data, 10, 1e-6);
  DimensionResult d12 = hausdorff_dimension(data, 12, 1e-6, 2);
  CHECK(d8.delta > d10.delta);
  CHECK(d10.delta > d12.delta);
  double fit = (d8.delta - d10.delta) / (d10.delta - d12.delta);
  double predicted = (1.0 / 8 - 1.0 / 10) / (1.0 / 10 - 1.0 / 12);  // = 1.5
  CHECK(fit == doctest::Approx(predicted).epsilon(0.25));
}

TEST_CASE("no sign change raises a domain error") {
  CHECK_THROWS_AS(hausdorff_dimension(reference_schottky(), 1, 1e-4), std::domain_error);
}

TEST_CASE("dimension decreases when separations scale up") {
  SchottkyData base = reference_schottky();
  SchottkyData spread = build_symmetric_schottky({-12.0, -4.0, 12.0, 4.0}, {1.0, 1.0, 1.0, 1.0});
  CHECK(hausdorff_dimension(spread, 8, 1e-5).delta < hausdorff_dimension(base, 8, 1e-5).delta);
}

TEST_CASE("nearly touching discs push the dimension above one half") {
  SchottkyData tight = build_symmetric_schottky({-3.15, -1.05, 3.15, 1.05}, {1.0, 1.0, 1.0, 1.0});
  CHECK(hausdorff_dimension(tight, 10, 1e-5, 2).delta > 0.5);
}

TEST_CASE("word cap fails loudly") {
  CHECK_THROWS_AS(log_interval_length_table(reference_schottky(), 15), CapExceededError);
}

TEST_CASE("length tables are identical across worker counts") {
  SchottkyData data = reference_schottky();
  auto t1 = log_interval_length_table(data, 9, 1);
  auto t2 = log_interval_length_table(data, 9, 2);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t k = 0; k < t1.size(); ++k) CHECK(t1[k] == t2[k]);
}
