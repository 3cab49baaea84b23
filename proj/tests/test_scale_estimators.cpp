#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsample/error.hpp"
#include "bsample/process.hpp"
#include "bsample/scale_estimators.hpp"

using namespace bsample;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("theoretical H") {
  CHECK(theoretical_H(1, 0.75) == doctest::Approx(0.75));
  CHECK(theoretical_H(2, 0.6) == doctest::Approx(0.8));
  CHECK(theoretical_H(2, 0.8) == 0.5);
  CHECK(theoretical_H(1, 2.0) == 0.5);
  CHECK_THROWS_AS(theoretical_H(1, 1.0), UnsupportedError);
  CHECK_THROWS_AS(theoretical_H(2, 0.75), UnsupportedError);
  CHECK_THROWS_AS(theoretical_H(0, 0.75), DomainError);
  CHECK_THROWS_AS(theoretical_H(1, 0.5), DomainError);
}

TEST_CASE("scales_from") {
  const auto one = scales_from(3.0, 6.0, 10, 1000);
  CHECK(one.H_hat == doctest::Approx(1.0));
  CHECK(one.c0_hat == doctest::Approx(0.3));
  CHECK(one.sigma_n_hat == doctest::Approx(300.0));

  const auto half = scales_from(3.0, 3.0 * std::sqrt(2.0), 16, 1024);
  CHECK(half.H_hat == doctest::Approx(0.5));
  CHECK(half.sigma_n_hat == doctest::Approx(3.0 * 8.0));

  CHECK_THROWS_AS(scales_from(0.0, 1.0, 10, 100), DegenerateScaleError);
  CHECK_THROWS_AS(scales_from(1.0, 0.0, 10, 100), DegenerateScaleError);
}

TEST_CASE("estimate_scales requires 2l <= n and the past block") {
  std::vector<double> y(20, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::sin(1.3 * i);
  std::vector<double> past(9, 0.5);
  CHECK_THROWS_AS(estimate_scales(SeriesView(past, y), 11), InsufficientDataError);
  CHECK_THROWS_AS(estimate_scales(SeriesView(past, y), 6), InsufficientDataError);  // needs 11 past
  CHECK_NOTHROW(estimate_scales(SeriesView(past, y), 5));
  CHECK_NOTHROW(estimate_scales(SeriesView(y), 10, BlockConvention::forward_interior));
}

TEST_CASE("interval assembly") {
  // q_{0.25} = -1 = -q_{0.75}: two-sided interval centered at ybar
  const EmpiricalDist sym({-1.0, 1.0});
  const auto centered = interval_from_quantiles(sym, 5.0, 10.0, 10, 0.5, IntervalKind::two_sided);
  CHECK(centered.lo == doctest::Approx(4.0));
  CHECK(centered.hi == doctest::Approx(6.0));
  CHECK(centered.level == doctest::Approx(0.5));

  const EmpiricalDist d({-2.0, -1.0, 0.0, 1.0, 2.0});
  const auto two = interval_from_quantiles(d, 5.0, 10.0, 10, 0.4, IntervalKind::two_sided);
  CHECK(two.lo == doctest::Approx(5.0 - 1.0));  // q_{0.8} = 1
  CHECK(two.hi == doctest::Approx(5.0 + 2.0));  // q_{0.2} = -2
  CHECK(two.level == doctest::Approx(0.6));

  const auto up = interval_from_quantiles(d, 5.0, 10.0, 10, 0.2, IntervalKind::upper_one_sided);
  CHECK(up.lo == doctest::Approx(5.0 - 1.0));
  CHECK(std::isinf(up.hi));
  const auto lo = interval_from_quantiles(d, 5.0, 10.0, 10, 0.2, IntervalKind::lower_one_sided);
  CHECK(std::isinf(lo.lo));
  CHECK(lo.hi == doctest::Approx(5.0 + 2.0));

  const auto deg = interval_from_quantiles(d, 5.0, 0.0, 10, 0.2, IntervalKind::two_sided);
  CHECK(deg.degenerate);
  CHECK(deg.lo == 5.0);
  CHECK(deg.hi == 5.0);
  CHECK(deg.contains(5.0));
  CHECK_FALSE(deg.contains(5.0001));
}

TEST_CASE("interval kind names") {
  for (auto k : {IntervalKind::two_sided, IntervalKind::upper_one_sided, IntervalKind::lower_one_sided}) {
    CHECK(interval_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(interval_kind_from_string("sideways"), ConfigError);
}

TEST_CASE("JSON records") {
  nlohmann::json j = scales_from(3.0, 6.0, 10, 1000);
  CHECK(j["H_hat"].get<double>() == doctest::Approx(1.0));
  CHECK(j["l"] == 10);
  nlohmann::json c = ConfidenceInterval{IntervalKind::upper_one_sided, 0.9, 1.0, kInf, false};
  CHECK(c["hi"].is_null());
  CHECK(c["kind"] == "upper_one_sided");
}

TEST_CASE("two-sided coverage, model (i) beta=2, n=1000, c=1, alpha=0.2" * doctest::may_fail()) {
  const auto model = make_preset("model-i", 2.0);
  const std::size_t n = 1000, l = 31;
  const int reps = 1000;
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    const auto w = simulate_window(model, n, 2 * l, {2718, static_cast<std::uint64_t>(r)});
    covered += ci_mean(w, l, 0.2, IntervalKind::two_sided).contains(0.0);
  }
  const double cov = covered / double(reps);
  MESSAGE("two-sided coverage " << cov);
  CHECK(cov >= 0.86);
  CHECK(cov <= 0.94);
}
