#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bsample/block_stats.hpp"
#include "bsample/error.hpp"
#include "bsample/limit_oracle.hpp"
#include "bsample/process.hpp"
#include "oracles.hpp"

using namespace bsample;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
using Vec = std::vector<double>;
}  // namespace

TEST_CASE("EmpiricalDist basics") {
  const EmpiricalDist d({3.0, 1.0, 2.0, 4.0});
  CHECK(d.size() == 4);
  CHECK(d.min() == 1.0);
  CHECK(d.max() == 4.0);
  CHECK(d.quantile(0.5) == 2.0);
  CHECK(d.quantile(1.0) == 4.0);
  CHECK(d.quantile(0.25) == 1.0);
  CHECK(d.quantile(0.2500001) == 2.0);
  CHECK(d.cdf(2.0) == 0.5);
  CHECK(d.cdf_left(2.0) == 0.25);
  CHECK(d.cdf(0.5) == 0.0);
  CHECK(d.cdf(4.0) == 1.0);
  CHECK(d.cdf(1e300) == 1.0);
  CHECK(d.mean() == 2.5);
  CHECK(d.variance() == doctest::Approx(5.0 / 3.0));

  const EmpiricalDist single({7.0});
  for (double a : {0.01, 0.5, 1.0}) CHECK(single.quantile(a) == 7.0);
  CHECK(single.variance() == 0.0);

  CHECK_THROWS_AS(d.quantile(0.0), DomainError);
  CHECK_THROWS_AS(d.quantile(1.5), DomainError);
  CHECK_THROWS_AS(d.quantile(-0.1), DomainError);
  CHECK_THROWS_AS(EmpiricalDist(Vec{}), DomainError);
  CHECK_THROWS_AS(EmpiricalDist(Vec{1.0, std::nan("")}), DomainError);
}

TEST_CASE("EmpiricalDist ties count with multiplicity") {
  const EmpiricalDist d({1.0, 1.0, 1.0, 2.0});
  CHECK(d.count_leq(1.0) == 3);
  CHECK(d.count_less(1.0) == 0);
  CHECK(d.quantile(0.75) == 1.0);
  CHECK(d.quantile(0.76) == 2.0);
}

TEST_CASE("EmpiricalDist CSV") {
  std::ostringstream os;
  write_csv(os, EmpiricalDist({2.0, 1.0}));
  CHECK(os.str() == "value\n1\n2\n");
}

TEST_CASE("block sums: forward") {
  const Vec y{1, 2, 3};
  CHECK(block_sums(SeriesView(y), 2, BlockConvention::forward_interior) == Vec{3, 5});
  CHECK(block_sums(SeriesView(y), 1, BlockConvention::forward_interior) == y);
  CHECK(block_sums(SeriesView(y), 3, BlockConvention::forward_interior) == Vec{6});
  CHECK_THROWS_AS(block_sums(SeriesView(y), 4, BlockConvention::forward_interior), InsufficientDataError);
  CHECK_THROWS_AS(block_sums(SeriesView(y), 0, BlockConvention::forward_interior), DomainError);
}

TEST_CASE("block sums: backward with past") {
  const Vec past{10}, obs{1, 2};
  CHECK(block_sums(SeriesView(past, obs), 2, BlockConvention::backward_with_past) == Vec{11, 3});
  CHECK(block_sums(SeriesView(past, obs), 1, BlockConvention::backward_with_past) == obs);
  CHECK(block_sums(SeriesView(obs), 1, BlockConvention::backward_with_past) == obs);
  try {
    block_sums(SeriesView(past, obs), 4, BlockConvention::backward_with_past);
    FAIL("expected InsufficientDataError");
  } catch (const InsufficientDataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('3') != std::string::npos);  // needs 3 past values
    CHECK(msg.find('1') != std::string::npos);  // has 1
  }
  CHECK(window_count(10, 3, BlockConvention::backward_with_past) == 10);
  CHECK(window_count(10, 3, BlockConvention::forward_interior) == 8);
}

TEST_CASE("f_n") {
  // observed [-1, 0, 1] with l = 1 gives blocks [-1, 0, 1]
  const Vec y{-1, 0, 1};
  const auto d = f_n(SeriesView(y), 1, 1.0);
  CHECK(d.cdf(0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(d.cdf(1.0) == 1.0);
  CHECK(d.cdf(-1.0001) == 0.0);
  CHECK_THROWS_AS(f_n(SeriesView(y), 1, 0.0), DegenerateScaleError);
}

TEST_CASE("f_n_tilde") {
  const Vec past{-1}, obs{1, -1, 1, -1};
  const auto r = f_n_tilde(SeriesView(past, obs), 1);
  CHECK(r.mean == 0.0);
  CHECK(r.s_l_tilde == doctest::Approx(1.0));
  CHECK(r.dist.cdf(0.0) == 0.5);

  const Vec cpast(5, 3.7), cobs(20, 3.7);
  CHECK_THROWS_AS(f_n_tilde(SeriesView(cpast, cobs), 3), DegenerateScaleError);
  CHECK_THROWS_AS(f_n_tilde(SeriesView(Vec{1.0}), 1, BlockConvention::forward_interior), InsufficientDataError);
}

TEST_CASE("variance estimators by hand") {
  const Vec obs{1, 2};
  CHECK(variance_hat(SeriesView(Vec{0}, obs), 2) == 5.0);
  const Vec y{1, 2, -3, 4};
  CHECK(variance_hat(SeriesView(y), 1) == doctest::Approx((1 + 4 + 9 + 16) / 4.0));

  CHECK(variance_tilde(SeriesView(Vec{1}, Vec{1, -1}), 2) == 2.0);
  const Vec c(30, -2.25);
  CHECK(variance_tilde(SeriesView(Vec(9, -2.25), c), 10) == 0.0);
  CHECK(variance_tilde(SeriesView(c), 10, BlockConvention::forward_interior) == 0.0);
  // forward divisor is the number of windows: y = [1, 2, 3], l=2, ybar=2: (3-4)^2, (5-4)^2
  CHECK(variance_tilde(SeriesView(Vec{1, 2, 3}), 2, BlockConvention::forward_interior) == 1.0);
}

TEST_CASE("variance_hat is unbiased (covariance-sum oracle)") {
  const double beta = 0.75;
  const std::size_t m = 2000, n = 400, l = 20;
  const auto model = make_preset("model-i", beta, m, kInf);
  const double target = oracle::block_sum_variance(oracle::coefficients(beta, m), l);
  const int reps = 2000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto w = simulate_window(model, n, l, {77, static_cast<std::uint64_t>(r)});
    const double v = variance_hat(w, l);
    s += v;
    s2 += v * v;
  }
  const double mean = s / reps;
  const double se = std::sqrt((s2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - target) < 3.0 * se);
}

TEST_CASE("variance_tilde / variance_hat -> 1 (beta=0.75, n=5000, l=70)" * doctest::may_fail()) {
  const auto model = make_preset("model-i", 0.75, 10000, kInf);
  const int reps = 500;
  int close = 0;
  for (int r = 0; r < reps; ++r) {
    const auto w = simulate_window(model, 5000, 70, {31, static_cast<std::uint64_t>(r)});
    const double ratio = variance_tilde(w, 70) / variance_hat(w, 70);
    close += std::abs(ratio - 1.0) <= 0.1;
  }
  MESSAGE("ratio within 0.1 of 1 in " << close << " of " << reps << " replicates");
  CHECK(close >= 0.95 * reps);
}

TEST_CASE("f_n_tilde is near normal for short memory (beta=2, n=2000)") {
  const auto model = make_preset("model-i", 2.0);
  const std::size_t n = 2000, l = 44;
  const auto w = simulate_window(model, n, l, {5, 0});
  const auto r = f_n_tilde(w, l);
  CHECK(ks_distance(r.dist, normal_cdf) <= 0.1);
}

TEST_CASE("centered sums are exact for constant series") {
  const Vec y(100, 0.1);
  for (double v : centered_block_sums(SeriesView(y), 7, BlockConvention::forward_interior, observed_mean(SeriesView(y)))) {
    CHECK(v == 0.0);
  }
  CHECK(observed_mean(SeriesView(y)) == 0.1);
}
