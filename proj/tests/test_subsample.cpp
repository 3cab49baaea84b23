#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bsample/error.hpp"
#include "bsample/limit_oracle.hpp"
#include "bsample/process.hpp"
#include "bsample/subsample.hpp"

using namespace bsample;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
using Vec = std::vector<double>;
}  // namespace

TEST_CASE("choose_scales") {
  const auto a = choose_scales(1000, 31);
  CHECK(a.n1 == 501);
  CHECK(a.l1 == 15);
  const auto b = choose_scales(100, 10);
  CHECK(b.n1 == 63);
  CHECK(b.l1 == 6);
  const auto c = choose_scales(1'000'000, 1000);
  CHECK(c.ratio_error() <= 1.0 / static_cast<double>(c.n1));
  CHECK(choose_scales(100, 2).l1 == 2);  // floor(2*63/100) = 1, raised to 2
  CHECK_THROWS_AS(choose_scales(100, 0), ConfigError);
  CHECK_THROWS_AS(choose_scales(100, 100), ConfigError);
  CHECK_THROWS_AS(choose_scales(10, 9), ConfigError);  // n1 = 7 < l
}

TEST_CASE("local_variance") {
  CHECK(local_variance(Vec{1, -1, 1, -1}, 1, 4, 1, 0.0) == 1.0);
  CHECK(local_variance(Vec(10, 2.5), 3, 5, 2, 2.5) == 0.0);
  // l1 = l: single term (B - l ybar)^2
  CHECK(local_variance(Vec{1, 2, 3, 4}, 2, 3, 3, 1.0) == doctest::Approx((9.0 - 3.0) * (9.0 - 3.0)));
}

TEST_CASE("f_l_star") {
  const Vec c(50, 1.0);
  CHECK_THROWS_AS(f_l_star(c, choose_scales(50, 5)), DegenerateScaleError);
  try {
    f_l_star(c, choose_scales(50, 5));
  } catch (const DegenerateScaleError& e) {
    CHECK(e.index() == 1);
  }

  // n - l + 1 = 1: single atom
  Vec y{1, 5, 2, 8, 3, 1, 4};
  const SubsampleScales s{7, 7, 7, 2};
  CHECK(f_l_star(y, s).size() == 1);
}

TEST_CASE("f_l_star vs the Gaussian limit, model (i) beta=0.75, n=2000") {
  const auto model = make_preset("model-i", 0.75, 10000, kInf);
  const std::size_t n = 2000, l = 44;
  const auto w = simulate_window(model, n, 0, {8, 0});
  const auto d = f_l_star(w.observed(), choose_scales(n, l));
  // f_l_star approximates S_l / s_{l1}; rescale to unit variance before comparing with N(0, 1)
  std::vector<double> z(d.values().begin(), d.values().end());
  const double sd = std::sqrt(d.variance());
  for (double& v : z) v = (v - d.mean()) / sd;
  CHECK(ks_distance(EmpiricalDist(z), normal_cdf) <= 0.12);
}

TEST_CASE("subsampling intervals shift with the data") {
  const auto model = make_preset("model-i", 2.0);
  const auto w = simulate_window(model, 500, 0, {4, 0});
  Vec y(w.observed().begin(), w.observed().end());
  Vec shifted = y;
  for (double& v : shifted) v += 3.0;
  const auto s = choose_scales(500, 22);
  const auto a = ci_mean_subsample(y, s, 0.1, IntervalKind::two_sided);
  const auto b = ci_mean_subsample(shifted, s, 0.1, IntervalKind::two_sided);
  CHECK(b.lo == doctest::Approx(a.lo + 3.0).epsilon(1e-10));
  CHECK(b.hi == doctest::Approx(a.hi + 3.0).epsilon(1e-10));
}
