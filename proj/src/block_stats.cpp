#include "bsample/block_stats.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bsample/error.hpp"

namespace bsample {

std::size_t window_count(std::size_t n, std::size_t l, BlockConvention conv) {
  if (conv == BlockConvention::backward_with_past) return n;
  return l > n ? 0 : n - l + 1;
}

namespace {

// Window sums of f(Y_j); shared by the raw and the centered variants so that centering
// happens term by term (a constant series then cancels exactly).
template <class F>
std::vector<double> window_sums(const SeriesView& y, std::size_t l, BlockConvention conv, F f) {
  if (l == 0) throw DomainError("block length must be at least 1");
  const std::size_t n = y.n();
  std::vector<double> out;
  if (conv == BlockConvention::backward_with_past) {
    if (y.past.size() + 1 < l) {
      throw InsufficientDataError(fmt::format(
          "backward windows of length {} need {} past values, only {} available (short by {})",
          l, l - 1, y.past.size(), l - 1 - y.past.size()));
    }
    out.resize(n);
    // Y_j sits at z = p + j - 1 in past ++ observed.
    const std::size_t p = y.past.size();
    auto value = [&](std::size_t z) { return z < p ? y.past[z] : y.observed[z - p]; };
    for (std::size_t i = 1; i <= n; ++i) {
      double s = 0.0;
      const std::size_t last = p + i - 1;
      for (std::size_t z = last + 1 - l; z <= last; ++z) s += f(value(z));
      out[i - 1] = s;
    }
  } else {
    if (l > n) {
      throw InsufficientDataError(
          fmt::format("forward windows of length {} need at least {} observations, have {}", l,
                      l, n));
    }
    out.resize(n - l + 1);
    for (std::size_t i = 0; i + l <= n; ++i) {
      double s = 0.0;
      for (std::size_t j = i; j < i + l; ++j) s += f(y.observed[j]);
      out[i] = s;
    }
  }
  return out;
}

}  // namespace

std::vector<double> block_sums(const SeriesView& y, std::size_t l, BlockConvention conv) {
  return window_sums(y, l, conv, [](double v) { return v; });
}

std::vector<double> centered_block_sums(const SeriesView& y, std::size_t l, BlockConvention conv,
                                        double ybar) {
  return window_sums(y, l, conv, [ybar](double v) { return v - ybar; });
}

double observed_mean(const SeriesView& y) {
  if (y.n() == 0) throw InsufficientDataError("series has no observations");
  // Shifted by the first value: exact for a constant series.
  const double y0 = y.observed.front();
  double s = 0.0;
  for (double v : y.observed) s += v - y0;
  return y0 + s / static_cast<double>(y.n());
}

EmpiricalDist f_n(const SeriesView& y, std::size_t l, double s_l) {
  if (!(s_l > 0.0)) throw DegenerateScaleError(fmt::format("block scale s_l = {} is not positive", s_l));
  auto sums = block_sums(y, l, BlockConvention::backward_with_past);
  for (double& v : sums) v /= s_l;
  return EmpiricalDist(std::move(sums));
}

namespace {

double mean_square(const std::vector<double>& sums) {
  double q = 0.0;
  for (double b : sums) q += b * b;
  return q / static_cast<double>(sums.size());
}

}  // namespace

CenteredBlockDist f_n_tilde(const SeriesView& y, std::size_t l, BlockConvention conv) {
  if (y.n() < 2) throw InsufficientDataError("f_n_tilde needs at least 2 observations");
  const double ybar = observed_mean(y);
  auto sums = centered_block_sums(y, l, conv, ybar);
  const double s = std::sqrt(mean_square(sums));
  if (!(s > 0.0)) {
    throw DegenerateScaleError(fmt::format(
        "centered block variance is zero for block length {}; the series is constant over "
        "every window",
        l));
  }
  for (double& b : sums) b /= s;
  return {EmpiricalDist(std::move(sums)), s, ybar};
}

double variance_hat(const SeriesView& y, std::size_t l) {
  return mean_square(block_sums(y, l, BlockConvention::backward_with_past));
}

double variance_tilde(const SeriesView& y, std::size_t l, BlockConvention conv) {
  return mean_square(centered_block_sums(y, l, conv, observed_mean(y)));
}

}  // namespace bsample
