#include "bsample/subsample.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bsample/error.hpp"

namespace bsample {

SubsampleScales choose_scales(std::size_t n, std::size_t l) {
  if (l < 1 || l >= n) {
    throw ConfigError(fmt::format("subsampling needs 1 <= l < n (l={}, n={})", l, n));
  }
  SubsampleScales s;
  s.n = n;
  s.l = l;
  s.n1 = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.9)));
  // floor(l n1 / n) in integer arithmetic.
  s.l1 = std::max<std::size_t>(2, l * s.n1 / n);
  if (s.l1 >= s.n1 || s.l1 > l || l > s.n1) {
    throw ConfigError(fmt::format(
        "subsampling scales out of order: need 2 <= l1 <= l <= n1 with l1 < n1, got l1={}, "
        "l={}, n1={} for n={}",
        s.l1, l, s.n1, n));
  }
  return s;
}

double local_variance(std::span<const double> y, std::size_t i, std::size_t l, std::size_t l1,
                      double ybar) {
  if (i < 1 || l1 < 1 || l1 > l || i + l - 1 > y.size()) {
    throw DomainError(fmt::format(
        "local window [i={}, i+l-1={}] with l1={} does not fit a series of length {}", i,
        i + l - 1, l1, y.size()));
  }
  const std::size_t terms = l - l1 + 1;
  double q = 0.0;
  for (std::size_t j = 0; j < terms; ++j) {
    double b = 0.0;
    const std::size_t start = i - 1 + j;
    for (std::size_t k = start; k < start + l1; ++k) b += y[k] - ybar;
    q += b * b;
  }
  return q / static_cast<double>(terms);
}

namespace {

struct Studentized {
  EmpiricalDist dist;
  double mean;
};

Studentized studentize(std::span<const double> y, const SubsampleScales& sc) {
  if (y.size() != sc.n) {
    throw DomainError(
        fmt::format("series length {} does not match subsample scales n={}", y.size(), sc.n));
  }
  const SeriesView view(y);
  const double ybar = observed_mean(view);
  // Short centered sums of length l1, reused by every local variance.
  const auto short_sums = centered_block_sums(view, sc.l1, BlockConvention::forward_interior, ybar);
  const auto long_sums = centered_block_sums(view, sc.l, BlockConvention::forward_interior, ybar);
  const std::size_t terms = sc.l - sc.l1 + 1;

  std::vector<double> out(long_sums.size());
  for (std::size_t w = 0; w < long_sums.size(); ++w) {
    double q = 0.0;
    for (std::size_t j = w; j < w + terms; ++j) q += short_sums[j] * short_sums[j];
    const double s = std::sqrt(q / static_cast<double>(terms));
    if (!(s > 0.0)) {
      throw DegenerateScaleError(
          fmt::format("local scale s_(l1,i) is zero at window i={}", w + 1),
          static_cast<std::ptrdiff_t>(w + 1));
    }
    out[w] = long_sums[w] / s;
  }
  return {EmpiricalDist(std::move(out)), ybar};
}

}  // namespace

EmpiricalDist f_l_star(std::span<const double> y, const SubsampleScales& scales) {
  return studentize(y, scales).dist;
}

SubsampleAnalysis analyze_subsample(std::span<const double> y, const SubsampleScales& scales) {
  auto st = studentize(y, scales);
  const double s_n1 =
      std::sqrt(variance_tilde(SeriesView(y), scales.n1, BlockConvention::forward_interior));
  if (!(s_n1 > 0.0)) {
    throw DegenerateScaleError(fmt::format("block scale s_n1 is zero for n1={}", scales.n1));
  }
  return {scales, std::move(st.dist), st.mean, s_n1};
}

ConfidenceInterval ci_from_analysis(const SubsampleAnalysis& a, double alpha, IntervalKind kind) {
  return interval_from_quantiles(a.studentized, a.mean, a.s_n1_tilde, a.scales.n, alpha, kind);
}

ConfidenceInterval ci_mean_subsample(std::span<const double> y, const SubsampleScales& scales,
                                     double alpha, IntervalKind kind) {
  return ci_from_analysis(analyze_subsample(y, scales), alpha, kind);
}

}  // namespace bsample
