#pragma once

// Subsampling variant: approximates the law of S_n / s_{n1} by that of S_l / s_{l1}, with
// l1 / n1 ~ l / n, so the self-similarity index never has to be estimated.

#include <cmath>
#include <cstddef>
#include <span>

#include "bsample/block_stats.hpp"
#include "bsample/empirical_dist.hpp"
#include "bsample/scale_estimators.hpp"

namespace bsample {

struct SubsampleScales {
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t n1 = 0;
  std::size_t l1 = 0;

  // |l1/n1 - l/n|
  double ratio_error() const noexcept {
    return std::abs(static_cast<double>(l1) / static_cast<double>(n1) -
                    static_cast<double>(l) / static_cast<double>(n));
  }
};

// n1 = floor(n^0.9), l1 = max(2, floor(l n1 / n)). Throws ConfigError unless 1 <= l < n and
// the result satisfies 2 <= l1 <= l <= n1 <= n with l1 < n1.
SubsampleScales choose_scales(std::size_t n, std::size_t l);

// Local variance over the l-window starting at observation i (1-based):
// (1/(l-l1+1)) sum_{j=1}^{l-l1+1} (Y_{i+j-1} + ... + Y_{i+j+l1-2} - l1 ybar)^2.
double local_variance(std::span<const double> y, std::size_t i, std::size_t l, std::size_t l1,
                      double ybar);

// Studentized forward block sums (sum_{j=i}^{i+l-1} Y_j - l ybar) / s_{l1,i}, i = 1..n-l+1,
// normalized as a proper distribution over the n-l+1 windows. Throws DegenerateScaleError
// carrying i when a local variance is zero.
EmpiricalDist f_l_star(std::span<const double> y, const SubsampleScales& scales);

struct SubsampleAnalysis {
  SubsampleScales scales;
  EmpiricalDist studentized;
  double mean = 0.0;       // Ybar_n
  double s_n1_tilde = 0.0;  // forward-window estimate of s_{n1}
};

SubsampleAnalysis analyze_subsample(std::span<const double> y, const SubsampleScales& scales);

ConfidenceInterval ci_from_analysis(const SubsampleAnalysis& a, double alpha, IntervalKind kind);

// Intervals as in ci_mean with quantiles from f_l_star and sigma_n_hat replaced by s_{n1}.
ConfidenceInterval ci_mean_subsample(std::span<const double> y, const SubsampleScales& scales,
                                     double alpha, IntervalKind kind);

}  // namespace bsample
