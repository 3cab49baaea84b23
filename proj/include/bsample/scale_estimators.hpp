#pragma once

// Two-time-scale estimation of the self-similarity index and the confidence intervals for
// the mean built on the realized block distribution.

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "bsample/block_stats.hpp"
#include "bsample/empirical_dist.hpp"

namespace bsample {

// H = 1 - p(beta - 1/2) when p(2beta - 1) < 1, H = 1/2 when p(2beta - 1) > 1.
// Throws UnsupportedError on the boundary p(2beta - 1) = 1, DomainError for p < 1 or beta <= 1/2.
double theoretical_H(int p, double beta);

struct ScaleEstimates {
  double s_l_tilde = 0.0;
  double s_2l_tilde = 0.0;
  double H_hat = 0.0;
  double c0_hat = 0.0;
  double sigma_n_hat = 0.0;
  std::size_t l = 0;
  std::size_t n = 0;
};

// Fills H_hat, c0_hat and sigma_n_hat from the two block scales.
// Throws DegenerateScaleError if either scale is not positive.
ScaleEstimates scales_from(double s_l_tilde, double s_2l_tilde, std::size_t l, std::size_t n);

// s_l_tilde and s_2l_tilde via variance_tilde, then H_hat = log2(s_2l/s_l),
// c0_hat = s_l / l^H_hat, sigma_n_hat = n^H_hat c0_hat. Requires 2l <= n; backward mode
// needs a past block of at least 2l - 1 values.
ScaleEstimates estimate_scales(const SeriesView& y, std::size_t l,
                               BlockConvention conv = BlockConvention::backward_with_past);

enum class IntervalKind { two_sided, upper_one_sided, lower_one_sided };

std::string to_string(IntervalKind kind);
IntervalKind interval_kind_from_string(std::string_view s);

struct ConfidenceInterval {
  IntervalKind kind = IntervalKind::two_sided;
  double level = 0.0;  // nominal 1 - alpha
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // scale collapsed to zero: zero-width interval at the mean

  bool contains(double mu) const noexcept { return lo <= mu && mu <= hi; }
};

// Intervals for mu from quantiles q of a studentized distribution:
//   two_sided        [ybar - q_{1-a/2} scale/n, ybar - q_{a/2} scale/n]
//   upper_one_sided  [ybar - q_{1-a} scale/n, +inf)
//   lower_one_sided  (-inf, ybar - q_{a} scale/n]
// A zero scale yields the degenerate interval [ybar, ybar] (one-sided kinds keep their
// infinite end).
ConfidenceInterval interval_from_quantiles(const EmpiricalDist& studentized, double ybar,
                                           double scale, std::size_t n, double alpha,
                                           IntervalKind kind);

// Everything the H_hat-based intervals need from one series, computed once.
struct HHatAnalysis {
  ScaleEstimates scales;
  CenteredBlockDist blocks;
};

HHatAnalysis analyze_h_hat(const SeriesView& y, std::size_t l,
                           BlockConvention conv = BlockConvention::backward_with_past);

ConfidenceInterval ci_from_analysis(const HHatAnalysis& a, double alpha, IntervalKind kind);

// One-shot form of analyze_h_hat + ci_from_analysis.
ConfidenceInterval ci_mean(const SeriesView& y, std::size_t l, double alpha, IntervalKind kind,
                           BlockConvention conv = BlockConvention::backward_with_past);

void to_json(nlohmann::json& j, const ScaleEstimates& s);
void to_json(nlohmann::json& j, const ConfidenceInterval& ci);

}  // namespace bsample
