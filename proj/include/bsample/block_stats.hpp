#pragma once

// Overlapping block sums and the block-sampling empirical distributions built from them.

#include <cstddef>
#include <span>
#include <vector>

#include "bsample/empirical_dist.hpp"
#include "bsample/process.hpp"

namespace bsample {

enum class BlockConvention {
  // B_{i,l} = Y_i + ... + Y_{i-l+1}, i = 1..n. Reads l-1 values of the past block.
  backward_with_past,
  // Y_i + ... + Y_{i+l-1}, i = 1..n-l+1. Observed values only.
  forward_interior,
};

// Non-owning view of a series: past block Y_{-p+1..0} and observations Y_{1..n}, oldest first.
struct SeriesView {
  std::span<const double> past;
  std::span<const double> observed;

  SeriesView() = default;
  SeriesView(std::span<const double> past_block, std::span<const double> obs)
      : past(past_block), observed(obs) {}
  explicit SeriesView(std::span<const double> obs) : observed(obs) {}
  SeriesView(const SeriesWindow& w)  // NOLINT(google-explicit-constructor)
      : past(w.past_block()), observed(w.observed()) {}

  std::size_t n() const noexcept { return observed.size(); }
};

// Number of windows the convention yields for block length l.
std::size_t window_count(std::size_t n, std::size_t l, BlockConvention conv);

// Window sums in index order. Throws InsufficientDataError when backward mode lacks l-1
// past values or forward mode has l > n; DomainError when l == 0.
std::vector<double> block_sums(const SeriesView& y, std::size_t l, BlockConvention conv);

// Window sums of (Y_j - ybar), i.e. B - l*ybar accumulated term by term.
std::vector<double> centered_block_sums(const SeriesView& y, std::size_t l, BlockConvention conv,
                                        double ybar);

// Ybar_n over the observed part only.
double observed_mean(const SeriesView& y);

// F_n: distribution of B_{i,l}/s_l, i = 1..n (backward windows). Throws
// DegenerateScaleError when s_l <= 0.
EmpiricalDist f_n(const SeriesView& y, std::size_t l, double s_l);

struct CenteredBlockDist {
  EmpiricalDist dist;       // (B - l Ybar) / s_l_tilde
  double s_l_tilde = 0.0;
  double mean = 0.0;        // Ybar_n
};

// Realized F_n: block sums centered by l Ybar_n and scaled by s_l_tilde.
// Needs n >= 2; throws DegenerateScaleError when s_l_tilde == 0.
CenteredBlockDist f_n_tilde(const SeriesView& y, std::size_t l,
                            BlockConvention conv = BlockConvention::backward_with_past);

// Known-mean (mu = 0) variance estimate (1/n) sum B_{i,l}^2, backward windows.
double variance_hat(const SeriesView& y, std::size_t l);

// Centered estimate (1/W) sum (B - l Ybar)^2 over the W windows of the convention
// (W = n for backward windows, n-l+1 for forward windows).
double variance_tilde(const SeriesView& y, std::size_t l,
                      BlockConvention conv = BlockConvention::backward_with_past);

}  // namespace bsample
