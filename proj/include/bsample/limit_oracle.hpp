#pragma once

// Reference laws for the normalized partial sums: the standard normal, and Hermite-process
// marginals at t = 1 approximated by normalized discrete Volterra sums
//   T_{n,r} = sum_{i=1}^n sum_{0 <= j_1 < ... < j_r} prod_s a_{j_s} eps_{i - j_s},
// together with the variance constant zeta_r(beta) = ||Z_{r,beta}(1)||^2.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "bsample/empirical_dist.hpp"
#include "bsample/process.hpp"

namespace bsample {

// Phi(x).
double normal_cdf(double x) noexcept;

struct HermiteSpec {
  int r = 1;
  double beta = 0.75;
  std::size_t n = 2000;             // grid length of the Volterra partial sum
  std::size_t truncation = 10000;   // coefficient truncation M
  InnovationSpec innovations = InnovationSpec::gaussian();

  // Throws UnsupportedError for r outside {1, 2}; DomainError unless 1/2 < beta < 1/2 + 1/(2r).
  void validate() const;
};

enum class VolterraStrategy {
  automatic,
  // O(n M): r=1 by convolution, r=2 by the prefix recursion
  //   U_{i,2} = sum_{j2>=1} a_{j2} eps_{i-j2} sum_{j1<j2} a_{j1} eps_{i-j1}.
  direct,
  // r=1 via the weights w_k = sum_i a_{i-k}; r=2 via the FFT convolution and
  //   2 T = sum_i X_i^2 - sum_k eps_k^2 sum_i a_{i-k}^2.
  transform,
};

// T_{n,r}. `innovations` holds eps_{1-M}, ..., eps_n (length n + M) where M is the
// truncation of `coeffs`. Throws UnsupportedError unless r is 1 or 2.
double volterra_sum(int r, const CoefficientSeq& coeffs, std::span<const double> innovations,
                    std::size_t n, VolterraStrategy strategy = VolterraStrategy::automatic);

// E T_{n,r}^2 from the coefficients alone, given E eps^2 = `innovation_variance`.
//   r=1: var * sum_k (sum_i a_{i-k})^2
//   r=2: var^2 * sum_{k2<k1} (sum_i a_{i-k1} a_{i-k2})^2
double volterra_second_moment(int r, const CoefficientSeq& coeffs, std::size_t n,
                              double innovation_variance = 1.0);

// `reps` independent draws of T_{n,r} / ||T_{n,r}||, draw k using substream k of `seed`.
// The result does not depend on `workers`.
EmpiricalDist sample_limit(const HermiteSpec& spec, std::size_t reps, std::uint64_t seed,
                           unsigned workers = 1);

struct ZetaConstant {
  int r = 1;
  double beta = 0.0;
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate
};

// zeta_r(beta) = int over {u_1 < ... < u_r < 1} of [int_0^1 prod_k (v - u_k)_+^-beta dv]^2.
// Throws ToleranceError (carrying the best estimate) if `tol` is not reached.
ZetaConstant zeta(int r, double beta, double tol = 1e-8);

// sup_x |F_d(x) - F(x)| for a continuous reference CDF, evaluated at both one-sided limits
// of every atom of d.
double ks_distance(const EmpiricalDist& d, const std::function<double(double)>& reference);

// sup_x |F_d(x) - F_e(x)| between two empirical distributions.
double ks_distance(const EmpiricalDist& d, const EmpiricalDist& e);

}  // namespace bsample
