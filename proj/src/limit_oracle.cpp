#include "bsample/limit_oracle.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <fftw3.h>
#include <fmt/format.h>

#include "bsample/error.hpp"
#include "bsample/parallel.hpp"
#include "bsample/quadrature.hpp"

namespace bsample {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void HermiteSpec::validate() const {
  if (r != 1 && r != 2) {
    throw UnsupportedError(fmt::format("Volterra order r={} is not supported (r must be 1 or 2)", r));
  }
  const double upper = 0.5 + 1.0 / (2.0 * r);
  if (!(beta > 0.5 && beta < upper)) {
    throw DomainError(fmt::format(
        "beta={} is outside the Hermite validity window (1/2, {}) for r={}", beta, upper, r));
  }
  if (n < 1) throw DomainError("Hermite grid length must be at least 1");
  innovations.validate();
}

namespace {

void check_order(int r) {
  if (r != 1 && r != 2) {
    throw UnsupportedError(fmt::format("Volterra order r={} is not supported (r must be 1 or 2)", r));
  }
}

// FFTW's planner is not reentrant; execution with distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Linear convolution of a fixed kernel with signals of a fixed length, via r2c/c2r FFTs.
class FftConvolver {
 public:
  FftConvolver(std::span<const double> kernel, std::size_t signal_len)
      : kernel_len_(kernel.size()), signal_len_(signal_len) {
    size_ = 1;
    while (size_ < signal_len_) size_ <<= 1;
    const std::size_t bins = size_ / 2 + 1;
    real_ = fftw_alloc_real(size_);
    spec_ = fftw_alloc_complex(bins);
    kernel_spec_ = fftw_alloc_complex(bins);
    {
      std::lock_guard lock(fftw_planner_mutex());
      const int len = static_cast<int>(size_);
      forward_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
    }
    std::fill(real_, real_ + size_, 0.0);
    std::copy(kernel.begin(), kernel.end(), real_);
    fftw_execute(forward_);
    std::memcpy(kernel_spec_, spec_, bins * sizeof(fftw_complex));
  }
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;
  ~FftConvolver() {
    {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(real_);
    fftw_free(spec_);
    fftw_free(kernel_spec_);
  }

  // out[t - (K-1)] = sum_j kernel[j] signal[t-j] for K-1 <= t < signal_len. A circular
  // transform of length >= signal_len has no wrap-around in this range.
  void valid(std::span<const double> signal, std::span<double> out) {
    std::fill(real_, real_ + size_, 0.0);
    std::copy(signal.begin(), signal.end(), real_);
    fftw_execute(forward_);
    const std::size_t bins = size_ / 2 + 1;
    for (std::size_t k = 0; k < bins; ++k) {
      const double re = spec_[k][0] * kernel_spec_[k][0] - spec_[k][1] * kernel_spec_[k][1];
      const double im = spec_[k][0] * kernel_spec_[k][1] + spec_[k][1] * kernel_spec_[k][0];
      spec_[k][0] = re;
      spec_[k][1] = im;
    }
    fftw_execute(backward_);
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t t = kernel_len_ - 1; t < signal_len_; ++t) {
      out[t - (kernel_len_ - 1)] = real_[t] * scale;
    }
  }

 private:
  std::size_t kernel_len_;
  std::size_t signal_len_;
  std::size_t size_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_complex* kernel_spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// w[t] = sum_{i=1}^n c_{i-k} for k = t + 1 - M, t = 0..n+M-1, where c is `coeffs`
// (c_j = 0 outside 0..M).
std::vector<double> window_weights(std::span<const double> c, std::size_t n) {
  const std::size_t m = c.size() - 1;
  std::vector<double> prefix(c.size() + 1, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) prefix[j + 1] = prefix[j] + c[j];
  std::vector<double> w(n + m);
  for (std::size_t t = 0; t < n + m; ++t) {
    // i - k = i - t - 1 + M ranges over [M - t, n - 1 - t + M] intersected with [0, M].
    const long long lo = std::max<long long>(0, static_cast<long long>(m) - static_cast<long long>(t));
    const long long hi = std::min<long long>(static_cast<long long>(m),
                                             static_cast<long long>(n + m) - 1 - static_cast<long long>(t));
    w[t] = lo <= hi ? prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)] : 0.0;
  }
  return w;
}

std::vector<double> squared(std::span<const double> c) {
  std::vector<double> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j] * c[j];
  return out;
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) s += w[t] * x[t];
  return s;
}

double volterra_direct(int r, std::span<const double> a, std::span<const double> eps,
                       std::size_t n) {
  const std::size_t m = a.size() - 1;
  double total = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    // eps_{i-j} lives at eps[i - j - 1 + M].
    const std::size_t base = i - 1 + m;
    if (r == 1) {
      double x = 0.0;
      for (std::size_t j = 0; j <= m; ++j) x += a[j] * eps[base - j];
      total += x;
    } else {
      double prefix = a[0] * eps[base];
      double u = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const double term = a[j] * eps[base - j];
        u += term * prefix;
        prefix += term;
      }
      total += u;
    }
  }
  return total;
}

// Per-thread state for the r = 2 transform route.
struct QuadraticSampler {
  QuadraticSampler(std::span<const double> a, std::size_t n)
      : conv(a, n + a.size() - 1), diag(window_weights(squared(a), n)), x(n) {}

  double operator()(std::span<const double> eps) {
    conv.valid(eps, x);
    double sum_sq = 0.0;
    for (double v : x) sum_sq += v * v;
    double diag_sum = 0.0;
    for (std::size_t t = 0; t < eps.size(); ++t) diag_sum += diag[t] * eps[t] * eps[t];
    return 0.5 * (sum_sq - diag_sum);
  }

  FftConvolver conv;
  std::vector<double> diag;
  std::vector<double> x;
};

}  // namespace

double volterra_sum(int r, const CoefficientSeq& coeffs, std::span<const double> innovations,
                    std::size_t n, VolterraStrategy strategy) {
  check_order(r);
  const auto a = coeffs.values();
  const std::size_t m = a.size() - 1;
  if (n < 1) throw DomainError("Volterra sum needs n >= 1");
  if (innovations.size() != n + m) {
    throw DomainError(fmt::format("Volterra sum needs n + M = {} innovations, got {}", n + m,
                                  innovations.size()));
  }
  if (strategy == VolterraStrategy::automatic) {
    strategy = n * (m + 1) <= 1'000'000 ? VolterraStrategy::direct : VolterraStrategy::transform;
  }
  if (strategy == VolterraStrategy::direct) return volterra_direct(r, a, innovations, n);
  if (r == 1) return weighted_sum(window_weights(a, n), innovations);
  QuadraticSampler sampler(a, n);
  return sampler(innovations);
}

double volterra_second_moment(int r, const CoefficientSeq& coeffs, std::size_t n,
                              double innovation_variance) {
  check_order(r);
  const auto a = coeffs.values();
  if (r == 1) {
    const auto w = window_weights(a, n);
    double s = 0.0;
    for (double v : w) s += v * v;
    return innovation_variance * s;
  }
  // W(k1, k1-d) = sum_{m} a_m a_{m+d} over m in [max(0, 1-k1), min(M-d, n-k1)].
  const long long m = static_cast<long long>(a.size()) - 1;
  const long long nn = static_cast<long long>(n);
  std::vector<double> prefix(a.size() + 1);
  double total = 0.0;
  for (long long d = 1; d <= m; ++d) {
    prefix[0] = 0.0;
    for (long long j = 0; j <= m - d; ++j) {
      prefix[static_cast<std::size_t>(j) + 1] =
          prefix[static_cast<std::size_t>(j)] + a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(j + d)];
    }
    double sd = 0.0;
    for (long long k1 = 1 - m + d; k1 <= nn; ++k1) {
      const long long lo = std::max(0LL, 1 - k1);
      const long long hi = std::min(m - d, nn - k1);
      if (lo > hi) continue;
      const double w = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
      sd += w * w;
    }
    total += sd;
  }
  return innovation_variance * innovation_variance * total;
}

EmpiricalDist sample_limit(const HermiteSpec& spec, std::size_t reps, std::uint64_t seed,
                           unsigned workers) {
  spec.validate();
  if (reps < 1) throw DomainError("sample_limit needs reps >= 1");
  const CoefficientSeq coeffs(spec.beta, spec.truncation, 1.0,
                              std::numeric_limits<double>::infinity());
  const auto a = coeffs.values();
  const std::size_t len = spec.n + a.size() - 1;
  const double norm = std::sqrt(
      volterra_second_moment(spec.r, coeffs, spec.n, spec.innovations.variance()));

  workers = std::max(1u, workers);
  std::vector<double> draws(reps);
  if (spec.r == 1) {
    const auto w = window_weights(a, spec.n);
    std::vector<std::vector<double>> buffers(workers, std::vector<double>(len));
    parallel_for(reps, workers, [&](std::size_t k, unsigned worker) {
      auto& eps = buffers[worker];
      fill_innovations(spec.innovations, eps, {seed, k});
      draws[k] = weighted_sum(w, eps) / norm;
    });
  } else {
    std::vector<std::unique_ptr<QuadraticSampler>> samplers(workers);
    std::vector<std::vector<double>> buffers(workers, std::vector<double>(len));
    parallel_for(reps, workers, [&](std::size_t k, unsigned worker) {
      if (!samplers[worker]) samplers[worker] = std::make_unique<QuadraticSampler>(a, spec.n);
      auto& eps = buffers[worker];
      fill_innovations(spec.innovations, eps, {seed, k});
      draws[k] = (*samplers[worker])(eps) / norm;
    });
  }
  return EmpiricalDist(std::move(draws));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ZetaAccumulator {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  void add(const quad::Result& r) {
    value += r.value;
    error += r.error;
    converged = converged && r.converged;
  }
};

// r = 1. Inner integral I(u) = ((1-u)^{1-b} - (-u)_+^{1-b}) / (1-b) in closed form.
ZetaAccumulator zeta_order1(double beta, double tol) {
  const double a = 1.0 - beta;
  const double p = 1.0 / (2.0 * beta - 1.0);
  const double piece_tol = tol / 4.0;
  ZetaAccumulator acc;
  // u in [0, 1): I(u)^2 = (1-u)^{2a} / a^2.
  acc.add(quad::integrate([&](double u) { return std::pow(1.0 - u, 2.0 * a) / (a * a); }, 0.0,
                          1.0, piece_tol, 0.0));
  // u = -t, t in (0, 1].
  auto i_neg = [&](double t) { return (std::pow(1.0 + t, a) - std::pow(t, a)) / a; };
  acc.add(quad::integrate([&](double t) { const double v = i_neg(t); return v * v; }, 0.0, 1.0,
                          piece_tol, 0.0));
  // t = z^-p on [1, inf): dt = p t^{2 beta} dz and t^{2 beta} I^2 -> 1, written in s = 1/t.
  acc.add(quad::integrate(
      [&](double z) {
        const double s = std::pow(z, p);
        const double g = s > 0.0 ? std::expm1(a * std::log1p(s)) / (s * a) : 1.0;
        return p * g * g;
      },
      0.0, 1.0, piece_tol, 0.0));
  return acc;
}

// r = 2 with u1 = u2 - d. The inner v-integral
//   J = int_{max(0,u2)}^1 (v-u1)^{-b} (v-u2)^{-b} dv = d^{1-2b} Delta
// uses incomplete beta functions with shape (1-b, 2b-1), or a direct Gauss-Kronrod rule when
// u2 <= -1 (the integrand is then analytic well beyond [0, 1]).
class ZetaOrder2 {
 public:
  ZetaOrder2(double beta, double tol)
      : beta_(beta), a_(1.0 - beta), b_(2.0 * beta - 1.0), q_(1.0 / (3.0 - 4.0 * beta)),
        p_(1.0 / (2.0 * beta - 1.0)), p_outer_(1.0 / (4.0 * beta - 2.0)), tol_(tol) {}

  ZetaAccumulator run() {
    ZetaAccumulator acc;
    const double outer_tol = tol_ / 4.0;
    inner_tol_ = tol_ / 20.0;
    // u2 in [0, 1), rho = 1 - u2 in (0, 1].
    acc.add(quad::integrate([&](double rho) { return inner([&](double d) { return delta_upper(rho, d); }, 1.0); },
                            0.0, 1.0, outer_tol, 0.0, 2000));
    // u2 = -t, t in (0, 1].
    acc.add(quad::integrate([&](double t) { return inner([&](double d) { return delta_lower(t, d); }, 1.0); },
                            0.0, 1.0, outer_tol, 0.0, 2000));
    // t = z^-p' on [1, inf): dt = p' t^{4b-1} dz, and the inner integral decays like t^{1-4b}.
    acc.add(quad::integrate(
        [&](double z) {
          const double t = std::pow(z, -p_outer_);
          if (!std::isfinite(t)) return 0.0;
          return inner([&](double d) { return delta_lower(t, d); },
                       p_outer_ * std::pow(t, 4.0 * beta_ - 1.0));
        },
        0.0, 1.0, outer_tol, 0.0, 2000));
    acc.error += 4.0 * max_inner_error_;
    acc.converged = acc.converged && inner_converged_;
    return acc;
  }

 private:
  // weight * int_0^inf d^{2-4b} Delta(d)^2 dd, split at d = 1:
  //   d = y^q on (0, 1]   -> q Delta^2
  //   d = z^-p on [1, inf) -> p (d^{1-b} Delta)^2
  template <class DeltaFn>
  double inner(const DeltaFn& delta, double weight) {
    const double abs_tol = inner_tol_ / weight;
    const auto near = quad::integrate(
        [&](double y) {
          const double v = delta(std::pow(y, q_));
          return q_ * v * v;
        },
        0.0, 1.0, abs_tol, 0.0, 1000);
    const auto far = quad::integrate(
        [&](double z) {
          const double d = std::pow(z, -p_);
          if (!std::isfinite(d)) return 0.0;
          const double v = std::pow(d, 1.0 - beta_) * delta(d);
          return p_ * v * v;
        },
        0.0, 1.0, abs_tol, 0.0, 1000);
    max_inner_error_ = std::max(max_inner_error_, weight * (near.error + far.error));
    inner_converged_ = inner_converged_ && near.converged && far.converged;
    return weight * (near.value + far.value);
  }

  // u2 = 1 - rho >= 0: Delta = B((1-u2)/(1-u1); a, b).
  double delta_upper(double rho, double d) const {
    return boost::math::beta(a_, b_, rho / (rho + d));
  }

  // u2 = -t < 0.
  double delta_lower(double t, double d) const {
    if (t >= 1.0) {
      // J / d^{1-2b} evaluated by a 15-point Kronrod rule on v in [0, 1].
      const double scale = std::pow(d, 2.0 * beta_ - 1.0);
      const auto seg = quad::detail::gk15(
          [&](double v) { return std::pow(v + t + d, -beta_) * std::pow(v + t, -beta_); }, 0.0,
          1.0);
      return scale * seg.value;
    }
    const double y_lo = d / (t + d);
    const double y_hi = d / (1.0 + t + d);
    if (y_lo <= 0.5) {
      return boost::math::beta(b_, a_, y_lo) - boost::math::beta(b_, a_, y_hi);
    }
    return boost::math::beta(a_, b_, (1.0 + t) / (1.0 + t + d)) -
           boost::math::beta(a_, b_, t / (t + d));
  }

  double beta_, a_, b_, q_, p_, p_outer_, tol_;
  double inner_tol_ = 0.0;
  double max_inner_error_ = 0.0;
  bool inner_converged_ = true;
};

}  // namespace

ZetaConstant zeta(int r, double beta, double tol) {
  check_order(r);
  HermiteSpec window;
  window.r = r;
  window.beta = beta;
  window.validate();
  if (!(tol > 0.0)) throw DomainError("zeta tolerance must be positive");

  const ZetaAccumulator acc = r == 1 ? zeta_order1(beta, tol) : ZetaOrder2(beta, tol).run();
  if (!acc.converged || acc.error > tol) {
    throw ToleranceError(
        fmt::format("zeta(r={}, beta={}) reached error estimate {:.3e}, above tolerance {:.1e}", r,
                    beta, acc.error, tol),
        acc.value, acc.error);
  }
  return {r, beta, acc.value, acc.error};
}

double ks_distance(const EmpiricalDist& d, const std::function<double(double)>& reference) {
  double sup = 0.0;
  const auto v = d.values();
  for (std::size_t k = 0; k < v.size();) {
    std::size_t end = k;
    while (end < v.size() && v[end] == v[k]) ++end;
    const double f = reference(v[k]);
    const double left = static_cast<double>(k) / static_cast<double>(v.size());
    const double right = static_cast<double>(end) / static_cast<double>(v.size());
    sup = std::max({sup, std::abs(left - f), std::abs(right - f)});
    k = end;
  }
  return sup;
}

double ks_distance(const EmpiricalDist& d, const EmpiricalDist& e) {
  std::vector<double> points(d.values().begin(), d.values().end());
  points.insert(points.end(), e.values().begin(), e.values().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double sup = 0.0;
  for (double x : points) {
    sup = std::max({sup, std::abs(d.cdf(x) - e.cdf(x)), std::abs(d.cdf_left(x) - e.cdf_left(x))});
  }
  return sup;
}

}  // namespace bsample
