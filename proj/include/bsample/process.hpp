#pragma once

// Sample paths of Y_i = K(X_i) where X_i = sum_j a_j eps_{i-j} is a causal linear process
// with a_k = c0 (1+k)^-beta truncated at lag M.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsample/rng.hpp"

namespace bsample {

enum class InnovationLaw { gaussian, student_t, rademacher };

struct InnovationSpec {
  InnovationLaw law = InnovationLaw::gaussian;
  int df = 0;  // degrees of freedom, student_t only

  static InnovationSpec gaussian() { return {InnovationLaw::gaussian, 0}; }
  static InnovationSpec student_t(int df) { return {InnovationLaw::student_t, df}; }
  static InnovationSpec rademacher() { return {InnovationLaw::rademacher, 0}; }

  // Throws ConfigError for student_t with df <= 2 (infinite variance).
  void validate() const;
  // E eps^2.
  double variance() const;
  std::string name() const;
};

// iid draws from `spec`; a pure function of (spec, count, stream).
std::vector<double> draw_innovations(const InnovationSpec& spec, std::size_t count,
                                     StreamId stream);

// Fills caller-owned storage; same sequence as draw_innovations for the same StreamId.
void fill_innovations(const InnovationSpec& spec, std::span<double> out, StreamId stream);

inline constexpr std::size_t kDefaultTruncation = 10000;
inline constexpr double kDefaultTailTolerance = 1e-3;

// a_k = c0 (1+k)^-beta for 0 <= k <= M, zero elsewhere.
class CoefficientSeq {
 public:
  // Enforces beta > 1/2, M >= 0 and tail_bound()/total_energy() <= tail_tol.
  // Pass tail_tol = infinity to accept any truncation.
  CoefficientSeq(double beta, std::size_t truncation = kDefaultTruncation, double c0 = 1.0,
                 double tail_tol = kDefaultTailTolerance);

  double beta() const noexcept { return beta_; }
  double c0() const noexcept { return c0_; }
  std::size_t truncation() const noexcept { return values_.size() - 1; }

  double operator()(long long k) const noexcept {
    return (k < 0 || k > static_cast<long long>(truncation())) ? 0.0
                                                               : values_[static_cast<std::size_t>(k)];
  }
  std::span<const double> values() const noexcept { return values_; }

  // sum_{k=0}^{M} a_k^2
  double sum_squares() const noexcept { return sum_squares_; }
  // A_0 = sum_{k>=0} a_k^2 of the untruncated sequence, c0^2 zeta(2 beta).
  double total_energy() const;
  // Closed-form bound on A_M = sum_{k>M} a_k^2: c0^2 M^(1-2beta)/(2beta-1) (infinite for M=0).
  double tail_bound() const;
  double tail_ratio() const { return tail_bound() / total_energy(); }

 private:
  double beta_;
  double c0_;
  std::vector<double> values_;
  double sum_squares_ = 0.0;
};

enum class TransformKind { identity, indicator_leq, square };

struct TransformSpec {
  TransformKind kind = TransformKind::identity;
  double threshold = 0.0;  // indicator_leq only
  int power_rank = 1;

  static TransformSpec identity() { return {TransformKind::identity, 0.0, 1}; }
  static TransformSpec indicator_leq(double t, int power_rank) {
    return {TransformKind::indicator_leq, t, power_rank};
  }
  static TransformSpec square() { return {TransformKind::square, 0.0, 2}; }

  double operator()(double x) const noexcept {
    switch (kind) {
      case TransformKind::identity: return x;
      case TransformKind::indicator_leq: return x <= threshold ? 1.0 : 0.0;
      case TransformKind::square: return x * x;
    }
    return x;
  }
  std::string name() const;
};

struct ModelSpec {
  InnovationSpec innovations;
  CoefficientSeq coeffs;
  TransformSpec transform;
  std::optional<double> mu_known;
  std::string name;  // preset name, or "custom"
};

// Presets "model-i" .. "model-iv":
//   i   K(x)=x,          N(0,1)      p=1
//   ii  K(x)=1{x<=1},    t_7         p=1
//   iii K(x)=1{x<=0},    t_7         p=2
//   iv  K(x)=x^2,        Rademacher  p=2
// Throws ConfigError for an unknown name or a truncation violating tail_tol.
ModelSpec make_preset(std::string_view name, double beta,
                      std::size_t truncation = kDefaultTruncation,
                      double tail_tol = kDefaultTailTolerance);
std::vector<std::string> preset_names();

// Realized path Y_{-past+1}, ..., Y_n; values are stored oldest first.
struct SeriesWindow {
  std::vector<double> values;
  std::size_t n = 0;
  std::size_t past = 0;
  StreamId seed;
  ModelSpec model;

  std::span<const double> observed() const noexcept {
    return std::span<const double>(values).subspan(past, n);
  }
  std::span<const double> past_block() const noexcept {
    return std::span<const double>(values).first(past);
  }
  // Y_i for -past < i <= n.
  double at(long long i) const {
    return values.at(static_cast<std::size_t>(i - 1 + static_cast<long long>(past)));
  }
};

struct GenerationLimits {
  std::size_t max_innovations = 100'000'000;
};

// Y_i = K(sum_{j=0}^{M} a_j eps_{i-j}) for -past < i <= n, using innovations
// eps_{-past+1-M}, ..., eps_n drawn in index order from `stream`.
SeriesWindow simulate_window(const ModelSpec& model, std::size_t n, std::size_t past,
                             StreamId stream, GenerationLimits limits = {});

struct MeanValue {
  double value = 0.0;
  double std_error = 0.0;   // 0 when exact
  std::size_t replicates = 0;  // Monte Carlo draws used, 0 when exact
};

// E K(X_0) for the truncated process. Exact for identity/square transforms and for
// indicator_leq(0) (every supported law is symmetric). Other thresholds use a conditional
// Monte Carlo estimate: the leading `head` lags are drawn and the remaining lags are
// replaced by a centered Gaussian of the same variance.
MeanValue true_mean(const ModelSpec& model, std::size_t mc_draws = 1'000'000,
                    std::uint64_t seed = 0x6d65616eULL, std::size_t head = 64);

// CSV with header "index,y".
void write_series_csv(std::ostream& os, const SeriesWindow& w);

}  // namespace bsample
