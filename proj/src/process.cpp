#include "bsample/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>
#include <fmt/format.h>

#include "bsample/error.hpp"
#include "bsample/limit_oracle.hpp"

namespace bsample {

void InnovationSpec::validate() const {
  if (law == InnovationLaw::student_t && df <= 2) {
    throw ConfigError(fmt::format(
        "student_t innovations need df >= 3 for finite variance (got df={})", df));
  }
}

double InnovationSpec::variance() const {
  switch (law) {
    case InnovationLaw::gaussian: return 1.0;
    case InnovationLaw::student_t: return static_cast<double>(df) / (df - 2);
    case InnovationLaw::rademacher: return 1.0;
  }
  return 1.0;
}

std::string InnovationSpec::name() const {
  switch (law) {
    case InnovationLaw::gaussian: return "gaussian";
    case InnovationLaw::student_t: return fmt::format("student_t({})", df);
    case InnovationLaw::rademacher: return "rademacher";
  }
  return "unknown";
}

void fill_innovations(const InnovationSpec& spec, std::span<double> out, StreamId stream) {
  spec.validate();
  Xoshiro256 gen(stream);
  switch (spec.law) {
    case InnovationLaw::gaussian: {
      boost::random::normal_distribution<double> dist(0.0, 1.0);
      for (double& v : out) v = dist(gen);
      break;
    }
    case InnovationLaw::student_t: {
      boost::random::student_t_distribution<double> dist(spec.df);
      for (double& v : out) v = dist(gen);
      break;
    }
    case InnovationLaw::rademacher:
      for (double& v : out) v = (gen() >> 63) ? 1.0 : -1.0;
      break;
  }
}

std::vector<double> draw_innovations(const InnovationSpec& spec, std::size_t count,
                                     StreamId stream) {
  std::vector<double> out(count);
  fill_innovations(spec, out, stream);
  return out;
}

CoefficientSeq::CoefficientSeq(double beta, std::size_t truncation, double c0, double tail_tol)
    : beta_(beta), c0_(c0) {
  if (!(beta > 0.5) || !std::isfinite(beta)) {
    throw ConfigError(fmt::format("coefficient decay beta must exceed 1/2 (got {})", beta));
  }
  if (!(c0 != 0.0) || !std::isfinite(c0)) {
    throw ConfigError("coefficient scale c0 must be finite and nonzero");
  }
  values_.resize(truncation + 1);
  for (std::size_t k = 0; k <= truncation; ++k) {
    values_[k] = c0 * std::pow(1.0 + static_cast<double>(k), -beta);
  }
  // Summed from the small end so the tail terms are not absorbed.
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) sum_squares_ += *it * *it;

  const double ratio = tail_ratio();
  if (ratio > tail_tol) {
    throw ConfigError(fmt::format(
        "truncation M={} leaves tail energy bound A_M/A_0 <= {:.3e} above tolerance {:.1e} "
        "for beta={}; raise the truncation or relax the tail tolerance",
        truncation, ratio, tail_tol, beta));
  }
}

double CoefficientSeq::total_energy() const {
  return c0_ * c0_ * boost::math::zeta(2.0 * beta_);
}

double CoefficientSeq::tail_bound() const {
  const std::size_t m = truncation();
  if (m == 0) return std::numeric_limits<double>::infinity();
  return c0_ * c0_ * std::pow(static_cast<double>(m), 1.0 - 2.0 * beta_) / (2.0 * beta_ - 1.0);
}

std::string TransformSpec::name() const {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::indicator_leq: return fmt::format("indicator_leq({})", threshold);
    case TransformKind::square: return "square";
  }
  return "unknown";
}

std::vector<std::string> preset_names() { return {"model-i", "model-ii", "model-iii", "model-iv"}; }

ModelSpec make_preset(std::string_view name, double beta, std::size_t truncation,
                      double tail_tol) {
  auto coeffs = [&] { return CoefficientSeq(beta, truncation, 1.0, tail_tol); };
  if (name == "model-i") {
    return {InnovationSpec::gaussian(), coeffs(), TransformSpec::identity(), std::nullopt,
            std::string(name)};
  }
  if (name == "model-ii") {
    return {InnovationSpec::student_t(7), coeffs(), TransformSpec::indicator_leq(1.0, 1),
            std::nullopt, std::string(name)};
  }
  if (name == "model-iii") {
    return {InnovationSpec::student_t(7), coeffs(), TransformSpec::indicator_leq(0.0, 2),
            std::nullopt, std::string(name)};
  }
  if (name == "model-iv") {
    return {InnovationSpec::rademacher(), coeffs(), TransformSpec::square(), std::nullopt,
            std::string(name)};
  }
  throw ConfigError(fmt::format("unknown model '{}' (expected model-i .. model-iv)", name));
}

namespace {

// Four independent partial sums keep the loop vectorizable while fixing the summation
// order, so results do not depend on compiler flags that reassociate.
double dot(const double* a, const double* b, std::size_t len) noexcept {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < len; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

SeriesWindow simulate_window(const ModelSpec& model, std::size_t n, std::size_t past,
                             StreamId stream, GenerationLimits limits) {
  if (n < 1) throw ConfigError("simulate_window needs n >= 1");
  const std::size_t m = model.coeffs.truncation();
  const std::size_t total = n + past + m;
  if (total > limits.max_innovations) {
    throw ResourceError(fmt::format(
        "n + past + M = {} innovations exceeds the configured cap of {}", total,
        limits.max_innovations));
  }

  // eps[t] holds eps_{t - past + 1 - M}.
  std::vector<double> eps(total);
  fill_innovations(model.innovations, eps, stream);

  std::vector<double> reversed(model.coeffs.values().rbegin(), model.coeffs.values().rend());

  SeriesWindow w{{}, n, past, stream, model};
  w.values.resize(n + past);
  // X_i for output slot s (i = s - past + 1) needs eps_{i-M} .. eps_i = eps[s .. s+M].
  for (std::size_t s = 0; s < n + past; ++s) {
    w.values[s] = model.transform(dot(reversed.data(), eps.data() + s, m + 1));
  }
  return w;
}

MeanValue true_mean(const ModelSpec& model, std::size_t mc_draws, std::uint64_t seed,
                    std::size_t head) {
  if (model.mu_known) return {*model.mu_known, 0.0, 0};
  const double var_eps = model.innovations.variance();
  switch (model.transform.kind) {
    case TransformKind::identity: return {0.0, 0.0, 0};
    case TransformKind::square: return {var_eps * model.coeffs.sum_squares(), 0.0, 0};
    case TransformKind::indicator_leq: break;
  }
  const double t = model.transform.threshold;
  if (t == 0.0) return {0.5, 0.0, 0};
  if (mc_draws < 2) throw ConfigError("true_mean needs at least 2 Monte Carlo draws");

  const auto a = model.coeffs.values();
  const std::size_t h = std::min(head, a.size());
  double tail_var = 0.0;
  for (std::size_t k = a.size(); k-- > h;) tail_var += a[k] * a[k];
  tail_var *= var_eps;
  const double tail_sd = std::sqrt(tail_var);

  std::vector<double> eps(h);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t d = 0; d < mc_draws; ++d) {
    fill_innovations(model.innovations, eps, {seed, d});
    const double x = dot(a.data(), eps.data(), h);
    const double p = tail_sd > 0.0 ? normal_cdf((t - x) / tail_sd) : (x <= t ? 1.0 : 0.0);
    const double delta = p - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (p - mean);
  }
  const double var = m2 / static_cast<double>(mc_draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(mc_draws)), mc_draws};
}

void write_series_csv(std::ostream& os, const SeriesWindow& w) {
  os << "index,y\n";
  const long long first = 1 - static_cast<long long>(w.past);
  for (std::size_t s = 0; s < w.values.size(); ++s) {
    os << fmt::format("{},{:.17g}\n", first + static_cast<long long>(s), w.values[s]);
  }
}

}  // namespace bsample
