#include "bsample/scale_estimators.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bsample/error.hpp"

namespace bsample {

double theoretical_H(int p, double beta) {
  if (p < 1) throw DomainError(fmt::format("power rank must be >= 1, got {}", p));
  if (!(beta > 0.5)) throw DomainError(fmt::format("beta must exceed 1/2, got {}", beta));
  const double memory = p * (2.0 * beta - 1.0);
  if (memory < 1.0) return 1.0 - p * (beta - 0.5);
  if (memory > 1.0) return 0.5;
  throw UnsupportedError(fmt::format(
      "p(2 beta - 1) = 1 (p={}, beta={}) sits on the boundary between the two limit regimes",
      p, beta));
}

ScaleEstimates scales_from(double s_l_tilde, double s_2l_tilde, std::size_t l, std::size_t n) {
  if (!(s_l_tilde > 0.0) || !(s_2l_tilde > 0.0)) {
    throw DegenerateScaleError(fmt::format(
        "block scales must be positive to estimate H (s_l={}, s_2l={}); a constant series has none", s_l_tilde, s_2l_tilde));
  }
  ScaleEstimates e;
  e.s_l_tilde = s_l_tilde;
  e.s_2l_tilde = s_2l_tilde;
  e.l = l;
  e.n = n;
  e.H_hat = (std::log(s_2l_tilde) - std::log(s_l_tilde)) / std::log(2.0);
  e.c0_hat = s_l_tilde / std::pow(static_cast<double>(l), e.H_hat);
  e.sigma_n_hat = std::pow(static_cast<double>(n), e.H_hat) * e.c0_hat;
  return e;
}

ScaleEstimates estimate_scales(const SeriesView& y, std::size_t l, BlockConvention conv) {
  if (l == 0) throw DomainError("block length must be at least 1");
  if (2 * l > y.n()) {
    throw InsufficientDataError(
        fmt::format("two-scale estimation needs 2l <= n (l={}, n={})", l, y.n()));
  }
  const double s_l = std::sqrt(variance_tilde(y, l, conv));
  const double s_2l = std::sqrt(variance_tilde(y, 2 * l, conv));
  return scales_from(s_l, s_2l, l, y.n());
}

std::string to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::two_sided: return "two_sided";
    case IntervalKind::upper_one_sided: return "upper_one_sided";
    case IntervalKind::lower_one_sided: return "lower_one_sided";
  }
  return "unknown";
}

IntervalKind interval_kind_from_string(std::string_view s) {
  if (s == "two_sided") return IntervalKind::two_sided;
  if (s == "upper_one_sided" || s == "upper") return IntervalKind::upper_one_sided;
  if (s == "lower_one_sided" || s == "lower") return IntervalKind::lower_one_sided;
  throw ConfigError(fmt::format("unknown interval kind '{}'", s));
}

ConfidenceInterval interval_from_quantiles(const EmpiricalDist& studentized, double ybar,
                                           double scale, std::size_t n, double alpha,
                                           IntervalKind kind) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw DegenerateScaleError(fmt::format("interval scale {} is not a finite nonnegative value", scale));
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  ConfidenceInterval ci;
  ci.kind = kind;
  ci.level = 1.0 - alpha;
  ci.degenerate = scale == 0.0;
  const double step = scale / static_cast<double>(n);
  auto endpoint = [&](double q_level) {
    return ci.degenerate ? ybar : ybar - studentized.quantile(q_level) * step;
  };
  switch (kind) {
    case IntervalKind::two_sided:
      ci.lo = endpoint(1.0 - alpha / 2.0);
      ci.hi = endpoint(alpha / 2.0);
      break;
    case IntervalKind::upper_one_sided:
      ci.lo = endpoint(1.0 - alpha);
      ci.hi = inf;
      break;
    case IntervalKind::lower_one_sided:
      ci.lo = -inf;
      ci.hi = endpoint(alpha);
      break;
  }
  return ci;
}

HHatAnalysis analyze_h_hat(const SeriesView& y, std::size_t l, BlockConvention conv) {
  auto scales = estimate_scales(y, l, conv);
  auto blocks = f_n_tilde(y, l, conv);
  return {scales, std::move(blocks)};
}

ConfidenceInterval ci_from_analysis(const HHatAnalysis& a, double alpha, IntervalKind kind) {
  return interval_from_quantiles(a.blocks.dist, a.blocks.mean, a.scales.sigma_n_hat, a.scales.n,
                                 alpha, kind);
}

ConfidenceInterval ci_mean(const SeriesView& y, std::size_t l, double alpha, IntervalKind kind,
                           BlockConvention conv) {
  return ci_from_analysis(analyze_h_hat(y, l, conv), alpha, kind);
}

namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void to_json(nlohmann::json& j, const ScaleEstimates& s) {
  j = nlohmann::json{{"s_l_tilde", s.s_l_tilde}, {"s_2l_tilde", s.s_2l_tilde},
                     {"H_hat", s.H_hat},         {"c0_hat", s.c0_hat},
                     {"sigma_n_hat", s.sigma_n_hat}, {"l", s.l},
                     {"n", s.n}};
}

// Infinite endpoints are written as null.
void to_json(nlohmann::json& j, const ConfidenceInterval& ci) {
  j = nlohmann::json{{"kind", to_string(ci.kind)},
                     {"level", ci.level},
                     {"lo", finite_or_null(ci.lo)},
                     {"hi", finite_or_null(ci.hi)},
                     {"degenerate", ci.degenerate}};
}

}  // namespace bsample
