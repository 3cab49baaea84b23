#include "bsample/empirical_dist.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "bsample/error.hpp"

namespace bsample {

EmpiricalDist::EmpiricalDist(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw DomainError("empirical distribution needs at least one value");
  if (std::any_of(sorted_.begin(), sorted_.end(), [](double v) { return std::isnan(v); })) {
    throw DomainError("empirical distribution received a NaN value");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t EmpiricalDist::count_leq(double x) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), x) -
                                  sorted_.begin());
}

std::size_t EmpiricalDist::count_less(double x) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), x) -
                                  sorted_.begin());
}

double EmpiricalDist::cdf(double x) const noexcept {
  return static_cast<double>(count_leq(x)) / static_cast<double>(size());
}

double EmpiricalDist::cdf_left(double x) const noexcept {
  return static_cast<double>(count_less(x)) / static_cast<double>(size());
}

double EmpiricalDist::quantile(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError(fmt::format("quantile level must lie in (0, 1], got {}", alpha));
  }
  // Smallest k with k/m >= alpha, using the same division as cdf() so that
  // quantile(a) <= x  <=>  a <= cdf(x) holds exactly in floating point.
  const double m = static_cast<double>(size());
  auto k = static_cast<std::size_t>(std::ceil(alpha * m));
  k = std::clamp<std::size_t>(k, 1, size());
  while (k > 1 && static_cast<double>(k - 1) / m >= alpha) --k;
  while (k < size() && static_cast<double>(k) / m < alpha) ++k;
  return sorted_[k - 1];
}

double EmpiricalDist::mean() const noexcept {
  double s = 0.0;
  for (double v : sorted_) s += v;
  return s / static_cast<double>(size());
}

double EmpiricalDist::variance() const noexcept {
  if (size() < 2) return 0.0;
  const double mu = mean();
  double s = 0.0;
  for (double v : sorted_) s += (v - mu) * (v - mu);
  return s / static_cast<double>(size() - 1);
}

void write_csv(std::ostream& os, const EmpiricalDist& d) {
  os << "value\n";
  for (double v : d.values()) os << fmt::format("{:.17g}\n", v);
}

}  // namespace bsample
