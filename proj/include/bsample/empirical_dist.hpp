#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace bsample {

// Empirical distribution of a finite multiset of reals. Immutable after construction.
class EmpiricalDist {
 public:
  // Sorts a copy of `values`. Throws DomainError when empty or when a value is NaN.
  explicit EmpiricalDist(std::vector<double> values);

  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> values() const noexcept { return sorted_; }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

  // #{v <= x}, counted with multiplicity.
  std::size_t count_leq(double x) const noexcept;
  // #{v < x}
  std::size_t count_less(double x) const noexcept;

  // Right-continuous step CDF, count_leq(x) / m.
  double cdf(double x) const noexcept;
  // Left limit of the CDF at x, count_less(x) / m.
  double cdf_left(double x) const noexcept;

  // inf{x : cdf(x) >= alpha}; throws DomainError unless 0 < alpha <= 1.
  double quantile(double alpha) const;

  double mean() const noexcept;
  double variance() const noexcept;  // divisor m - 1; 0 for a single atom

  friend bool operator==(const EmpiricalDist&, const EmpiricalDist&) = default;

 private:
  std::vector<double> sorted_;
};

// One sorted value per line under a "value" header.
void write_csv(std::ostream& os, const EmpiricalDist& d);

}  // namespace bsample
