#pragma once

#include <span>
#include <vector>

namespace cnls {

/// Radial coefficient that is constant between finitely many breakpoints:
/// value(r) = levels[k] for breaks[k-1] <= r < breaks[k].
class PiecewiseConstant {
 public:
  PiecewiseConstant() : levels_{0.0} {}
  /// A single level everywhere.
  explicit PiecewiseConstant(double level) : levels_{level} {}
  /// `breaks` strictly increasing and positive; levels.size() == breaks.size() + 1.
  PiecewiseConstant(std::vector<double> breaks, std::vector<double> levels);

  double operator()(double r) const noexcept;

  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> levels() const noexcept { return levels_; }

  double min_level() const noexcept;
  double max_level() const noexcept;
  /// Level beyond the last breakpoint, i.e. the limit as r -> infinity.
  double tail_level() const noexcept { return levels_.back(); }

  bool is_nonincreasing() const noexcept;
  bool is_zero() const noexcept;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

}  // namespace cnls
