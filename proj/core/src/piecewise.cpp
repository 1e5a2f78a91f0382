#include "cnls/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "cnls/errors.hpp"

namespace cnls {

PiecewiseConstant::PiecewiseConstant(std::vector<double> breaks, std::vector<double> levels)
    : breaks_(std::move(breaks)), levels_(std::move(levels)) {
  if (levels_.size() != breaks_.size() + 1) {
    throw StructuralError("piecewise coefficient needs exactly one more level than breakpoints");
  }
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    if (!(breaks_[k] > 0.0) || !std::isfinite(breaks_[k]) ||
        (k > 0 && !(breaks_[k] > breaks_[k - 1]))) {
      throw StructuralError("breakpoints must be positive, finite and strictly increasing");
    }
  }
  for (double v : levels_) {
    if (!std::isfinite(v)) throw StructuralError("piecewise levels must be finite");
  }
}

double PiecewiseConstant::operator()(double r) const noexcept {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  return levels_[static_cast<std::size_t>(it - breaks_.begin())];
}

double PiecewiseConstant::min_level() const noexcept {
  return *std::min_element(levels_.begin(), levels_.end());
}

double PiecewiseConstant::max_level() const noexcept {
  return *std::max_element(levels_.begin(), levels_.end());
}

bool PiecewiseConstant::is_nonincreasing() const noexcept {
  return std::is_sorted(levels_.rbegin(), levels_.rend());
}

bool PiecewiseConstant::is_zero() const noexcept {
  return std::all_of(levels_.begin(), levels_.end(), [](double v) { return v == 0.0; });
}

}  // namespace cnls
