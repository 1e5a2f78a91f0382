#pragma once

#include "cnls/piecewise.hpp"

namespace cnls {

/// Trap potential p(|x|) entering the modified energy through -1/2 int p |U|^2.
/// Any piecewise-constant profile is representable; whether it is admissible
/// (non-negative, non-increasing, decaying) is decided by check_potential.
struct PotentialSpec {
  PiecewiseConstant profile;

  double operator()(double r) const noexcept { return profile(r); }
};

}  // namespace cnls
