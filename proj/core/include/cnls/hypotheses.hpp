#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnls/nonlinearity.hpp"
#include "cnls/potential.hpp"

namespace cnls {

/// A sampled point at which a check came out worst (or failed).
struct Witness {
  std::string description;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<double> point;
};

/// Result of one sampled check. `worst_slack` is normalised by the magnitude
/// of the terms involved, so it lies in [-1, 1]; negative means violated.
struct CheckOutcome {
  std::string name;
  bool holds = true;
  double worst_slack = 1.0;
  std::size_t samples = 0;
  std::optional<Witness> witness;
  std::string note;
};

struct HypothesisReport {
  std::vector<CheckOutcome> checks;

  const CheckOutcome* find(std::string_view name) const noexcept;
  /// G0-G3 hold, G4 holds in the componentwise or the scalar form, and every
  /// declared optional check (G5, P1, P2) holds.
  bool all_hold() const noexcept;
};

using CouplingFunction = std::function<double(double r, std::span<const double> s)>;

/// Samples the mixed second difference
///   G(r, y + h e_i + k e_j) + G(r, y) - G(r, y + h e_i) - G(r, y + k e_j)  (i != j)
/// and the radial ordering
///   G(r0, y) + G(r1, y + h e_i) - G(r1, y) - G(r0, y + h e_i)  <= 0  (r0 < r1),
/// plus adversarial points on the axes, the diagonal and extreme magnitudes.
/// `radial_breakpoints` concentrates radius samples around coefficient jumps.
CheckOutcome check_supermodular(const CouplingFunction& G, std::size_t components,
                                std::size_t sample_count, std::uint64_t seed,
                                std::span<const double> radial_breakpoints = {});

CheckOutcome check_supermodular(const NonlinearitySpec& spec, std::size_t sample_count,
                                std::uint64_t seed);

/// Sampled validation of G0, G1, G2, G3, G4 (componentwise scale factors),
/// G4_scalar (one common factor), and G5 when lower-bound data is declared.
HypothesisReport check_hypotheses(const NonlinearitySpec& spec, int dimension,
                                  std::size_t sample_count, std::uint64_t seed);

/// P1 (non-negative, non-increasing, vanishing at infinity) and P2 (positive
/// somewhere in (0, 1] for N <= 2; a ball of radius R on which
/// p > j_{N/2-1,1}^2 / R^2 for N >= 3). P2's witness carries `a` or `R`.
std::vector<CheckOutcome> check_potential(const PotentialSpec& potential, int dimension);

}  // namespace cnls
