#pragma once

#include <optional>
#include <vector>

#include "cnls/grid.hpp"
#include "cnls/nonlinearity.hpp"
#include "cnls/potential.hpp"

namespace cnls {

/// Everything that defines one minimisation problem: the grid, the coupling,
/// the prescribed masses c_i and an optional trap potential.
class ProblemInstance {
 public:
  ProblemInstance(RadialGrid grid, NonlinearitySpec spec, std::vector<double> masses,
                  std::optional<PotentialSpec> potential = std::nullopt);

  const RadialGrid& grid() const noexcept { return grid_; }
  const NonlinearitySpec& spec() const noexcept { return spec_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::optional<PotentialSpec>& potential() const noexcept { return potential_; }
  std::size_t components() const noexcept { return masses_.size(); }
  double total_mass() const noexcept;

  /// Throws StructuralError unless U has m components on this grid.
  void require_compatible(const FieldVector& U) const;

 private:
  RadialGrid grid_;
  NonlinearitySpec spec_;
  std::vector<double> masses_;
  std::optional<PotentialSpec> potential_;
};

/// total = 1/2 sum kinetic_i - potential_term - coupling_term, where
/// potential_term = 1/2 int p sum u_i^2 (zero without a potential).
struct EnergyBreakdown {
  std::vector<double> kinetic;
  double potential_term = 0.0;
  double coupling_term = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const ProblemInstance& instance, const FieldVector& U);

/// L^2 gradient of the energy: -Laplacian u_i - dG/du_i - p u_i, where
/// dG/du_i = g_i(|x|, u^2) u_i. The outermost (Dirichlet) cell is held fixed,
/// so its gradient entry is zero.
FieldVector energy_gradient(const ProblemInstance& instance, const FieldVector& U);

/// Weak-form multipliers lambda_i of Laplacian u + lambda u + g u (+ p u) = 0:
///   lambda_i = (|grad u_i|^2 - int (g_i + p) u_i^2) / int u_i^2.
/// Bound states have lambda_i < 0. Zero-mass components are a PreconditionError.
std::vector<double> lagrange_multipliers(const ProblemInstance& instance, const FieldVector& U);

/// Discrete L^2 norm of Laplacian u_i + lambda_i u_i + g_i u_i (+ p u_i) over
/// the free cells (the outermost cell carries the boundary condition).
std::vector<double> residual_norm(const ProblemInstance& instance, const FieldVector& U,
                                  const std::vector<double>& lambda);

/// Explicit lower bound for the energy on the mass sphere from the growth
/// bound and the Gagliardo-Nirenberg inequality |u|_{l+2} <= C |u|_2^{1-s} |grad u|_2^s.
///
/// epsilon solves 1/2 - K m sum (N l_i / 4) eps^{4/(N l_i)} = 1/4 and the bound is
///   -K c - K sum_i (1/q_i) (C^{l_i+2} c_i^{(1-s_i)(l_i+2)/2} / eps)^{q_i},
/// with c = sum c_i, s_i = N l_i / (2 (l_i + 2)) and q_i conjugate to 4/(N l_i).
/// C = 1 is a valid constant for N <= 3 in the subcritical range.
double coercivity_bound(const ProblemInstance& instance, double gn_constant = 1.0);

}  // namespace cnls
