#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cnls/grid.hpp"
#include "cnls/nonlinearity.hpp"

namespace cnls {

/// Both sides of the rearrangement inequalities for one field vector. The
/// l2 and dirichlet entries are sums over components.
struct RearrangementReport {
  double l2_before = 0.0;
  double l2_after = 0.0;
  double dirichlet_before = 0.0;
  double dirichlet_after = 0.0;
  std::optional<double> G_integral_before;
  std::optional<double> G_integral_after;
  std::vector<double> l2_before_per_component;
  std::vector<double> l2_after_per_component;
};

/// Discrete Schwarz symmetrisation of a non-negative radial profile.
///
/// (value, measure) pairs are sorted by value, descending, ties kept in
/// ascending cell order, and laid out again from the origin outwards. Where
/// cell measures differ, each output cell takes the root-mean-square of the
/// sorted pieces it overlaps, so the mass int u^2 is preserved on any grid and
/// the distribution function is preserved exactly on equal-measure grids.
/// Already non-increasing input is returned unchanged.
std::vector<double> schwarz_rearrange(const RadialGrid& grid, std::span<const double> u);

/// schwarz_rearrange applied to every component independently.
FieldVector rearrange_vector(const RadialGrid& grid, const FieldVector& U);

/// |u| for every value of every component.
FieldVector absolute(const FieldVector& U);

/// Evaluates mass, Dirichlet energy and (with a coupling) int G before and
/// after rearranging U. Reports only; the caller decides what to assert.
RearrangementReport verify_inequalities(const RadialGrid& grid, const FieldVector& U,
                                        const NonlinearitySpec* spec = nullptr);

/// True iff u_{j+1} <= u_j + tol for every pair of neighbouring cells.
bool is_schwarz_symmetric(const RadialGrid& grid, std::span<const double> u, double tol);

/// Measure of the super-level set {u > t}.
double level_set_measure(const RadialGrid& grid, std::span<const double> u, double t);

}  // namespace cnls
