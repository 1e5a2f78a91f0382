#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cnls {

/// Volume of the unit ball in R^N (N = 1: 2, N = 2: pi, N = 3: 4pi/3).
double unit_ball_volume(int dimension);

/// Cell-centred discretisation of the radial half-line [0, r_max] standing in
/// for R^N. Cell j covers the shell e_j <= |x| < e_{j+1}; its value lives at
/// the midpoint and its measure is the shell volume V_N (e_{j+1}^N - e_j^N).
///
/// The outermost cell is the Dirichlet boundary cell: fields fed to the
/// minimiser are held at zero there.
class RadialGrid {
 public:
  static constexpr std::size_t kMinCells = 8;

  /// Uniform spacing h = r_max / cells.
  static RadialGrid uniform(int dimension, std::size_t cells, double r_max);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return centers_.size(); }
  double r_max() const noexcept { return edges_.back(); }

  /// Cell midpoints, strictly increasing and positive.
  std::span<const double> centers() const noexcept { return centers_; }
  /// Cell boundaries e_0 = 0 < e_1 < ... < e_M = r_max (size M + 1).
  std::span<const double> edges() const noexcept { return edges_; }
  /// Shell volumes mu_j.
  std::span<const double> measures() const noexcept { return measures_; }

  /// Surface measure of the sphere |x| = e_k, i.e. N V_N e_k^{N-1}.
  double interface_area(std::size_t edge) const noexcept { return areas_[edge]; }

  /// Total measure V_N r_max^N of the truncated domain.
  double total_measure() const noexcept;

  /// Measure of the ball of radius e_k (cumulative over the first k cells).
  double ball_measure(std::size_t edge) const noexcept;

  /// Index of the cell containing radius r (clamped to the last cell).
  std::size_t cell_of(double r) const noexcept;

 private:
  RadialGrid(int dimension, std::vector<double> edges);

  int dimension_{};
  std::vector<double> edges_;
  std::vector<double> centers_;
  std::vector<double> measures_;
  std::vector<double> areas_;
};

/// m grid functions u_1..u_m on a common grid.
class FieldVector {
 public:
  FieldVector() = default;
  FieldVector(std::size_t components, std::size_t cells, double fill = 0.0);
  explicit FieldVector(std::vector<std::vector<double>> components);

  std::size_t components() const noexcept { return data_.size(); }
  std::size_t cells() const noexcept { return data_.empty() ? 0 : data_.front().size(); }

  std::span<double> operator[](std::size_t i) { return data_[i]; }
  std::span<const double> operator[](std::size_t i) const { return data_[i]; }

  /// Throws NumericError if any value is NaN or infinite.
  void require_finite() const;

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  std::vector<std::vector<double>> data_;
};

/// Sum of f_j mu_j over cells in ascending order.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// Integral of u^2.
double mass(const RadialGrid& grid, std::span<const double> u);

/// Discrete integral of |grad u|^2: one-sided differences between adjacent
/// cells, weighted by the interface area. No boundary term is included, so
/// constants have zero energy.
double dirichlet_energy(const RadialGrid& grid, std::span<const double> u);

/// Flux-form radial Laplacian u'' + (N-1)/r u'. Zero flux through the origin,
/// homogeneous Dirichlet value at r_max (half a cell beyond the last centre).
/// For u vanishing in the outermost cell,
///   integrate(u * -laplacian(u)) == dirichlet_energy(u).
std::vector<double> apply_laplacian(const RadialGrid& grid, std::span<const double> u);

/// Solves (shift * I - Laplacian) x = rhs on the free cells (all but the
/// outermost); the outermost entry of the result is zero. Tridiagonal sweep.
std::vector<double> solve_shifted_laplacian(const RadialGrid& grid, double shift,
                                            std::span<const double> rhs);

}  // namespace cnls
