#include "cnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

void require_cells(const RadialGrid& grid, std::span<const double> f, const char* what) {
  if (f.size() != grid.size()) {
    throw StructuralError(std::string(what) + ": field has " + std::to_string(f.size()) +
                          " values, grid has " + std::to_string(grid.size()) + " cells");
  }
}

}  // namespace

double unit_ball_volume(int dimension) {
  switch (dimension) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi / 3.0;
    default:
      throw StructuralError("dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
}

RadialGrid RadialGrid::uniform(int dimension, std::size_t cells, double r_max) {
  if (cells < kMinCells) {
    throw StructuralError("grid needs at least " + std::to_string(kMinCells) + " cells");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw StructuralError("r_max must be positive and finite");
  }
  std::vector<double> edges(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    edges[k] = r_max * static_cast<double>(k) / static_cast<double>(cells);
  }
  edges.back() = r_max;
  return RadialGrid(dimension, std::move(edges));
}

RadialGrid::RadialGrid(int dimension, std::vector<double> edges)
    : dimension_(dimension), edges_(std::move(edges)) {
  const double vn = unit_ball_volume(dimension_);
  const std::size_t m = edges_.size() - 1;
  centers_.resize(m);
  measures_.resize(m);
  areas_.resize(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    centers_[j] = 0.5 * (edges_[j] + edges_[j + 1]);
    measures_[j] = vn * (std::pow(edges_[j + 1], dimension_) - std::pow(edges_[j], dimension_));
  }
  for (std::size_t k = 0; k <= m; ++k) {
    areas_[k] = vn * dimension_ * std::pow(edges_[k], dimension_ - 1);
  }
}

double RadialGrid::total_measure() const noexcept {
  return unit_ball_volume(dimension_) * std::pow(r_max(), dimension_);
}

double RadialGrid::ball_measure(std::size_t edge) const noexcept {
  return unit_ball_volume(dimension_) * std::pow(edges_[edge], dimension_);
}

std::size_t RadialGrid::cell_of(double r) const noexcept {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
  if (it == edges_.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - edges_.begin()) - 1, size() - 1);
}

FieldVector::FieldVector(std::size_t components, std::size_t cells, double fill)
    : data_(components, std::vector<double>(cells, fill)) {
  if (components == 0) throw StructuralError("a field vector needs at least one component");
}

FieldVector::FieldVector(std::vector<std::vector<double>> components)
    : data_(std::move(components)) {
  if (data_.empty()) throw StructuralError("a field vector needs at least one component");
  for (const auto& c : data_) {
    if (c.size() != data_.front().size()) {
      throw StructuralError("field components have different lengths");
    }
  }
}

void FieldVector::require_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    for (std::size_t j = 0; j < data_[i].size(); ++j) {
      if (!std::isfinite(data_[i][j])) {
        throw NumericError("non-finite value in component " + std::to_string(i + 1) +
                           " at cell " + std::to_string(j));
      }
    }
  }
}

double integrate(const RadialGrid& grid, std::span<const double> f) {
  require_cells(grid, f, "integrate");
  const auto mu = grid.measures();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * mu[j];
  return sum;
}

double mass(const RadialGrid& grid, std::span<const double> u) {
  require_cells(grid, u, "mass");
  const auto mu = grid.measures();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * u[j] * mu[j];
  return sum;
}

double dirichlet_energy(const RadialGrid& grid, std::span<const double> u) {
  require_cells(grid, u, "dirichlet_energy");
  const auto c = grid.centers();
  double sum = 0.0;
  for (std::size_t k = 1; k < u.size(); ++k) {
    const double du = u[k] - u[k - 1];
    sum += grid.interface_area(k) * du * du / (c[k] - c[k - 1]);
  }
  return sum;
}

std::vector<double> apply_laplacian(const RadialGrid& grid, std::span<const double> u) {
  require_cells(grid, u, "apply_laplacian");
  if (u.size() < 3) throw StructuralError("apply_laplacian needs at least 3 cells");
  const std::size_t m = u.size();
  const auto c = grid.centers();
  const auto mu = grid.measures();

  // flux[k] = A_k du/dr across edge k; flux[0] = 0 at the origin.
  std::vector<double> flux(m + 1, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    flux[k] = grid.interface_area(k) * (u[k] - u[k - 1]) / (c[k] - c[k - 1]);
  }
  flux[m] = grid.interface_area(m) * (0.0 - u[m - 1]) / (grid.r_max() - c[m - 1]);

  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = (flux[j + 1] - flux[j]) / mu[j];
  return out;
}

std::vector<double> solve_shifted_laplacian(const RadialGrid& grid, double shift,
                                            std::span<const double> rhs) {
  require_cells(grid, rhs, "solve_shifted_laplacian");
  if (!(shift > 0.0)) throw PreconditionError("shift must be positive");
  const std::size_t n = rhs.size() - 1;  // free cells
  const auto c = grid.centers();
  const auto mu = grid.measures();

  // Row j: (shift mu_j + w_j + w_{j+1}) x_j - w_j x_{j-1} - w_{j+1} x_{j+1} = mu_j rhs_j
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) w[k] = grid.interface_area(k) / (c[k] - c[k - 1]);

  std::vector<double> cprime(n), dprime(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double diag = shift * mu[j] + w[j] + w[j + 1];
    const double lower = (j > 0) ? -w[j] : 0.0;
    const double upper = -w[j + 1];
    const double denom = diag - lower * (j > 0 ? cprime[j - 1] : 0.0);
    cprime[j] = upper / denom;
    dprime[j] = (mu[j] * rhs[j] - lower * (j > 0 ? dprime[j - 1] : 0.0)) / denom;
  }
  std::vector<double> x(n + 1, 0.0);
  x[n - 1] = dprime[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) x[j] = dprime[j] - cprime[j] * x[j + 1];
  return x;
}

}  // namespace cnls
