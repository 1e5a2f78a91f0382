#include "cnls/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

bool equal_measures(std::span<const double> mu) {
  const double ref = mu.front();
  return std::all_of(mu.begin(), mu.end(),
                     [ref](double v) { return std::abs(v - ref) <= 1e-12 * ref; });
}

}  // namespace

std::vector<double> schwarz_rearrange(const RadialGrid& grid, std::span<const double> u) {
  if (u.size() != grid.size()) throw StructuralError("schwarz_rearrange: field does not match grid");
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(u[j] >= 0.0)) {
      throw PreconditionError("schwarz_rearrange: value at cell " + std::to_string(j) +
                              " is negative or NaN; take absolute values first");
    }
  }
  std::vector<double> out(u.begin(), u.end());
  if (std::is_sorted(out.rbegin(), out.rend())) return out;

  const std::size_t n = u.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

  const auto mu = grid.measures();
  if (equal_measures(mu)) {
    for (std::size_t j = 0; j < n; ++j) out[j] = u[order[j]];
    return out;
  }

  // Merge the sorted pieces [S_k, S_k + mu_{order[k]}) into the target shells.
  std::size_t k = 0;
  double piece_start = 0.0;
  double target_start = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double target_end = (j + 1 == n) ? HUGE_VAL : target_start + mu[j];
    double acc = 0.0;
    while (k < n) {
      const double piece_end = piece_start + mu[order[k]];
      const double overlap = std::min(piece_end, target_end) - std::max(piece_start, target_start);
      if (overlap > 0.0) acc += u[order[k]] * u[order[k]] * overlap;
      if (piece_end <= target_end) {
        piece_start = piece_end;
        ++k;
      } else {
        break;
      }
    }
    out[j] = std::sqrt(acc / mu[j]);
    target_start += mu[j];
  }
  // Clamp ulp-level increases left by averaging.
  for (std::size_t j = 1; j < n; ++j) out[j] = std::min(out[j], out[j - 1]);
  return out;
}

FieldVector rearrange_vector(const RadialGrid& grid, const FieldVector& U) {
  std::vector<std::vector<double>> comps;
  comps.reserve(U.components());
  for (std::size_t i = 0; i < U.components(); ++i) comps.push_back(schwarz_rearrange(grid, U[i]));
  return FieldVector(std::move(comps));
}

FieldVector absolute(const FieldVector& U) {
  FieldVector out = U;
  for (std::size_t i = 0; i < out.components(); ++i) {
    for (auto& v : out[i]) v = std::abs(v);
  }
  return out;
}

RearrangementReport verify_inequalities(const RadialGrid& grid, const FieldVector& U,
                                        const NonlinearitySpec* spec) {
  const FieldVector star = rearrange_vector(grid, U);
  RearrangementReport report;
  for (std::size_t i = 0; i < U.components(); ++i) {
    const double before = mass(grid, U[i]);
    const double after = mass(grid, star[i]);
    report.l2_before_per_component.push_back(before);
    report.l2_after_per_component.push_back(after);
    report.l2_before += before;
    report.l2_after += after;
    report.dirichlet_before += dirichlet_energy(grid, U[i]);
    report.dirichlet_after += dirichlet_energy(grid, star[i]);
  }
  if (spec != nullptr) {
    report.G_integral_before = coupling_integral(grid, *spec, U);
    report.G_integral_after = coupling_integral(grid, *spec, star);
  }
  return report;
}

bool is_schwarz_symmetric(const RadialGrid& grid, std::span<const double> u, double tol) {
  if (u.size() != grid.size()) throw StructuralError("is_schwarz_symmetric: field does not match grid");
  for (std::size_t j = 1; j < u.size(); ++j) {
    if (u[j] > u[j - 1] + tol) return false;
  }
  return true;
}

double level_set_measure(const RadialGrid& grid, std::span<const double> u, double t) {
  if (u.size() != grid.size()) throw StructuralError("level_set_measure: field does not match grid");
  const auto mu = grid.measures();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] > t) sum += mu[j];
  }
  return sum;
}

}  // namespace cnls
