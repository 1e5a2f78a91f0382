#include "cnls/energy.hpp"

#include <cmath>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

ProblemInstance::ProblemInstance(RadialGrid grid, NonlinearitySpec spec, std::vector<double> masses,
                                 std::optional<PotentialSpec> potential)
    : grid_(std::move(grid)),
      spec_(std::move(spec)),
      masses_(std::move(masses)),
      potential_(std::move(potential)) {
  if (masses_.size() != spec_.components()) {
    throw StructuralError("expected " + std::to_string(spec_.components()) + " masses, got " +
                          std::to_string(masses_.size()));
  }
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i])) {
      throw PreconditionError("mass c_" + std::to_string(i + 1) + " must be positive");
    }
  }
}

double ProblemInstance::total_mass() const noexcept {
  double c = 0.0;
  for (double v : masses_) c += v;
  return c;
}

void ProblemInstance::require_compatible(const FieldVector& U) const {
  if (U.components() != components()) {
    throw StructuralError("field has " + std::to_string(U.components()) + " components, problem has " +
                          std::to_string(components()));
  }
  if (U.cells() != grid_.size()) {
    throw StructuralError("field has " + std::to_string(U.cells()) + " cells, grid has " +
                          std::to_string(grid_.size()));
  }
}

EnergyBreakdown energy(const ProblemInstance& instance, const FieldVector& U) {
  instance.require_compatible(U);
  const auto& grid = instance.grid();
  EnergyBreakdown out;
  double kinetic_sum = 0.0;
  for (std::size_t i = 0; i < U.components(); ++i) {
    out.kinetic.push_back(dirichlet_energy(grid, U[i]));
    kinetic_sum += out.kinetic.back();
  }
  if (const auto& pot = instance.potential()) {
    const auto r = grid.centers();
    const auto mu = grid.measures();
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      double u2 = 0.0;
      for (std::size_t i = 0; i < U.components(); ++i) u2 += U[i][j] * U[i][j];
      sum += mu[j] * (*pot)(r[j]) * u2;
    }
    out.potential_term = 0.5 * sum;
  }
  out.coupling_term = coupling_integral(grid, instance.spec(), U);
  out.total = 0.5 * kinetic_sum - out.potential_term - out.coupling_term;
  return out;
}

namespace {

// dG/du_i at every cell, with the sign of u_i restored.
std::vector<double> coupling_force(const ProblemInstance& instance, const FieldVector& U,
                                   std::size_t i) {
  const auto& grid = instance.grid();
  const auto& spec = instance.spec();
  std::vector<double> out(grid.size(), 0.0);
  if (spec.is_zero()) return out;
  const auto r = grid.centers();
  std::vector<double> s(U.components());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::abs(U[k][j]);
    const double d = spec.partial(i, r[j], s);
    out[j] = U[i][j] < 0.0 ? -d : d;
  }
  return out;
}

}  // namespace

FieldVector energy_gradient(const ProblemInstance& instance, const FieldVector& U) {
  instance.require_compatible(U);
  const auto& grid = instance.grid();
  const auto r = grid.centers();
  FieldVector grad(U.components(), grid.size());
  for (std::size_t i = 0; i < U.components(); ++i) {
    const auto lap = apply_laplacian(grid, U[i]);
    const auto force = coupling_force(instance, U, i);
    auto gi = grad[i];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      gi[j] = -lap[j] - force[j];
      if (const auto& pot = instance.potential()) gi[j] -= (*pot)(r[j]) * U[i][j];
    }
    gi[grid.size() - 1] = 0.0;
  }
  return grad;
}

std::vector<double> lagrange_multipliers(const ProblemInstance& instance, const FieldVector& U) {
  instance.require_compatible(U);
  const auto& grid = instance.grid();
  const auto r = grid.centers();
  const auto mu = grid.measures();
  std::vector<double> lambda(U.components());
  for (std::size_t i = 0; i < U.components(); ++i) {
    const double c = mass(grid, U[i]);
    if (!(c > 0.0)) {
      throw PreconditionError("lagrange_multipliers: component " + std::to_string(i + 1) +
                              " has zero mass");
    }
    const auto force = coupling_force(instance, U, i);
    double nonlinear = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      // g_i u_i^2 == (dG/du_i) u_i
      double term = force[j] * U[i][j];
      if (const auto& pot = instance.potential()) term += (*pot)(r[j]) * U[i][j] * U[i][j];
      nonlinear += mu[j] * term;
    }
    lambda[i] = (dirichlet_energy(grid, U[i]) - nonlinear) / c;
  }
  return lambda;
}

std::vector<double> residual_norm(const ProblemInstance& instance, const FieldVector& U,
                                  const std::vector<double>& lambda) {
  instance.require_compatible(U);
  if (lambda.size() != U.components()) throw StructuralError("residual_norm: one multiplier per component");
  const auto& grid = instance.grid();
  const auto r = grid.centers();
  const auto mu = grid.measures();
  std::vector<double> out(U.components());
  for (std::size_t i = 0; i < U.components(); ++i) {
    const auto lap = apply_laplacian(grid, U[i]);
    const auto force = coupling_force(instance, U, i);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
      double res = lap[j] + lambda[i] * U[i][j] + force[j];
      if (const auto& pot = instance.potential()) res += (*pot)(r[j]) * U[i][j];
      sum += mu[j] * res * res;
    }
    out[i] = std::sqrt(sum);
  }
  return out;
}

double coercivity_bound(const ProblemInstance& instance, double gn_constant) {
  const auto& spec = instance.spec();
  const auto& growth = spec.growth();
  const int n_dim = instance.grid().dimension();
  if (spec.is_zero() || growth.K == 0.0) return 0.0;
  if (!(gn_constant > 0.0)) throw PreconditionError("coercivity_bound: Gagliardo-Nirenberg constant must be positive");

  const double K = growth.K;
  const auto m = static_cast<double>(instance.components());
  const double critical = 4.0 / n_dim;
  for (std::size_t i = 0; i < growth.ell.size(); ++i) {
    if (!(growth.ell[i] > 0.0 && growth.ell[i] < critical)) {
      throw PreconditionError("coercivity_bound: ell_" + std::to_string(i + 1) + " = " +
                              std::to_string(growth.ell[i]) +
                              " is not below 4/N; the energy is then unbounded below for supercritical growth");
    }
  }

  // phi(eps) = K m sum (N l_i/4) eps^{4/(N l_i)} is increasing; solve phi = 1/4 by bisection on log eps.
  auto phi = [&](double eps) {
    double sum = 0.0;
    for (double l : growth.ell) sum += n_dim * l / 4.0 * std::pow(eps, 4.0 / (n_dim * l));
    return K * m * sum;
  };
  double lo = 1e-300, hi = 1.0;
  while (phi(hi) < 0.25) hi *= 2.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo * hi);
    (phi(mid) < 0.25 ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  const double eps = std::sqrt(lo * hi);

  double bound = -K * instance.total_mass();
  for (std::size_t i = 0; i < growth.ell.size(); ++i) {
    const double l = growth.ell[i];
    const double sigma = 0.5 * n_dim * l / (l + 2.0);
    const double p = 4.0 / (n_dim * l);
    const double q = p / (p - 1.0);
    const double a = std::pow(gn_constant, l + 2.0) *
                     std::pow(instance.masses()[i], 0.5 * (1.0 - sigma) * (l + 2.0));
    bound -= K / q * std::pow(a / eps, q);
  }
  return bound;
}

}  // namespace cnls
