#include "cnls/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cnls/certificates.hpp"
#include "cnls/symmetrize.hpp"

namespace cnls {

namespace {

constexpr std::size_t kAttainmentWindow = 200;
constexpr int kAttainmentStrikes = 3;

double inner(const RadialGrid& grid, std::span<const double> a, std::span<const double> b) {
  const auto mu = grid.measures();
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j] * mu[j];
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double scale_of(double e) { return std::max(1.0, std::abs(e)); }

void pin_boundary(FieldVector& U) {
  for (std::size_t i = 0; i < U.components(); ++i) U[i].back() = 0.0;
}

double outer_mass_fraction(const ProblemInstance& instance, const FieldVector& U) {
  const auto& grid = instance.grid();
  const auto r = grid.centers();
  const auto mu = grid.measures();
  const double half = 0.5 * grid.r_max();
  double outer = 0.0, total = 0.0;
  for (std::size_t i = 0; i < U.components(); ++i) {
    for (std::size_t j = 0; j < U.cells(); ++j) {
      const double w = U[i][j] * U[i][j] * mu[j];
      total += w;
      if (r[j] > half) outer += w;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

double checked_energy(const ProblemInstance& instance, const FieldVector& U, std::size_t iteration) {
  const double e = energy(instance, U).total;
  if (!std::isfinite(e)) {
    std::ostringstream msg;
    msg << "non-finite energy at iteration " << iteration;
    throw DivergenceError(msg.str(), U, iteration);
  }
  return e;
}

FieldVector descent_direction(const ProblemInstance& instance, const SolveConfig& config,
                              const FieldVector& U, const FieldVector& grad) {
  const auto& grid = instance.grid();
  FieldVector d(U.components(), U.cells());
  for (std::size_t i = 0; i < U.components(); ++i) {
    if (config.preconditioner == Preconditioner::Sobolev) {
      const auto pg = solve_shifted_laplacian(grid, config.preconditioner_shift, grad[i]);
      const auto pu = solve_shifted_laplacian(grid, config.preconditioner_shift, U[i]);
      const double coef = inner(grid, U[i], pg) / inner(grid, U[i], pu);
      for (std::size_t j = 0; j < U.cells(); ++j) d[i][j] = pg[j] - coef * pu[j];
    } else {
      const double coef = inner(grid, U[i], grad[i]) / inner(grid, U[i], U[i]);
      for (std::size_t j = 0; j < U.cells(); ++j) d[i][j] = grad[i][j] - coef * U[i][j];
    }
    d[i].back() = 0.0;
  }
  return d;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(initial_step > 0.0)) throw PreconditionError("solver: initial step must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw PreconditionError("solver: backtracking factor must lie in (0, 1)");
  }
  if (!(step_growth >= 1.0)) throw PreconditionError("solver: step growth must be at least 1");
  if (!(max_step >= initial_step)) throw PreconditionError("solver: max step must be at least the initial step");
  if (!(min_step > 0.0 && min_step < initial_step)) throw PreconditionError("solver: min step must lie in (0, initial step)");
  if (max_iterations == 0) throw PreconditionError("solver: max iterations must be positive");
  if (!(energy_tolerance > 0.0)) throw PreconditionError("solver: energy tolerance must be positive");
  if (!(residual_tolerance > 0.0)) throw PreconditionError("solver: residual tolerance must be positive");
  if (!(initial_alpha > 0.0)) throw PreconditionError("solver: initial alpha must be positive");
  if (!(preconditioner_shift > 0.0)) throw PreconditionError("solver: preconditioner shift must be positive");
  if (initial_guess == InitialGuess::Given && !given) {
    throw PreconditionError("solver: initial guess 'given' needs a field");
  }
}

FieldVector project_to_constraint(const ProblemInstance& instance, const FieldVector& U) {
  instance.require_compatible(U);
  FieldVector out(U);
  for (std::size_t i = 0; i < U.components(); ++i) {
    const double norm2 = mass(instance.grid(), U[i]);
    if (!(norm2 > 0.0)) throw PreconditionError("project_to_constraint: component has zero norm");
    const double s = std::sqrt(instance.masses()[i] / norm2);
    for (auto& v : out[i]) v *= s;
  }
  return out;
}

FieldVector gaussian_field(const ProblemInstance& instance, double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("gaussian_field: alpha must be positive");
  const auto& grid = instance.grid();
  FieldVector U(instance.components(), grid.size());
  const auto r = grid.centers();
  for (std::size_t i = 0; i < U.components(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) U[i][j] = std::exp(-alpha * r[j] * r[j]);
  }
  pin_boundary(U);
  return project_to_constraint(instance, U);
}

FieldVector initial_guess(const ProblemInstance& instance, const SolveConfig& config) {
  config.validate();
  switch (config.initial_guess) {
    case InitialGuess::Gaussian:
      return gaussian_field(instance, config.initial_alpha);
    case InitialGuess::Given: {
      instance.require_compatible(*config.given);
      config.given->require_finite();
      FieldVector U(*config.given);
      pin_boundary(U);
      return project_to_constraint(instance, U);
    }
    case InitialGuess::RandomPositive: {
      std::mt19937_64 rng(config.seed);
      std::uniform_real_distribution<double> jitter(0.5, 1.5);
      FieldVector U = gaussian_field(instance, config.initial_alpha);
      for (std::size_t i = 0; i < U.components(); ++i) {
        for (auto& v : U[i]) v *= jitter(rng);
      }
      pin_boundary(U);
      return project_to_constraint(instance, U);
    }
  }
  throw PreconditionError("solver: unknown initial guess");
}

SolveResult solve(const ProblemInstance& instance, const SolveConfig& config) {
  config.validate();
  SolveResult res;
  FieldVector U = initial_guess(instance, config);
  double E = checked_energy(instance, U, 0);
  res.energy_history.push_back(E);

  double tau = config.initial_step;
  std::size_t accepted = 0;
  double last_fraction = outer_mass_fraction(instance, U);
  int strikes = 0;
  bool stop = false;

  while (!stop && res.iterations < config.max_iterations) {
    ++res.iterations;
    const auto grad = energy_gradient(instance, U);
    const auto d = descent_direction(instance, config, U, grad);

    FieldVector trial;
    double E_trial = E;
    bool ok = false;
    while (tau >= config.min_step) {
      FieldVector step(U);
      for (std::size_t i = 0; i < U.components(); ++i) {
        for (std::size_t j = 0; j < U.cells(); ++j) step[i][j] -= tau * d[i][j];
      }
      trial = project_to_constraint(instance, step);
      E_trial = checked_energy(instance, trial, res.iterations);
      if (E_trial <= E) {
        ok = true;
        break;
      }
      tau *= config.backtrack_factor;
    }

    if (!ok) {
      res.lambda = lagrange_multipliers(instance, U);
      res.residuals = residual_norm(instance, U, res.lambda);
      const double r = *std::max_element(res.residuals.begin(), res.residuals.end());
      if (r <= config.residual_tolerance) {
        res.converged = true;
      } else {
        res.diagnostic = "stalled";
        res.message = "no energy decrease above the minimum step";
      }
      break;
    }

    const double dE = E - E_trial;
    U = std::move(trial);
    E = E_trial;
    res.energy_history.push_back(E);
    ++accepted;
    tau = std::min(tau * config.step_growth, config.max_step);

    if (config.symmetrize_every > 0 && accepted % config.symmetrize_every == 0) {
      FieldVector S = rearrange_vector(instance.grid(), absolute(U));
      pin_boundary(S);
      S = project_to_constraint(instance, S);
      const double E_s = checked_energy(instance, S, res.iterations);
      // Ties are rejected.
      SymmetrizationEvent ev{res.iterations, E, E_s, E_s < E - config.energy_tolerance * scale_of(E)};
      res.symmetrization_events.push_back(ev);
      if (ev.accepted) {
        U = std::move(S);
        E = E_s;
        res.energy_history.push_back(E);
      }
    }

    if (dE < config.energy_tolerance * scale_of(E)) {
      res.lambda = lagrange_multipliers(instance, U);
      res.residuals = residual_norm(instance, U, res.lambda);
      const double r = *std::max_element(res.residuals.begin(), res.residuals.end());
      if (r <= config.residual_tolerance) {
        res.converged = true;
        stop = true;
      }
    }

    if (!stop && accepted % kAttainmentWindow == 0) {
      const double fraction = outer_mass_fraction(instance, U);
      if (E >= 0.0 && fraction > last_fraction) {
        if (++strikes >= kAttainmentStrikes) {
          res.diagnostic = "non-attainment";
          res.message = "energy stays non-negative while mass moves toward r_max";
          stop = true;
        }
      } else {
        strikes = 0;
      }
      last_fraction = fraction;
    }
  }

  if (!res.converged && res.diagnostic.empty()) {
    res.diagnostic = "iteration-cap";
    res.message = "iteration limit reached before the tolerances were met";
  }
  // A non-negative limit energy means the mass is escaping to infinity on the
  // whole space and only the truncation at r_max holds it.
  if (res.diagnostic != "non-attainment" && E >= 0.0) {
    res.converged = false;
    res.diagnostic = "non-attainment";
    res.message = "final energy is non-negative; the infimum is not attained";
  }

  res.U = std::move(U);
  res.breakdown = energy(instance, res.U);
  res.lambda = lagrange_multipliers(instance, res.U);
  res.residuals = residual_norm(instance, res.U, res.lambda);
  for (std::size_t i = 0; i < res.U.components(); ++i) {
    bool sym = is_schwarz_symmetric(instance.grid(), res.U[i], 1e-8);
    for (double v : res.U[i]) sym = sym && v >= -1e-8;
    res.is_symmetric.push_back(sym);
  }
  return res;
}

bool GroundStateReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

GroundStateReport verify_ground_state(const ProblemInstance& instance, const SolveResult& result,
                                      const VerifyOptions& options) {
  const auto& U = result.U;
  instance.require_compatible(U);
  GroundStateReport report;

  {
    GroundStateCheck c{"symmetric", true, 0.0, ""};
    double worst = 0.0;
    for (std::size_t i = 0; i < U.components(); ++i) {
      for (std::size_t j = 0; j < U.cells(); ++j) {
        worst = std::max(worst, -U[i][j]);
        if (j > 0) worst = std::max(worst, U[i][j] - U[i][j - 1]);
      }
    }
    c.margin = options.symmetry_tolerance - worst;
    c.passed = worst <= options.symmetry_tolerance;
    c.detail = "largest increase or negative value " + fmt(worst);
    report.checks.push_back(c);
  }
  {
    const auto lambda = lagrange_multipliers(instance, U);
    const auto res = residual_norm(instance, U, lambda);
    const double worst = *std::max_element(res.begin(), res.end());
    GroundStateCheck c{"stationary", worst <= options.residual_tolerance, options.residual_tolerance - worst,
                       "max residual " + fmt(worst)};
    report.checks.push_back(c);
  }
  const double E = energy(instance, U).total;
  const double tol = 1e-12 * scale_of(E);
  {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < options.competitors; ++k) {
      FieldVector V(U);
      for (std::size_t i = 0; i < U.components(); ++i) {
        double amp = 0.0;
        for (double v : U[i]) amp = std::max(amp, std::abs(v));
        for (auto& v : V[i]) v += options.perturbation * amp * xi(rng);
        V[i].back() = 0.0;
      }
      V = project_to_constraint(instance, V);
      margin = std::min(margin, energy(instance, V).total - E);
    }
    GroundStateCheck c{"local-minimum", margin >= -tol, margin,
                       std::to_string(options.competitors) + " perturbed competitors"};
    report.checks.push_back(c);
  }
  if (instance.spec().lower_bound()) {
    const auto alphas = log_spaced(1e-3, 1.0, 40);
    const auto cert = gaussian_certificate(instance, alphas);
    GroundStateCheck c{"below-gaussian", E <= cert.energy_value + tol, cert.energy_value - E,
                       "best Gaussian energy " + fmt(cert.energy_value)};
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace cnls
