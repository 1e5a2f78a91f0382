#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnls/energy.hpp"
#include "cnls/errors.hpp"

namespace cnls {

enum class InitialGuess { Gaussian, Given, RandomPositive };
enum class Preconditioner { None, Sobolev };

struct SolveConfig {
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  /// Accepted steps grow by this factor, capped at max_step.
  double step_growth = 1.5;
  double max_step = 1e3;
  double min_step = 1e-14;
  std::size_t max_iterations = 20000;
  double energy_tolerance = 1e-13;
  double residual_tolerance = 1e-7;
  /// Every k accepted steps, replace U by the rearrangement of |U| if that lowers E by more than
  /// energy_tolerance * scale; 0 disables.
  std::size_t symmetrize_every = 0;
  std::uint64_t seed = 1;
  InitialGuess initial_guess = InitialGuess::Gaussian;
  /// Width parameter of the Gaussian start exp(-alpha r^2).
  double initial_alpha = 0.1;
  std::optional<FieldVector> given;
  /// Sobolev: descent direction (shift - Laplacian)^{-1} grad, made tangent to
  /// the mass constraint. None: the plain L^2 gradient.
  Preconditioner preconditioner = Preconditioner::Sobolev;
  double preconditioner_shift = 1.0;

  /// Throws PreconditionError on out-of-range settings.
  void validate() const;
};

struct SymmetrizationEvent {
  std::size_t iteration = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  bool accepted = false;
};

struct SolveResult {
  FieldVector U;
  EnergyBreakdown breakdown;
  /// Energy of the starting point followed by every accepted iterate.
  std::vector<double> energy_history;
  std::vector<double> lambda;
  std::vector<double> residuals;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<bool> is_symmetric;
  std::vector<SymmetrizationEvent> symmetrization_events;
  /// Empty when converged; otherwise "non-attainment", "iteration-cap" or "stalled".
  std::string diagnostic;
  std::string message;
};

/// Raised by solve() when an energy evaluation is not finite; carries the
/// offending iterate.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, FieldVector iterate, std::size_t iteration)
      : NumericError(what), iterate_(std::move(iterate)), iteration_(iteration) {}
  const FieldVector& iterate() const noexcept { return iterate_; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  FieldVector iterate_;
  std::size_t iteration_;
};

/// Rescales each u_i by sqrt(c_i) / |u_i|_2.
FieldVector project_to_constraint(const ProblemInstance& instance, const FieldVector& U);

/// Starting point for solve(): the configured guess, zero in the outermost
/// cell and projected onto the mass constraint.
FieldVector initial_guess(const ProblemInstance& instance, const SolveConfig& config);

/// Normalised Gaussian exp(-alpha r^2) per component, vanishing in the
/// outermost cell, with mass c_i.
FieldVector gaussian_field(const ProblemInstance& instance, double alpha);

/// Monotone projected descent on the mass constraint with backtracking and
/// optional energy-safe Schwarz rearrangement steps. Non-finite energies
/// throw NumericError.
SolveResult solve(const ProblemInstance& instance, const SolveConfig& config);

struct GroundStateCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};

struct GroundStateReport {
  std::vector<GroundStateCheck> checks;
  bool all_passed() const noexcept;
};

struct VerifyOptions {
  double symmetry_tolerance = 1e-8;
  double residual_tolerance = 1e-6;
  std::size_t competitors = 20;
  double perturbation = 1e-2;
  std::uint64_t seed = 7;
};

/// (a) each component non-increasing, (b) stationarity residual below
/// tolerance, (c) no lower energy among seeded perturbed-and-projected
/// competitors, (d) no lower energy than the best Gaussian test function when
/// lower-bound data is declared.
GroundStateReport verify_ground_state(const ProblemInstance& instance, const SolveResult& result,
                                      const VerifyOptions& options = {});

}  // namespace cnls
