#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cnls/errors.hpp"
#include "cnls/minimize.hpp"

using namespace cnls;

namespace {

ProblemInstance cubic(std::size_t m = 1, std::size_t cells = 4096) {
  return ProblemInstance(RadialGrid::uniform(1, cells, 20.0), NonlinearitySpec(m, PowerCoupling{2.0, 0.0}),
                         std::vector<double>(m, 1.0));
}

SolveConfig with_symmetrisation(std::size_t k) {
  SolveConfig c;
  c.symmetrize_every = k;
  return c;
}

}  // namespace

TEST(Project, ScalesToMasses) {
  const ProblemInstance inst(RadialGrid::uniform(2, 64, 4.0), NonlinearitySpec(2, PowerCoupling{}), {1.0, 3.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    FieldVector U(2, 64);
    for (std::size_t i = 0; i < 2; ++i) {
      for (auto& v : U[i]) v = d(rng);
    }
    const auto P = project_to_constraint(inst, U);
    EXPECT_NEAR(mass(inst.grid(), P[0]), 1.0, 1e-12);
    EXPECT_NEAR(mass(inst.grid(), P[1]), 3.0, 1e-12);
    const auto Q = project_to_constraint(inst, P);
    for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(Q[1][j], P[1][j], 1e-14);
  }
}

TEST(Project, HalvesAComponentWithFourTimesTheMass) {
  const ProblemInstance inst(RadialGrid::uniform(1, 16, 1.0), NonlinearitySpec(1, PowerCoupling{}), {1.0});
  FieldVector U(1, 16, 0.0);
  for (auto& v : U[0]) v = 1.0;
  const double scale = std::sqrt(4.0 / mass(inst.grid(), U[0]));
  for (auto& v : U[0]) v *= scale;
  const auto P = project_to_constraint(inst, U);
  EXPECT_NEAR(P[0][3] / U[0][3], 0.5, 1e-14);
  EXPECT_THROW(project_to_constraint(inst, FieldVector(1, 16, 0.0)), PreconditionError);
}

TEST(Solve, SechBenchmark) {
  const auto inst = cubic();
  const auto r = solve(inst, with_symmetrisation(5));
  ASSERT_TRUE(r.converged) << r.diagnostic;
  EXPECT_NEAR(r.breakdown.total, -1.0 / 96.0, 1e-2 / 96.0);
  EXPECT_NEAR(r.lambda[0], -1.0 / 16.0, 1e-2 / 16.0);
  const auto& g = inst.grid();
  for (std::size_t j = 0; j < g.size() && g.centers()[j] < 10.0; j += 50) {
    const double k = 0.25;
    const double exact = std::sqrt(2.0) * k / std::cosh(k * g.centers()[j]);
    EXPECT_NEAR(r.U[0][j], exact, 1e-2 * exact);
  }
  EXPECT_NEAR(mass(g, r.U[0]), 1.0, 1e-10);
  EXPECT_TRUE(r.is_symmetric[0]);
  for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
    EXPECT_LE(r.energy_history[k], r.energy_history[k - 1] + 1e-12 * std::abs(r.energy_history[k - 1]));
  }
  EXPECT_LE(r.residuals[0], SolveConfig{}.residual_tolerance);
  const auto report = verify_ground_state(inst, r);
  EXPECT_TRUE(report.all_passed());
}

TEST(Solve, PlainGradientDescendsMonotonically) {
  const auto inst = cubic(1, 512);
  SolveConfig c;
  c.preconditioner = Preconditioner::None;
  c.max_iterations = 300;
  const auto r = solve(inst, c);
  EXPECT_EQ(r.diagnostic, "iteration-cap");
  EXPECT_FALSE(r.converged);
  for (std::size_t k = 1; k < r.energy_history.size(); ++k) EXPECT_LE(r.energy_history[k], r.energy_history[k - 1]);
  EXPECT_LT(r.energy_history.back(), r.energy_history.front());
}

TEST(Solve, DecouplingOracle) {
  const auto one = solve(cubic(1), SolveConfig{});
  const auto two = solve(cubic(2), SolveConfig{});
  ASSERT_TRUE(two.converged);
  EXPECT_NEAR(two.breakdown.total, 2.0 * one.breakdown.total, 1e-3 * std::abs(one.breakdown.total));
  for (std::size_t j = 0; j < two.U.cells(); ++j) EXPECT_NEAR(two.U[0][j], two.U[1][j], 1e-6);
}

TEST(Solve, ZeroCouplingIsNotAttained) {
  const ProblemInstance inst(RadialGrid::uniform(1, 1024, 20.0), NonlinearitySpec(1, ZeroCoupling{}), {1.0});
  const auto r = solve(inst, SolveConfig{});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.diagnostic, "non-attainment");
  for (double e : r.energy_history) EXPECT_GE(e, 0.0);
}

TEST(Solve, SymmetrisationDoesNotChangeTheMinimiser) {
  const auto inst = cubic(1, 2048);
  const auto a = solve(inst, with_symmetrisation(0));
  const auto b = solve(inst, with_symmetrisation(5));
  EXPECT_NEAR(a.breakdown.total, b.breakdown.total, 1e-6);
  for (const auto& ev : b.symmetrization_events) {
    if (ev.accepted) EXPECT_LE(ev.energy_after, ev.energy_before + 1e-12 * std::max(1.0, std::abs(ev.energy_before)));
  }
}

TEST(Solve, SymmetrisationRecoversFromOffCentreStart) {
  // Start from a bump away from the origin with a signed tail; rearrangement moves it inward.
  const auto inst = ProblemInstance(RadialGrid::uniform(1, 1024, 20.0), NonlinearitySpec(1, PowerCoupling{2.0, 0.0}), {1.0});
  std::vector<double> u(1024);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double r = inst.grid().centers()[j];
    u[j] = std::exp(-(r - 6.0) * (r - 6.0)) - 0.1 * std::exp(-(r - 12.0) * (r - 12.0));
  }
  SolveConfig c = with_symmetrisation(3);
  c.initial_guess = InitialGuess::Given;
  c.given = FieldVector({u});
  const auto r = solve(inst, c);
  ASSERT_TRUE(r.converged) << r.diagnostic << " after " << r.iterations << " iterations, E=" << r.breakdown.total << " res=" << r.residuals[0] << " events=" << r.symmetrization_events.size();
  EXPECT_NEAR(r.breakdown.total, -1.0 / 96.0, 1e-2 / 96.0);
  EXPECT_FALSE(r.symmetrization_events.empty());
  EXPECT_TRUE(r.symmetrization_events.front().accepted);
}

TEST(Solve, DeterministicForFixedSeed) {
  const auto inst = cubic(2, 512);
  SolveConfig c = with_symmetrisation(4);
  c.initial_guess = InitialGuess::RandomPositive;
  c.seed = 42;
  const auto a = solve(inst, c);
  const auto b = solve(inst, c);
  EXPECT_EQ(a.energy_history, b.energy_history);
  EXPECT_EQ(a.U, b.U);
  c.seed = 43;
  const auto d = solve(inst, c);
  EXPECT_NE(a.energy_history.front(), d.energy_history.front());
}

TEST(Solve, GridRefinementConverges) {
  double prev = 0.0, prev_diff = 0.0;
  for (std::size_t cells : {512u, 1024u, 2048u}) {
    const double e = solve(cubic(1, cells), SolveConfig{}).breakdown.total;
    if (cells > 512) {
      const double diff = std::abs(e - prev);
      if (cells > 1024) EXPECT_LT(diff, 0.6 * prev_diff);
      prev_diff = diff;
    }
    prev = e;
  }
}

TEST(Solve, NonFiniteEnergyCarriesIterate) {
  const ProblemInstance inst(RadialGrid::uniform(1, 256, 10.0), NonlinearitySpec(1, PowerCoupling{200.0, 0.0}), {1e4});
  SolveConfig c;
  c.initial_alpha = 1.0;
  try {
    solve(inst, c);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iterate().cells(), 256u);
    EXPECT_EQ(e.iteration(), 0u);
  }
}

TEST(Solve, RejectsInvalidConfig) {
  const auto inst = cubic(1, 64);
  SolveConfig c;
  c.backtrack_factor = 1.5;
  EXPECT_THROW(solve(inst, c), PreconditionError);
  c = SolveConfig{};
  c.initial_guess = InitialGuess::Given;
  EXPECT_THROW(solve(inst, c), PreconditionError);
  c.given = FieldVector(2, 64, 1.0);
  EXPECT_THROW(solve(inst, c), StructuralError);
}

TEST(Verify, NonSymmetricFieldFailsCheckA) {
  const auto inst = cubic(1, 256);
  SolveResult fake;
  std::vector<double> u(256);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::exp(-std::pow(inst.grid().centers()[j] - 5.0, 2));
  u.back() = 0.0;
  fake.U = project_to_constraint(inst, FieldVector({u}));
  const auto rep = verify_ground_state(inst, fake);
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_EQ(rep.checks[0].name, "symmetric");
  EXPECT_FALSE(rep.checks[0].passed);
  EXPECT_FALSE(rep.all_passed());
}
