#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cnls/certificates.hpp"
#include "cnls/errors.hpp"
#include "cnls/minimize.hpp"

using namespace cnls;

namespace {

const std::vector<double> kAlphas = log_spaced(1e-3, 1.0, 40);

NonlinearitySpec family_r_with_lower_bound() {
  return NonlinearitySpec(2, FamilyR{{{1.0, 1.0}}, PiecewiseConstant({10.0}, {2.0, 1.0}), PiecewiseConstant({5.0}, {0.2, 0.0})},
                          std::nullopt, LowerBound{1.0, 1.0, {0.5}, {0.0}, {2.0}});
}

ProblemInstance with_potential(int dim, PiecewiseConstant p, std::size_t cells = 2048, double r_max = 40.0) {
  return ProblemInstance(RadialGrid::uniform(dim, cells, r_max), NonlinearitySpec(1, ZeroCoupling{}), {1.0},
                         PotentialSpec{std::move(p)});
}

}  // namespace

TEST(LogSpaced, Endpoints) {
  const auto v = log_spaced(1e-2, 1e2, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 1e-2);
  EXPECT_EQ(v.back(), 1e2);
  EXPECT_NEAR(v[2], 1.0, 1e-14);
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), PreconditionError);
}

TEST(Gaussian, ZeroCouplingIsNotNegative) {
  const ProblemInstance inst(RadialGrid::uniform(2, 512, 20.0), NonlinearitySpec(2, ZeroCoupling{}), {1.0, 2.0});
  const auto cert = gaussian_certificate(inst, kAlphas);
  EXPECT_FALSE(cert.found);
  for (const auto& e : cert.scan) EXPECT_GT(e.energy, 0.0);
}

TEST(Gaussian, FamilyRIsNegativeAndSolveBeatsIt) {
  const ProblemInstance inst(RadialGrid::uniform(1, 2048, 40.0), family_r_with_lower_bound(), {1.0, 1.0});
  const auto cert = gaussian_certificate(inst, kAlphas);
  ASSERT_TRUE(cert.found);
  EXPECT_LT(cert.energy_value, 0.0);
  EXPECT_NEAR(energy(inst, cert.witness).total, cert.energy_value, 1e-10 * std::abs(cert.energy_value));
  EXPECT_NEAR(mass(inst.grid(), cert.witness[0]), 1.0, 1e-10);
  EXPECT_NEAR(mass(inst.grid(), cert.witness[1]), 1.0, 1e-10);
  const auto r = solve(inst, SolveConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.breakdown.total, cert.energy_value);
}

TEST(Gaussian, CubicCertificateBracketsTheMinimum) {
  const ProblemInstance inst(RadialGrid::uniform(1, 4096, 20.0), NonlinearitySpec(1, PowerCoupling{2.0, 0.0}), {1.0});
  const auto cert = gaussian_certificate(inst, kAlphas);
  EXPECT_TRUE(cert.found);
  EXPECT_GE(cert.energy_value, -1.0 / 96.0);
}

TEST(Gaussian, KineticQuotientIsLinearInAlpha) {
  // |grad w_a|^2 / |w_a|^2 = N alpha for w_a = exp(-alpha r^2).
  for (int dim = 1; dim <= 3; ++dim) {
    const ProblemInstance inst(RadialGrid::uniform(dim, 8192, 20.0), NonlinearitySpec(1, ZeroCoupling{}), {1.0});
    for (double alpha : log_spaced(0.05, 1.0, 6)) {
      const auto U = gaussian_field(inst, alpha);
      const double q = dirichlet_energy(inst.grid(), U[0]) / mass(inst.grid(), U[0]);
      EXPECT_NEAR(q / alpha, dim, 1e-5 * dim) << "N=" << dim << " alpha=" << alpha;
    }
  }
}

TEST(Gaussian, RejectsAlphaOutsideUnitInterval) {
  const ProblemInstance inst(RadialGrid::uniform(1, 64, 20.0), NonlinearitySpec(1, PowerCoupling{}), {1.0});
  const std::vector<double> bad = {0.5, 2.0};
  EXPECT_THROW(gaussian_certificate(inst, bad), PreconditionError);
  EXPECT_THROW(gaussian_certificate(inst, std::vector<double>{}), PreconditionError);
}

TEST(Potential, OneDimensionalStepWell) {
  const auto inst = with_potential(1, PiecewiseConstant({1.0}, {1.0, 0.0}));
  const auto cert = potential_certificate(inst);
  ASSERT_TRUE(cert.found);
  EXPECT_EQ(cert.kind, "potential-exponential");
  EXPECT_LT(cert.energy_value, 0.0);
  EXPECT_NEAR(quadratic_form(inst, cert.witness), cert.energy_value, 1e-12);
  EXPECT_NEAR(mass(inst.grid(), cert.witness[0]), 1.0, 1e-10);
  // Small alpha wins over alpha = 1.
  EXPECT_LT(cert.parameter, 1.0);
}

TEST(Potential, ThreeDimensionalWellUsesBesselMode) {
  const double R = 2.0;
  const double p0 = 1.2 * std::pow(std::numbers::pi / R, 2);
  const auto inst = with_potential(3, PiecewiseConstant({R}, {p0, 0.0}), 2048, 10.0);
  const auto cert = potential_certificate(inst);
  ASSERT_TRUE(cert.found);
  EXPECT_EQ(cert.kind, "potential-bessel");
  EXPECT_DOUBLE_EQ(cert.parameter, R);
  // The form equals c/2 (pi^2/R^2 - p0) up to discretisation.
  EXPECT_NEAR(cert.energy_value, 0.5 * (std::pow(std::numbers::pi / R, 2) - p0), 2e-3);
}

TEST(Potential, TwoDimensionalLogarithmicProfile) {
  const auto inst = with_potential(2, PiecewiseConstant({1.0}, {20.0, 0.0}), 2048, 20.0);
  const auto cert = potential_certificate(inst);
  EXPECT_EQ(cert.kind, "potential-logarithmic");
  EXPECT_TRUE(cert.found);
  EXPECT_FALSE(cert.note.empty());
}

TEST(Potential, CouplingOnlyLowersTheEnergy) {
  const ProblemInstance inst(RadialGrid::uniform(1, 1024, 40.0), NonlinearitySpec(2, PowerCoupling{2.0, 1.0}),
                             {0.5, 0.5}, PotentialSpec{PiecewiseConstant({1.0}, {1.0, 0.0})});
  const auto cert = potential_certificate(inst);
  EXPECT_TRUE(cert.found);
  EXPECT_LE(cert.full_energy, cert.energy_value);
}

TEST(Potential, ZeroPotentialIsNotFound) {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto inst = with_potential(dim, PiecewiseConstant(0.0), 512, 10.0);
    const auto cert = potential_certificate(inst);
    EXPECT_FALSE(cert.found);
    EXPECT_GT(cert.energy_value, 0.0);
  }
}

TEST(Potential, FailingP2IsAPreconditionError) {
  // N = 3 with a shallow well: p0 < pi^2 / R^2 for every admissible R.
  const auto inst = with_potential(3, PiecewiseConstant({1.0}, {0.5, 0.0}), 512, 10.0);
  try {
    potential_certificate(inst);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("P2"), std::string::npos);
  }
  const ProblemInstance none(RadialGrid::uniform(1, 64, 5.0), NonlinearitySpec(1, ZeroCoupling{}), {1.0});
  EXPECT_THROW(potential_certificate(none), PreconditionError);
}

TEST(Dilation, SupercriticalPowerIsUnbounded) {
  const ProblemInstance inst(RadialGrid::uniform(1, 4096, 20.0), NonlinearitySpec(1, PowerCoupling{4.0, 0.0}), {4.0});
  const auto scan = dilation_scan(inst, log_spaced(1e-2, 1e4, 25));
  EXPECT_TRUE(scan.unbounded_below);
  EXPECT_EQ(scan.table.size(), 25u);
}

TEST(Dilation, CubicHasInteriorMinimum) {
  const ProblemInstance inst(RadialGrid::uniform(1, 4096, 20.0), NonlinearitySpec(1, PowerCoupling{2.0, 0.0}), {1.0});
  const auto scan = dilation_scan(inst, log_spaced(1e-2, 1e4, 25));
  EXPECT_FALSE(scan.unbounded_below);
  const auto best = std::min_element(scan.table.begin(), scan.table.end(),
                                     [](const auto& a, const auto& b) { return a.energy < b.energy; });
  EXPECT_NE(best, scan.table.begin());
  EXPECT_NE(best, scan.table.end() - 1);
}

TEST(Dilation, ZeroCouplingIncreases) {
  const ProblemInstance inst(RadialGrid::uniform(1, 4096, 20.0), NonlinearitySpec(1, ZeroCoupling{}), {1.0});
  const auto scan = dilation_scan(inst, log_spaced(1.0, 1e4, 12));
  EXPECT_FALSE(scan.unbounded_below);
  for (std::size_t k = 1; k < scan.table.size(); ++k) EXPECT_GT(scan.table[k].energy, scan.table[k - 1].energy);
}
