#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cnls/grid.hpp"
#include "cnls/piecewise.hpp"

namespace cnls {

/// G = sum_i s_i^{2p}/(2p) + (beta/p) sum_{i<j} s_i^p s_j^p, the classical
/// power-law coupling generalised to m components (m = 2 is the usual
/// Manakov-type system with g_1 = |u_1|^{2p-2} + beta |u_1|^{p-2} |u_2|^p).
struct PowerCoupling {
  double p = 2.0;
  double beta = 0.0;
};

/// One product s_1^{ell1 + 1} s_2^{ell2 + 1}.
struct ProductTerm {
  double ell1 = 1.0;
  double ell2 = 1.0;
};

/// G = b(r)|s|^2 + a(r) sum_j s_1^{ell1_j + 1} s_2^{ell2_j + 1}  (two components).
struct FamilyR {
  std::vector<ProductTerm> terms;
  PiecewiseConstant a{1.0};
  PiecewiseConstant b{0.0};
};

/// G = b |s|^{sigma + 2} + a(r) sum_j s_1^{ell1_j + 1} s_2^{ell2_j + 1}  (two components).
struct FamilyRPrime {
  double sigma = 1.0;
  double b = 0.0;
  std::vector<ProductTerm> terms;
  PiecewiseConstant a{1.0};
};

/// G == 0: pure kinetic energy, the infimum is 0 and is not attained.
struct ZeroCoupling {};

using CouplingFamily = std::variant<PowerCoupling, FamilyR, FamilyRPrime, ZeroCoupling>;

/// Growth bound 0 <= G <= K (|s|^2 + sum_i s_i^{ell_i + 2}).
struct GrowthBound {
  double K = 0.0;
  std::vector<double> ell;
};

/// Lower bound G >= sum_i A_i r^{-t_i} s_i^{sigma_i + 2} for r > R1, 0 < s_i < S1.
struct LowerBound {
  double R1 = 1.0;
  double S1 = 1.0;
  std::vector<double> A;
  std::vector<double> t;
  std::vector<double> sigma;
};

/// A coupling G(r, s_1..s_m) together with the constants declared for it.
///
/// When no growth bound is declared, one is derived from the family
/// parameters (see derived_growth_bound()).
class NonlinearitySpec {
 public:
  NonlinearitySpec(std::size_t components, CouplingFamily family,
                   std::optional<GrowthBound> growth = std::nullopt,
                   std::optional<LowerBound> lower = std::nullopt);

  std::size_t components() const noexcept { return components_; }
  const CouplingFamily& family() const noexcept { return family_; }
  std::string_view family_name() const noexcept;
  bool is_zero() const noexcept { return std::holds_alternative<ZeroCoupling>(family_); }

  const GrowthBound& growth() const noexcept { return growth_; }
  bool growth_declared() const noexcept { return growth_declared_; }
  const std::optional<LowerBound>& lower_bound() const noexcept { return lower_; }

  /// G(r, s) for s_i >= 0. No argument checking; see eval_G.
  double G(double r, std::span<const double> s) const noexcept;
  /// dG/ds_i at s_i >= 0 (right derivative where s_i = 0).
  double partial(std::size_t i, double r, std::span<const double> s) const noexcept;

  /// Radii where the family's radial coefficients jump.
  std::vector<double> radial_breakpoints() const;

 private:
  std::size_t components_;
  CouplingFamily family_;
  GrowthBound growth_;
  bool growth_declared_ = false;
  std::optional<LowerBound> lower_;
};

/// Growth constants that provably bound the family (AM-GM on products).
GrowthBound derived_growth_bound(std::size_t components, const CouplingFamily& family);

/// G(r, |s_1|, ..., |s_m|). Non-finite input or r <= 0 is a StructuralError.
double eval_G(const NonlinearitySpec& spec, double r, std::span<const double> s);

/// g_i(r, s_1^2, ..., s_m^2) with dG/du_i = g_i u_i. Where s_i = 0 the value is
/// the limit s_i -> 0+, which may be +infinity for exponents below 2.
double eval_g(const NonlinearitySpec& spec, std::size_t i, double r,
              std::span<const double> s_squared);

/// Sum over cells of mu_j G(r_j, |u_1(r_j)|, ..., |u_m(r_j)|).
double coupling_integral(const RadialGrid& grid, const NonlinearitySpec& spec,
                         const FieldVector& U);

/// g_i as a free-standing callable, the only input to build_G_from_g.
using GFactor =
    std::function<double(std::size_t i, double r, std::span<const double> s_squared)>;

GFactor g_factor_of(const NonlinearitySpec& spec);

/// Reconstructs G(r, s) - G(r, 0) from the g_i by integrating
///   dG = g_n(r, ..., v^2, ...) v dv
/// one coordinate at a time along 0 -> s_{o1} e_{o1} -> ... -> s, with `order`
/// the coordinate sequence (identity when empty). Adaptive Gauss-Kronrod per
/// leg; a NumericError reports the achieved error when `tol` is not met.
double build_G_from_g(const GFactor& g, std::size_t components, double r,
                      std::span<const double> s, std::span<const std::size_t> order = {},
                      double tol = 1e-10);

}  // namespace cnls
