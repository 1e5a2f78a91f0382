#include "cnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// x^e with the one-sided limits at x = 0 spelled out.
double pow0(double x, double e) noexcept {
  if (e == 0.0) return 1.0;
  if (x == 0.0) return e > 0.0 ? 0.0 : kInf;
  return std::pow(x, e);
}

double norm_squared(std::span<const double> s) noexcept {
  double sum = 0.0;
  for (double v : s) sum += v * v;
  return sum;
}

void validate_terms(const std::vector<ProductTerm>& terms) {
  for (const auto& t : terms) {
    if (!(t.ell1 > 0.0) || !(t.ell2 > 0.0)) {
      throw StructuralError("product exponents ell must be positive");
    }
  }
}

void validate_a(const PiecewiseConstant& a) {
  if (!a.is_nonincreasing()) throw StructuralError("a(r) must be non-increasing");
  if (!(a.min_level() > 0.0)) throw StructuralError("a(r) must be bounded below by a positive constant");
}

// Sum over product terms of a * s1^{ell1+1} s2^{ell2+1} and its partials.
double product_sum(const std::vector<ProductTerm>& terms, double s1, double s2) noexcept {
  double sum = 0.0;
  for (const auto& t : terms) sum += pow0(s1, t.ell1 + 1.0) * pow0(s2, t.ell2 + 1.0);
  return sum;
}

double product_partial(const std::vector<ProductTerm>& terms, std::size_t i, double s1,
                       double s2) noexcept {
  double sum = 0.0;
  for (const auto& t : terms) {
    if (i == 0) {
      sum += (t.ell1 + 1.0) * pow0(s1, t.ell1) * pow0(s2, t.ell2 + 1.0);
    } else {
      sum += (t.ell2 + 1.0) * pow0(s1, t.ell1 + 1.0) * pow0(s2, t.ell2);
    }
  }
  return sum;
}

// g-factor contribution of the products: product_partial / s_i with the limit at s_i = 0.
double product_g(const std::vector<ProductTerm>& terms, std::size_t i, double s1,
                 double s2) noexcept {
  double sum = 0.0;
  for (const auto& t : terms) {
    const double own = i == 0 ? s1 : s2;
    const double other = i == 0 ? s2 : s1;
    const double own_exp = (i == 0 ? t.ell1 : t.ell2) - 1.0;
    const double other_factor = pow0(other, (i == 0 ? t.ell2 : t.ell1) + 1.0);
    if (other_factor == 0.0) continue;
    sum += ((i == 0 ? t.ell1 : t.ell2) + 1.0) * pow0(own, own_exp) * other_factor;
  }
  return sum;
}

}  // namespace

GrowthBound derived_growth_bound(std::size_t components, const CouplingFamily& family) {
  const auto m = static_cast<double>(components);
  auto max_degree = [](const std::vector<ProductTerm>& terms) {
    double ell = 0.0;
    for (const auto& t : terms) ell = std::max(ell, t.ell1 + t.ell2);
    return ell;
  };
  return std::visit(
      Overloaded{
          [&](const PowerCoupling& f) {
            return GrowthBound{(1.0 + f.beta * (m - 1.0)) / (2.0 * f.p),
                               std::vector<double>(components, 2.0 * f.p - 2.0)};
          },
          [&](const FamilyR& f) {
            const double k = static_cast<double>(f.terms.size());
            const double ell = f.terms.empty() ? 1.0 : max_degree(f.terms);
            return GrowthBound{std::max(f.b.max_level(), 0.0) + k * f.a.max_level(),
                               std::vector<double>(components, ell)};
          },
          [&](const FamilyRPrime& f) {
            const double k = static_cast<double>(f.terms.size());
            const double ell = std::max(f.sigma, max_degree(f.terms));
            return GrowthBound{f.b * std::pow(m, 0.5 * f.sigma) + k * f.a.max_level(),
                               std::vector<double>(components, ell)};
          },
          [&](const ZeroCoupling&) {
            return GrowthBound{0.0, std::vector<double>(components, 1.0)};
          },
      },
      family);
}

NonlinearitySpec::NonlinearitySpec(std::size_t components, CouplingFamily family,
                                   std::optional<GrowthBound> growth,
                                   std::optional<LowerBound> lower)
    : components_(components), family_(std::move(family)), lower_(std::move(lower)) {
  if (components_ == 0) throw StructuralError("the coupling needs at least one component");
  std::visit(Overloaded{
                 [&](const PowerCoupling& f) {
                   if (!(f.p > 1.0)) throw StructuralError("power coupling needs p > 1");
                   if (!(f.beta >= 0.0)) throw StructuralError("power coupling needs beta >= 0");
                 },
                 [&](const FamilyR& f) {
                   if (components_ != 2) throw StructuralError("family R is defined for two components");
                   validate_terms(f.terms);
                   validate_a(f.a);
                   if (!f.b.is_nonincreasing()) throw StructuralError("b(r) must be non-increasing");
                   if (!(f.b.min_level() >= 0.0)) throw StructuralError("b(r) must be non-negative");
                   if (f.b.tail_level() != 0.0) throw StructuralError("b(r) must vanish beyond its last breakpoint");
                 },
                 [&](const FamilyRPrime& f) {
                   if (components_ != 2) throw StructuralError("family R' is defined for two components");
                   validate_terms(f.terms);
                   validate_a(f.a);
                   if (!(f.sigma > 0.0)) throw StructuralError("family R' needs sigma > 0");
                   if (!(f.b >= 0.0)) throw StructuralError("family R' needs b >= 0");
                 },
                 [](const ZeroCoupling&) {},
             },
             family_);

  if (growth) {
    if (growth->ell.size() == 1 && components_ > 1) growth->ell.resize(components_, growth->ell[0]);
    if (growth->ell.size() != components_) {
      throw StructuralError("growth exponents: expected " + std::to_string(components_) + " values");
    }
    if (!(growth->K >= 0.0)) throw StructuralError("growth constant K must be non-negative");
    growth_ = std::move(*growth);
    growth_declared_ = true;
  } else {
    growth_ = derived_growth_bound(components_, family_);
  }

  if (lower_) {
    auto widen = [&](std::vector<double>& v, const char* name) {
      if (v.size() == 1 && components_ > 1) v.resize(components_, v[0]);
      if (v.size() != components_) {
        throw StructuralError(std::string("lower bound ") + name + ": expected " +
                              std::to_string(components_) + " values");
      }
    };
    widen(lower_->A, "A");
    widen(lower_->t, "t");
    widen(lower_->sigma, "sigma");
    if (!(lower_->R1 > 0.0) || !(lower_->S1 > 0.0)) {
      throw StructuralError("lower bound thresholds R1, S1 must be positive");
    }
    for (std::size_t i = 0; i < components_; ++i) {
      if (!(lower_->A[i] > 0.0)) throw StructuralError("lower bound needs A_i > 0");
      if (!(lower_->t[i] >= 0.0 && lower_->t[i] < 2.0)) {
        throw StructuralError("lower bound needs t_i in [0, 2)");
      }
      if (!(lower_->sigma[i] >= 0.0)) throw StructuralError("lower bound needs sigma_i >= 0");
    }
  }
}

std::string_view NonlinearitySpec::family_name() const noexcept {
  return std::visit(Overloaded{
                        [](const PowerCoupling&) { return std::string_view("power"); },
                        [](const FamilyR&) { return std::string_view("R"); },
                        [](const FamilyRPrime&) { return std::string_view("Rprime"); },
                        [](const ZeroCoupling&) { return std::string_view("zero"); },
                    },
                    family_);
}

double NonlinearitySpec::G(double r, std::span<const double> s) const noexcept {
  return std::visit(
      Overloaded{
          [&](const PowerCoupling& f) {
            double sum = 0.0;
            for (double v : s) sum += pow0(v, 2.0 * f.p);
            sum /= 2.0 * f.p;
            if (f.beta != 0.0) {
              double cross = 0.0;
              for (std::size_t i = 0; i < s.size(); ++i) {
                for (std::size_t j = i + 1; j < s.size(); ++j) {
                  cross += pow0(s[i], f.p) * pow0(s[j], f.p);
                }
              }
              sum += f.beta / f.p * cross;
            }
            return sum;
          },
          [&](const FamilyR& f) {
            return f.b(r) * norm_squared(s) + f.a(r) * product_sum(f.terms, s[0], s[1]);
          },
          [&](const FamilyRPrime& f) {
            return f.b * pow0(norm_squared(s), 0.5 * (f.sigma + 2.0)) +
                   f.a(r) * product_sum(f.terms, s[0], s[1]);
          },
          [](const ZeroCoupling&) { return 0.0; },
      },
      family_);
}

double NonlinearitySpec::partial(std::size_t i, double r, std::span<const double> s) const noexcept {
  return std::visit(
      Overloaded{
          [&](const PowerCoupling& f) {
            double d = pow0(s[i], 2.0 * f.p - 1.0);
            if (f.beta != 0.0) {
              double others = 0.0;
              for (std::size_t j = 0; j < s.size(); ++j) {
                if (j != i) others += pow0(s[j], f.p);
              }
              d += f.beta * pow0(s[i], f.p - 1.0) * others;
            }
            return d;
          },
          [&](const FamilyR& f) {
            return 2.0 * f.b(r) * s[i] + f.a(r) * product_partial(f.terms, i, s[0], s[1]);
          },
          [&](const FamilyRPrime& f) {
            return f.b * (f.sigma + 2.0) * pow0(norm_squared(s), 0.5 * f.sigma) * s[i] +
                   f.a(r) * product_partial(f.terms, i, s[0], s[1]);
          },
          [](const ZeroCoupling&) { return 0.0; },
      },
      family_);
}

std::vector<double> NonlinearitySpec::radial_breakpoints() const {
  return std::visit(Overloaded{
                        [](const FamilyR& f) {
                          std::vector<double> out(f.a.breaks().begin(), f.a.breaks().end());
                          out.insert(out.end(), f.b.breaks().begin(), f.b.breaks().end());
                          std::sort(out.begin(), out.end());
                          out.erase(std::unique(out.begin(), out.end()), out.end());
                          return out;
                        },
                        [](const FamilyRPrime& f) {
                          return std::vector<double>(f.a.breaks().begin(), f.a.breaks().end());
                        },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    family_);
}

double eval_G(const NonlinearitySpec& spec, double r, std::span<const double> s) {
  if (s.size() != spec.components()) {
    throw StructuralError("eval_G: expected " + std::to_string(spec.components()) + " arguments");
  }
  if (!std::isfinite(r) || !(r > 0.0)) throw StructuralError("eval_G: radius must be positive and finite");
  double buf[8];
  std::vector<double> heap;
  std::span<double> abs_s;
  if (s.size() <= 8) {
    abs_s = std::span<double>(buf, s.size());
  } else {
    heap.resize(s.size());
    abs_s = heap;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i])) throw StructuralError("eval_G: non-finite argument");
    abs_s[i] = std::abs(s[i]);
  }
  return spec.G(r, abs_s);
}

double eval_g(const NonlinearitySpec& spec, std::size_t i, double r,
              std::span<const double> s_squared) {
  const std::size_t m = spec.components();
  if (i >= m) throw StructuralError("eval_g: component index out of range");
  if (s_squared.size() != m) throw StructuralError("eval_g: expected " + std::to_string(m) + " arguments");
  if (!std::isfinite(r) || !(r > 0.0)) throw StructuralError("eval_g: radius must be positive and finite");
  std::vector<double> s(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(s_squared[k]) || s_squared[k] < 0.0) {
      throw StructuralError("eval_g: squared arguments must be finite and non-negative");
    }
    s[k] = std::sqrt(s_squared[k]);
  }
  if (s[i] > 0.0) return spec.partial(i, r, s) / s[i];

  // Limit s_i -> 0+ of dG/ds_i / s_i, family by family.
  return std::visit(
      Overloaded{
          [&](const PowerCoupling& f) {
            double g = pow0(0.0, 2.0 * f.p - 2.0);
            if (f.beta != 0.0) {
              double others = 0.0;
              for (std::size_t j = 0; j < m; ++j) {
                if (j != i) others += pow0(s[j], f.p);
              }
              if (others != 0.0) g += f.beta * pow0(0.0, f.p - 2.0) * others;
            }
            return g;
          },
          [&](const FamilyR& f) {
            return 2.0 * f.b(r) + f.a(r) * product_g(f.terms, i, s[0], s[1]);
          },
          [&](const FamilyRPrime& f) {
            return f.b * (f.sigma + 2.0) * pow0(norm_squared(s), 0.5 * f.sigma) +
                   f.a(r) * product_g(f.terms, i, s[0], s[1]);
          },
          [](const ZeroCoupling&) { return 0.0; },
      },
      spec.family());
}

double coupling_integral(const RadialGrid& grid, const NonlinearitySpec& spec,
                         const FieldVector& U) {
  const std::size_t m = spec.components();
  if (U.components() != m) throw StructuralError("coupling_integral: component count mismatch");
  if (U.cells() != grid.size()) throw StructuralError("coupling_integral: field does not match grid");
  if (spec.is_zero()) return 0.0;
  const auto r = grid.centers();
  const auto mu = grid.measures();
  std::vector<double> s(m);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i < m; ++i) s[i] = std::abs(U[i][j]);
    sum += mu[j] * spec.G(r[j], s);
  }
  return sum;
}

GFactor g_factor_of(const NonlinearitySpec& spec) {
  return [spec](std::size_t i, double r, std::span<const double> s_squared) {
    return eval_g(spec, i, r, s_squared);
  };
}

double build_G_from_g(const GFactor& g, std::size_t components, double r,
                      std::span<const double> s, std::span<const std::size_t> order,
                      double tol) {
  if (s.size() != components) throw StructuralError("build_G_from_g: argument count mismatch");
  std::vector<std::size_t> path(components);
  if (order.empty()) {
    std::iota(path.begin(), path.end(), std::size_t{0});
  } else {
    if (order.size() != components) throw StructuralError("build_G_from_g: order must list every coordinate");
    path.assign(order.begin(), order.end());
    auto sorted = path;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < components; ++k) {
      if (sorted[k] != k) throw StructuralError("build_G_from_g: order is not a permutation");
    }
  }

  std::vector<double> point_sq(components, 0.0);
  double total = 0.0;
  // Abscissae stay at least 1e-140 away from the endpoints.
  boost::math::quadrature::tanh_sinh<double> integrator(15, 1e-140);
  for (std::size_t n : path) {
    const double target = std::abs(s[n]);
    if (target > 0.0) {
      auto integrand = [&](double v) {
        point_sq[n] = v * v;
        return g(n, r, point_sq) * v;
      };
      double error = 0.0;
      double l1 = 0.0;
      double leg = 0.0;
      try {
        leg = integrator.integrate(integrand, 0.0, target, 0.01 * tol, &error, &l1);
      } catch (const std::exception& ex) {
        throw NumericError("build_G_from_g: quadrature along coordinate " + std::to_string(n + 1) +
                           " failed: " + ex.what());
      }
      if (!std::isfinite(leg) || error > tol * std::max(1.0, l1)) {
        std::ostringstream msg;
        msg << "build_G_from_g: quadrature along coordinate " << n + 1 << " reached error " << error
            << " > tolerance " << tol * std::max(1.0, l1);
        throw NumericError(msg.str());
      }
      total += leg;
    }
    point_sq[n] = target * target;
  }
  return total;
}

}  // namespace cnls
