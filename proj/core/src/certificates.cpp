#include "cnls/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cnls/errors.hpp"
#include "cnls/hypotheses.hpp"
#include "cnls/minimize.hpp"

namespace cnls {

namespace {

/// Builds one profile per component with mass `per_component[i]` from a
/// radial shape; the outermost cell is zeroed first.
template <class Shape>
FieldVector normalised_field(const RadialGrid& grid, const std::vector<double>& per_component,
                             Shape&& shape) {
  std::vector<double> base(grid.size());
  const auto r = grid.centers();
  for (std::size_t j = 0; j < grid.size(); ++j) base[j] = shape(r[j]);
  base.back() = 0.0;
  const double norm2 = mass(grid, base);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw NumericError("test function has zero or non-finite norm on this grid");
  }
  std::vector<std::vector<double>> comps;
  for (double c : per_component) {
    const double scale = std::sqrt(c / norm2);
    std::vector<double> u(base);
    for (auto& v : u) v *= scale;
    comps.push_back(std::move(u));
  }
  return FieldVector(std::move(comps));
}

std::vector<double> even_split(const ProblemInstance& instance) {
  const auto m = instance.components();
  return std::vector<double>(m, instance.total_mass() / static_cast<double>(m));
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw PreconditionError("log_spaced: need 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double quadratic_form(const ProblemInstance& instance, const FieldVector& U) {
  const auto b = energy(instance, U);
  double kinetic = 0.0;
  for (double k : b.kinetic) kinetic += k;
  return 0.5 * kinetic - b.potential_term;
}

CertificateResult gaussian_certificate(const ProblemInstance& instance,
                                       std::span<const double> alphas) {
  if (alphas.empty()) throw PreconditionError("gaussian_certificate: alpha grid is empty");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw PreconditionError("gaussian_certificate: alpha must lie in (0, 1]");
  }
  CertificateResult out;
  out.kind = "gaussian";
  out.parameter_name = "alpha";
  out.energy_value = std::numeric_limits<double>::infinity();
  for (double alpha : alphas) {
    auto U = gaussian_field(instance, alpha);
    const double e = energy(instance, U).total;
    out.scan.push_back({alpha, e});
    if (e < out.energy_value) {
      out.energy_value = e;
      out.parameter = alpha;
      out.witness = std::move(U);
    }
  }
  out.full_energy = out.energy_value;
  out.found = out.energy_value < 0.0;
  out.note = out.found ? "negative energy on the Gaussian family"
                       : "no scanned Gaussian has negative energy";
  return out;
}

CertificateResult potential_certificate(const ProblemInstance& instance,
                                        const PotentialCertificateParams& params) {
  const auto& pot = instance.potential();
  if (!pot) throw PreconditionError("potential_certificate: the problem has no potential");
  const auto& grid = instance.grid();
  const int n_dim = grid.dimension();
  const auto split = even_split(instance);

  const bool zero_potential = pot->profile.is_zero();
  std::optional<double> p2_radius;
  if (!zero_potential) {
    const auto checks = check_potential(*pot, n_dim);
    const auto& p2 = checks[1];
    if (!p2.holds) {
      throw PreconditionError(n_dim <= 2 ? "P2 not satisfied: p must be positive at some a in (0, 1]"
                                         : "P2 not satisfied: no R with p(r) > j^2/R^2 on |x| < R");
    }
    if (n_dim >= 3 && p2.witness) {
      for (const auto& [name, value] : p2.witness->scalars) {
        if (name == "R") p2_radius = value;
      }
    }
  }

  CertificateResult out;
  out.energy_value = std::numeric_limits<double>::infinity();
  auto consider = [&](double parameter, FieldVector U) {
    const double q = quadratic_form(instance, U);
    out.scan.push_back({parameter, q});
    if (q < out.energy_value) {
      out.energy_value = q;
      out.parameter = parameter;
      out.witness = std::move(U);
    }
  };
  std::ostringstream note;

  if (n_dim == 1) {
    out.kind = "potential-exponential";
    out.parameter_name = "alpha";
    const auto alphas = params.alphas.empty() ? log_spaced(1e-3, 1.0, 31) : params.alphas;
    for (double alpha : alphas) {
      if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("potential_certificate: alpha must lie in (0, 1]");
      consider(alpha, normalised_field(grid, split, [alpha](double r) { return std::exp(-alpha * r); }));
    }
  } else if (n_dim == 2) {
    out.kind = "potential-logarithmic";
    out.parameter_name = "d";
    const double r_max = grid.r_max();
    const double d_min = 1.0 / (r_max - 0.5 * (grid.edges()[1]));
    const auto ds = params.dilations.empty() ? log_spaced(std::min(d_min, 1.0), 1.0, 40) : params.dilations;
    auto log_profile = [](double r) { return r < 1.0 ? std::cbrt(std::log(1.0 / r)) : 0.0; };
    // Discrete |grad u|^2 of the undilated profile, and K = 1 / int_{|x|<=1} p, for the
    // sufficient condition u(d)^2 > K |grad u|^2.
    std::vector<double> u(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) u[j] = log_profile(grid.centers()[j]);
    const double grad_u = dirichlet_energy(grid, u);
    double p_ball = 0.0;
    for (std::size_t j = 0; j < grid.size() && grid.edges()[j + 1] <= 1.0 + 1e-12; ++j) {
      p_ball += grid.measures()[j] * (*pot)(grid.centers()[j]);
    }
    std::optional<double> sufficient;
    for (double d : ds) {
      if (!(d > 0.0 && d <= 1.0)) throw PreconditionError("potential_certificate: |d| must lie in (0, 1]");
      consider(d, normalised_field(grid, split, [&](double r) { return log_profile(d * r); }));
      if (!sufficient && p_ball > 0.0 && std::pow(log_profile(d), 2.0) > grad_u / p_ball) sufficient = d;
    }
    note << "inner singularity truncated at the first cell centre r = " << grid.centers()[0]
         << "; discrete |grad u|^2 = " << grad_u;
    if (sufficient) note << "; u(d)^2 > K |grad u|^2 first holds at |d| = " << *sufficient;
  } else {
    out.kind = "potential-bessel";
    out.parameter_name = "R";
    const double nu = 0.5 * n_dim - 1.0;
    const double j = bessel_first_zero(nu);
    double R = params.radius.value_or(p2_radius.value_or(0.5 * grid.r_max()));
    if (!(R > 0.0) || R > grid.r_max() - (grid.edges()[1])) {
      throw PreconditionError("potential_certificate: ball radius R must fit inside the grid");
    }
    consider(R, normalised_field(grid, split, [&](double r) {
               if (r >= R) return 0.0;
               const double rho = r / R;
               return bessel_j(nu, j * rho) / std::pow(rho, nu);
             }));
    note << "j_{" << nu << ",1} = " << j << ", j^2/R^2 = " << j * j / (R * R);
  }

  out.full_energy = energy(instance, out.witness).total;
  out.found = out.energy_value < 0.0;
  if (zero_potential) {
    if (note.tellp() > 0) note << "; ";
    note << "p is identically zero, the form reduces to 1/2 |grad v|^2 > 0";
  }
  out.note = note.str();
  return out;
}

DilationScanResult dilation_scan(const ProblemInstance& instance, std::span<const double> alphas) {
  if (alphas.size() < 4) throw PreconditionError("dilation_scan: need at least four alpha values");
  if (!std::is_sorted(alphas.begin(), alphas.end())) throw PreconditionError("dilation_scan: alphas must be ascending");
  DilationScanResult out;
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw PreconditionError("dilation_scan: alpha must be positive");
    out.table.push_back({alpha, energy(instance, gaussian_field(instance, alpha)).total});
  }
  // Tail = last third of the scan (at least three points): strictly decreasing,
  // negative, and the decrements do not shrink.
  const std::size_t n = out.table.size();
  const std::size_t tail = std::max<std::size_t>(3, n / 3);
  bool decreasing = true;
  for (std::size_t k = n - tail + 1; k < n; ++k) {
    if (!(out.table[k].energy < out.table[k - 1].energy)) decreasing = false;
  }
  const double first_drop = out.table[n - tail].energy - out.table[n - tail + 1].energy;
  const double last_drop = out.table[n - 2].energy - out.table[n - 1].energy;
  const bool levelling = last_drop < first_drop;
  out.unbounded_below = decreasing && out.table.back().energy < 0.0 && !levelling;

  std::ostringstream note;
  const auto best = std::min_element(out.table.begin(), out.table.end(),
                                     [](const auto& a, const auto& b) { return a.energy < b.energy; });
  note << "minimum energy " << best->energy << " at alpha = " << best->parameter;
  if (best != out.table.end() - 1) note << " (interior of the scan)";
  note << "; tail " << (decreasing ? "decreasing" : "not decreasing")
       << (decreasing ? (levelling ? ", levelling off" : ", not levelling off") : "");
  out.note = note.str();
  return out;
}

}  // namespace cnls
