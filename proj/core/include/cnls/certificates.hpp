#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnls/bessel.hpp"
#include "cnls/energy.hpp"

namespace cnls {

struct ScanEntry {
  double parameter = 0.0;
  double energy = 0.0;
};

/// An explicit element of the constraint set with negative energy, if one
/// was found among the scanned test functions.
struct CertificateResult {
  std::string kind;
  bool found = false;
  std::string parameter_name;
  double parameter = 0.0;
  FieldVector witness;
  /// Certified value: the energy for Gaussian certificates, the quadratic form
  /// 1/2 |grad v|^2 - 1/2 int p v^2 (summed over components) for potential ones.
  double energy_value = 0.0;
  /// energy() of the witness including the coupling; never above energy_value
  /// for non-negative G.
  double full_energy = 0.0;
  std::vector<ScanEntry> scan;
  std::string note;
};

struct DilationScanResult {
  std::vector<ScanEntry> table;
  /// Heuristic: the tail of the scan keeps decreasing without levelling off.
  bool unbounded_below = false;
  std::string note;
};

/// n points log-spaced between lo and hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// Scans the Gaussian family u_i = sqrt(c_i) w / |w|_2, w = exp(-alpha r^2),
/// normalised by quadrature on the grid, over alpha in (0, 1].
CertificateResult gaussian_certificate(const ProblemInstance& instance,
                                       std::span<const double> alphas);

struct PotentialCertificateParams {
  /// N = 1: decay rates of exp(-alpha r); default log-spaced in [1e-3, 1].
  std::vector<double> alphas;
  /// N = 2: dilation factors |d| of (log 1/r)^{1/3}; default log-spaced in [1/r_max, 1].
  std::vector<double> dilations;
  /// N = 3: ball radius; default the radius found by the P2 check.
  std::optional<double> radius;
};

/// Dimension-specific test functions for the energy with a trap potential
/// (exponential for N = 1, logarithmic for N = 2, first Dirichlet Bessel mode
/// for N = 3), split evenly over the components so the total mass is c.
/// A potential that fails P2 is a PreconditionError naming the clause; the
/// zero potential is evaluated and reported as not found.
CertificateResult potential_certificate(const ProblemInstance& instance,
                                        const PotentialCertificateParams& params = {});

/// Energies along the mass-preserving Gaussian dilation family, alpha spanning
/// several decades.
DilationScanResult dilation_scan(const ProblemInstance& instance, std::span<const double> alphas);

/// sum_i 1/2 |grad u_i|^2 - 1/2 int p u_i^2 (no coupling term).
double quadratic_form(const ProblemInstance& instance, const FieldVector& U);

}  // namespace cnls
