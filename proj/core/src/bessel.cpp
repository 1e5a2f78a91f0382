#include "cnls/bessel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kSearchCap = 60.0;
constexpr double kScanStep = 0.05;

// J_nu(x) / (x/2)^nu: an entire function of x, positive near the origin.
// Loses digits to cancellation for large x; only used for nu < 0.
double reduced_series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0 / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (nu + static_cast<double>(k)));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Same sign as J_nu on x > 0.
double sign_function(double nu, double x) {
  return nu >= 0.0 ? std::cyl_bessel_j(nu, x) : reduced_series(nu, x);
}

}  // namespace

double bessel_j(double nu, double x) {
  if (x < 0.0) throw PreconditionError("bessel_j: x must be non-negative");
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : HUGE_VAL);
  if (nu >= 0.0) return std::cyl_bessel_j(nu, x);
  return std::pow(0.5 * x, nu) * reduced_series(nu, x);
}

double bessel_first_zero(double nu) {
  if (!(nu >= -0.5)) throw PreconditionError("bessel_first_zero: order must be >= -1/2");
  double lo = kScanStep;
  double f_lo = sign_function(nu, lo);
  for (double hi = lo + kScanStep; hi <= kSearchCap; hi += kScanStep) {
    const double f_hi = sign_function(nu, hi);
    if ((f_lo > 0.0) != (f_hi > 0.0)) {
      double a = lo, b = hi, fa = f_lo;
      for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = sign_function(nu, mid);
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw NumericError("bessel_first_zero: no sign change of J_" + std::to_string(nu) +
                     " below x = " + std::to_string(kSearchCap));
}

}  // namespace cnls
