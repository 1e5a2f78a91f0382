#pragma once

namespace cnls {

/// J_nu(x) for x >= 0 from the ascending series. Accurate for the moderate
/// arguments (x up to a few tens) that the first-zero search visits.
double bessel_j(double nu, double x);

/// First positive zero j_{nu,1} of J_nu, nu >= -1/2, by stepping to a sign
/// change and bisecting. Throws NumericError if no bracket is found below the
/// search cap.
double bessel_first_zero(double nu);

}  // namespace cnls
