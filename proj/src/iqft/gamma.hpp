#pragma once

#include <complex>
#include <stdexcept>

namespace iqft {

using Complex = std::complex<double>;

// Thrown when an evaluation lands within tolerance of a pole of Gamma or of
// a Blaschke denominator zero. Residuals computed from such points would be
// meaningless, so the caller sees an error instead of a large number.
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Distance from z to the nearest pole of Gamma (the non-positive integers).
double gamma_pole_distance(Complex z);

// Complex Gamma function, Lanczos approximation (g = 7, 9 coefficients),
// reflected to Re z < 0.5. Accurate to ~14 significant digits away from the
// poles. Throws PoleError within `pole_tol` of a pole.
Complex cgamma(Complex z, double pole_tol = 1e-8);

}  // namespace iqft
