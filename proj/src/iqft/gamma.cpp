#include "iqft/gamma.hpp"

#include <cmath>

namespace iqft {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// g = 607/128, 15 coefficients: ~15 significant digits on the half plane
constexpr double kLanczosG = 4.7421875;
constexpr int kN = 15;
constexpr double kLanczos[kN] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,
    1.5808870322491248884e-4,   -2.1026444172410488319e-4,
    2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,
    3.6899182659531622704e-6};

Complex lanczos_positive_half(Complex z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  Complex x = kLanczos[0];
  for (int i = 1; i < kN; ++i) x += kLanczos[i] / (z + Complex(i, 0));
  Complex t = z + (kLanczosG + 0.5);
  return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

double gamma_pole_distance(Complex z) {
  if (z.real() > 0.5) return std::abs(z);  // no pole nearby, a safe lower bound
  double n = std::round(z.real());
  if (n > 0.0) n = 0.0;
  return std::abs(z - Complex(n, 0.0));
}

Complex cgamma(Complex z, double pole_tol) {
  if (gamma_pole_distance(z) < pole_tol)
    throw PoleError("gamma evaluated within tolerance of a pole");
  if (z.real() < 0.5) {
    // reflection; sin(pi z) is safe here since z is not near an integer
    return kPi / (std::sin(kPi * z) * lanczos_positive_half(1.0 - z));
  }
  return lanczos_positive_half(z);
}

}  // namespace iqft
