#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "iqft/gamma.hpp"
#include "iqft/grid.hpp"

namespace iqft {

// Inputs of the nuclearity bound chain. gamma, gamma' are the intertwiner
// norm constants; they default to ||S||_kappa^{1/2} (the scalar-case value)
// and are user inputs otherwise.
struct NuclearityParams {
  std::size_t D = 1;
  double mass_gap = 1.0;
  double kappa = 1.0;       // 0 < kappa < pi/2
  double s_norm = 1.0;      // ||S||_kappa
  double gamma = 1.0;
  double gamma_prime = 1.0;

  void validate() const;
  static NuclearityParams with_default_gamma(std::size_t D, double mass_gap,
                                             double kappa, double s_norm);
};

// ||S||_k D^{1/2} max{1, sqrt2 e^{-s m0 sin k} / (sqrt(k) (pi s m0 sin k)^{1/4})}
double upsilon(const NuclearityParams& p, double s);
// (2D/(pi k)) e^{-s m0/2} sqrt(4 pi/(s m0)); ||X_n||_1 <= n^n x^n
double x_bound(const NuclearityParams& p, double s);

struct XiBound {
  double raw;       // (n^n/n!) (2 g g' upsilon(s/2) x(s))^n
  double stirling;  // (1/sqrt(2 pi n)) (2 e g g' upsilon(s/2) x(s))^n
};
XiBound xi_n_bound(const NuclearityParams& p, double s, std::size_t n);

// q(s) = 2 e gamma gamma' upsilon(s/2) x(s)
double q_of_s(const NuclearityParams& p, double s);

struct SMinResult {
  double s_min;
  double q_at_root;
  bool monotone;      // sampled strict decrease on the bracket
  std::size_t iterations;
};
SMinResult s_min(const NuclearityParams& p, double lo, double hi,
                 double tol = 1e-10, std::size_t monotone_samples = 64);

// --- trace-class kernel numerics -------------------------------------------

struct KernelReport {
  double trace_norm_numeric = 0;   // sum of singular values (x D species copies)
  double analytic_bound = 0;
  double trace_real = 0;           // for the positive R family
  double min_eigenvalue = 0;       // for the R family
  std::size_t grid_points = 0;
};

// T_{a,b}(t,t') = e^{-a cosh t}/(t' - t + i b), per species copy
KernelReport kernel_t_ab(double a, double b, const RapidityGrid& grid,
                         std::size_t species = 1);

// R_{g,b}(t,t') = (-sign b/2 pi i) conj(g(t)) g(t')/(t' - t + i b)
KernelReport kernel_r_gb(const std::function<Complex(double)>& g, double b,
                         const RapidityGrid& grid, std::size_t species = 1);

// numeric trace norms of (1/pi) e^{-s m cosh t}/(t'-t +- i pi/2); the half
// sum bounds ||X_1(s)||_1
struct OneParticleNuclearity {
  double norm_plus, norm_minus, x1_bound;
};
OneParticleNuclearity one_particle_nuclearity(double s, double mass,
                                              const RapidityGrid& grid);

}  // namespace iqft
