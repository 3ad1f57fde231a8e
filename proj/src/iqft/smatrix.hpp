#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "iqft/gamma.hpp"
#include "iqft/spectrum.hpp"

namespace iqft {

// Scalar amplitude of the regular family:
//   eps * e^{i a sinh z} * prod_j (sinh b_j - sinh z)/(sinh b_j + sinh z)
// with 0 < Im b_j <= pi/2 and the zero multiset closed under b -> -conj(b).
struct ScalarAmplitude {
  int epsilon = 1;
  double a = 0.0;
  std::vector<Complex> zeros;

  Complex eval(Complex zeta, double pole_tol = 1e-8) const;
  void validate() const;
};

ScalarAmplitude sinh_gordon_amplitude(double g_squared);

// sigma_1, sigma_2, sigma_3 of the O(N) S-matrix at complex rapidity.
struct SigmaTriple {
  Complex s1, s2, s3;
};
// Direct evaluation; throws PoleError near the Gamma poles and at the
// 0/0 quotient points zeta = 0, i pi.
SigmaTriple on_sigma_direct(int N, Complex zeta, double pole_tol = 1e-8);
// Same, but 0/0 points are evaluated as limits by sampling at offsets
// 1e-4, 1e-5 along the real direction with Richardson extrapolation.
SigmaTriple on_sigma(int N, Complex zeta);

enum class SMatrixKind { Constant, ScalarFamily, SinhGordon, Diagonal, ON, UserTable };

// Evaluable two-particle S-matrix. eval() returns the D^2 x D^2 exchange
// tensor with row index (alpha,beta) = alpha*D + beta and column index
// (gamma,delta); S(e_gamma (x) e_delta) = sum S^{ab}_{gd} e_a (x) e_b.
// This is the object entering the permutation action and the ZF relations,
// and it satisfies all seven Definition axioms, in particular the braid
// form of the Yang-Baxter equation and the cyclic crossing rule
// S^{ab}_{cd}(i pi - t) = S^{conj(c) a}_{d conj(b)}(t).
//
// eval_vertex() = F * eval() is the same amplitude in the scattering
// (vertex) picture, in which the O(N) family has the familiar component
// formula and the zero-rapidity value -F. For the other built-in kinds the
// exchange tensor itself has S(0) = -F (or epsilon, when scalar).
class SMatrix {
 public:
  static SMatrix constant_flip(ParticleSpectrum spec, int sign);
  static SMatrix scalar_family(double mass, ScalarAmplitude amp);
  static SMatrix sinh_gordon(double mass, double g_squared);
  // omega_{alpha beta} given as a symmetric table of scalar amplitudes.
  static SMatrix diagonal(ParticleSpectrum spec,
                          std::vector<std::vector<ScalarAmplitude>> omega);
  static SMatrix o_n(int N, double mass);
  // real-theta lookup table with linear interpolation; not analytic.
  static SMatrix user_table(ParticleSpectrum spec, std::vector<double> thetas,
                            std::vector<Eigen::MatrixXcd> values);

  SMatrixKind kind() const { return kind_; }
  const ParticleSpectrum& spectrum() const { return spec_; }
  std::size_t dim() const { return spec_.species_count(); }
  bool analytic() const { return kind_ != SMatrixKind::UserTable; }

  Eigen::MatrixXcd eval(Complex zeta) const;
  Eigen::MatrixXcd eval_vertex(Complex zeta) const;
  Complex entry(std::size_t a, std::size_t b, std::size_t c, std::size_t d,
                Complex zeta) const;
  // D = 1 kinds only.
  Complex scalar(Complex zeta) const;

  int on_N() const { return on_n_; }
  const ScalarAmplitude& amplitude() const { return amp_; }
  const std::vector<std::vector<ScalarAmplitude>>& omega() const { return omega_; }

  // strip metadata: estimates or user-supplied values
  std::optional<double> strip_width() const { return kappa_; }
  std::optional<double> sup_norm_kappa() const { return norm_kappa_; }
  void set_strip_width(double k) { kappa_ = k; }
  void set_sup_norm_kappa(double n) { norm_kappa_ = n; }

 private:
  SMatrix(SMatrixKind kind, ParticleSpectrum spec);

  SMatrixKind kind_;
  ParticleSpectrum spec_;
  ScalarAmplitude amp_;     // ScalarFamily / SinhGordon
  std::vector<std::vector<ScalarAmplitude>> omega_;  // Diagonal
  int on_n_ = 0;            // ON
  int flip_sign_ = 1;       // Constant
  std::vector<double> table_thetas_;            // UserTable
  std::vector<Eigen::MatrixXcd> table_values_;  // UserTable
  std::optional<double> kappa_;
  std::optional<double> norm_kappa_;
};

Eigen::MatrixXcd flip_tensor(std::size_t D);

// Max residuals of the Definition axioms over the sample grids.
struct AxiomReport {
  double unitarity = 0;
  double hermitian_analyticity = 0;
  double yang_baxter = 0;
  double crossing = 0;
  double pct = 0;
  double translational = 0;
  std::optional<double> gauge;  // empty when no representation was supplied
  std::string grid_description;

  double max_residual() const;
};

AxiomReport check_axioms(
    const SMatrix& s, const std::vector<double>& grid,
    const std::vector<std::pair<double, double>>& pair_grid,
    const std::vector<Eigen::MatrixXcd>* gauge_reps = nullptr);

std::vector<double> default_theta_grid();                       // [-4,4], 81 pts
std::vector<std::pair<double, double>> default_pair_grid();     // 20 x 20

// Resolution-dependent scan of the regularity data: kappa_est is the largest
// sampled lambda in (0, pi/2] with min_theta |det S(theta + i lambda)| above
// tolerance, and sup_norm the max sampled operator norm on the closed
// enlarged strip S(-kappa_est, pi + kappa_est).
struct StripEstimate {
  double kappa_est = 0;
  double sup_norm = 0;
  bool capped = false;                  // scan reached the pi/2 cap
  std::vector<double> pole_candidates;  // lambdas where the det dipped
  std::size_t lambda_samples = 0;
  std::size_t theta_samples = 0;
};

StripEstimate estimate_kappa_and_norm(const SMatrix& s,
                                      std::size_t lambda_samples = 40,
                                      std::size_t theta_samples = 81,
                                      double det_tol = 1e-6);

}  // namespace iqft
