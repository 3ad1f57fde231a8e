#pragma once

#include <complex>
#include <random>
#include <vector>

#include "iqft/grid.hpp"
#include "iqft/permutation.hpp"
#include "iqft/smatrix.hpp"
#include "iqft/testfunction.hpp"

namespace iqft {

// Blaschke-type deformation function
//   R(a) = sign * prod_k (zeta_k - a)/(zeta_k + a),  Im zeta_k > 0,
// with the zero multiset closed under zeta -> -conj(zeta).
class DeformationFunction {
 public:
  DeformationFunction(int sign, std::vector<Complex> zeros);

  static DeformationFunction one() { return DeformationFunction(+1, {}); }
  static DeformationFunction minus_one() { return DeformationFunction(-1, {}); }

  int sign() const { return sign_; }
  const std::vector<Complex>& zeros() const { return zeros_; }

  // Im a >= 0 required; poles sit in the open lower half plane
  Complex eval(Complex a) const;
  DeformationFunction negated() const { return DeformationFunction(-sign_, zeros_); }

 private:
  int sign_;
  std::vector<Complex> zeros_;
};

// Skew-symmetric deformation matrix; d = 2 normal form lambda*[[0,1],[1,0]],
// d = 4 normal form with kappa, kappa'.
class QMatrix {
 public:
  static QMatrix two_dim(double lambda);
  static QMatrix four_dim(double kappa, double kappa_prime);

  std::size_t d() const { return d_; }
  double lambda() const { return lambda_; }
  QMatrix negated() const;
  // (Qp)^mu
  std::vector<double> apply(const std::vector<double>& p) const;
  // Minkowski product a.b = a0 b0 - sum a_i b_i
  static double minkowski(const std::vector<double>& a, const std::vector<double>& b);
  // skewness residual max |(Qp).q + p.(Qq)| on sample vectors
  double skew_residual() const;
  // Lambda Q Lambda^{-1} for a boost in the (0,1)-plane with rapidity chi
  std::vector<std::vector<double>> boost_conjugated(double chi) const;
  const std::vector<std::vector<double>>& entries() const { return q_; }

 private:
  QMatrix(std::size_t d, std::vector<std::vector<double>> q, double lambda);
  std::size_t d_;
  std::vector<std::vector<double>> q_;
  double lambda_ = 0;
};

// Discrete on-shell momentum set: d = 2 grids come from a rapidity grid,
// d > 2 sets are user-supplied with unit weights (algebraic checks only).
struct MomentumSet {
  std::size_t d = 2;
  std::vector<std::vector<double>> momenta;  // on-shell d-vectors
  std::vector<double> weights;

  std::size_t size() const { return momenta.size(); }
  static MomentumSet from_rapidity_grid(const RapidityGrid& g, double mass);
  static MomentumSet discrete(std::size_t d, std::vector<std::vector<double>> momenta);
};

// Antisymmetric (CAR) Fock vector over the momentum set, layers 0..n_max.
class FermiFockVector {
 public:
  FermiFockVector(const MomentumSet& ms, std::size_t n_max);

  static FermiFockVector vacuum(const MomentumSet& ms, std::size_t n_max);
  static FermiFockVector random_antisymmetric(const MomentumSet& ms,
                                              std::size_t n_max,
                                              std::mt19937_64& rng);

  const MomentumSet& momenta() const { return ms_; }
  std::size_t n_max() const { return layers_.size() - 1; }
  std::size_t points() const { return ms_.size(); }

  std::vector<Complex>& layer(std::size_t n) { return layers_[n]; }
  const std::vector<Complex>& layer(std::size_t n) const { return layers_[n]; }

  double norm() const;
  double antisymmetry_residual() const;
  FermiFockVector& operator+=(const FermiFockVector& rhs);
  FermiFockVector& operator-=(const FermiFockVector& rhs);
  FermiFockVector& operator*=(Complex c);

 private:
  MomentumSet ms_;
  std::vector<std::vector<Complex>> layers_;
};

Complex inner(const FermiFockVector& a, const FermiFockVector& b);

// one-particle functions over the momentum set
using MomentumFunction = std::vector<Complex>;
Complex inner(const MomentumSet& ms, const MomentumFunction& a, const MomentumFunction& b);
double norm(const MomentumSet& ms, const MomentumFunction& a);

// CAR operators
FermiFockVector a_star(const MomentumFunction& phi, const FermiFockVector& in);
FermiFockVector a_annihilate(const MomentumFunction& phi, const FermiFockVector& in);

// T_R(x): layer n multiplied by prod_k R(x . p_k)
FermiFockVector t_r(const DeformationFunction& R, const std::vector<double>& x,
                    const FermiFockVector& in);

// deformed operators a*_{R,Q}(phi) = int phi a*(p) T_R(Qp)^* and its adjoint
FermiFockVector a_star_rq(const DeformationFunction& R, const QMatrix& Q,
                          const MomentumFunction& phi, const FermiFockVector& in);
FermiFockVector a_rq(const DeformationFunction& R, const QMatrix& Q,
                     const MomentumFunction& phi, const FermiFockVector& in);

// Z = (-1)^{N(N-1)/2}
FermiFockVector z_grading(const FermiFockVector& in);

// phi_{R,Q}(f) = a*_{R,Q}(f+) + a_{R,Q}(conj f-), d = 2 via on-shell transforms
FermiFockVector phi_rq(const DeformationFunction& R, const QMatrix& Q,
                       const MomentumFunction& fplus, const MomentumFunction& fminus,
                       const FermiFockVector& in);

// smeared residuals of the deformed exchange relations (exchange1)
struct DeformedExchangeResiduals {
  double star_star = 0, ann_ann = 0, mixed = 0;
  double max() const { return std::max({star_star, ann_ann, mixed}); }
};
DeformedExchangeResiduals check_deformed_exchange(const DeformationFunction& R,
                                                  const QMatrix& Q, const QMatrix& Qp,
                                                  const MomentumFunction& phi,
                                                  const MomentumFunction& psi,
                                                  const FermiFockVector& Psi);

// commutator system between (R,Q) and (-R,-Q) operators
DeformedExchangeResiduals check_opposite_commutators(const DeformationFunction& R,
                                                     const QMatrix& Q,
                                                     const MomentumFunction& phi,
                                                     const MomentumFunction& psi,
                                                     const FermiFockVector& Psi);

// n-particle integrand of the relative-locality integral for
// [phi_{R,Q}(f), phi_{-R,-Q}(g)] Psi, evaluated by quadrature over a
// rapidity window; returns a per-resolution residual on the state
struct LocalityIntegralPoint {
  std::size_t quad_points;
  double residual;
};
std::vector<LocalityIntegralPoint> locality_residual_integral(
    const DeformationFunction& R, const QMatrix& Q, const ParticleSpectrum& spec,
    const OnShellTransformer& tr, const TestFunction2D& f, const TestFunction2D& g,
    const FermiFockVector& Psi, const std::vector<std::size_t>& resolutions,
    double theta_max, bool enforce_tags = true);

// the two integrals of the locality proof: over R and over R + i pi
std::pair<Complex, Complex> locality_contour_pair(
    const DeformationFunction& R, const QMatrix& Q, const ParticleSpectrum& spec,
    const OnShellTransformer& tr, const TestFunction2D& f, const TestFunction2D& g,
    const std::vector<double>& p_state, std::size_t quad_points, double theta_max);

// two-particle scattering element, route A (Fock) and route B (double
// integral); the in-pair is ordered k before h, see the module notes.
struct TwoParticleElement {
  Complex route_a;
  Complex route_b;
};
TwoParticleElement two_particle_element(const DeformationFunction& R, const QMatrix& Q,
                                        const MomentumSet& ms,
                                        const MomentumFunction& fplus,
                                        const MomentumFunction& gplus,
                                        const MomentumFunction& hplus,
                                        const MomentumFunction& kplus);

// S_lambda(zeta) = -R(lambda m^2 sinh zeta)^2 and the associated scalar
// S-matrix object (the zero set transported through arcsinh)
Complex scattering_function_bridge(const DeformationFunction& R, double lambda,
                                   double mass, Complex zeta);
SMatrix bridge_smatrix(const DeformationFunction& R, double lambda, double mass);

// ZF relations for z_lambda = a_{R,Q}(p(theta)) with S_lambda, smeared
DeformedExchangeResiduals zf_bridge_check(const DeformationFunction& R, double lambda,
                                          double mass, const RapidityGrid& grid,
                                          const MomentumFunction& phi,
                                          const MomentumFunction& psi,
                                          const FermiFockVector& Psi);

}  // namespace iqft
