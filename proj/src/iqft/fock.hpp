#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "iqft/grid.hpp"
#include "iqft/permutation.hpp"
#include "iqft/smatrix.hpp"
#include "iqft/spectrum.hpp"

namespace iqft {

// Cache of S(theta_b - theta_a) tensors for all grid point pairs.
class SPairCache {
 public:
  SPairCache(const SMatrix& s, const RapidityGrid& grid);
  // tensor applied when slots carrying grid points (a, b) are exchanged:
  // S(theta_b - theta_a), D^2 x D^2
  const Eigen::MatrixXcd& at(std::size_t a, std::size_t b) const {
    return cache_[a * g_ + b];
  }
  const RapidityGrid& grid() const { return grid_; }
  const ParticleSpectrum& spectrum() const { return *spec_; }
  std::size_t species() const { return d_; }

  // mutation-control hook for negative tests: scales one cached tensor
  void corrupt_entry(std::size_t a, std::size_t b, std::complex<double> factor) {
    cache_[a * g_ + b] *= factor;
  }

 private:
  RapidityGrid grid_;
  const ParticleSpectrum* spec_;
  std::size_t g_, d_;
  std::vector<Eigen::MatrixXcd> cache_;
};

// Dense n-particle layer over (grid x species)^n; slot value = point*D + a.
class FockLayer {
 public:
  FockLayer() = default;
  FockLayer(std::size_t slots, std::size_t base);

  std::size_t slots() const { return n_; }
  std::size_t base() const { return base_; }
  std::size_t size() const { return data_.size(); }
  std::complex<double>& operator[](std::size_t t) { return data_[t]; }
  std::complex<double> operator[](std::size_t t) const { return data_[t]; }

  std::size_t stride(std::size_t slot) const;  // row-major, slot 0 major

  FockLayer& operator+=(const FockLayer& rhs);
  FockLayer& operator-=(const FockLayer& rhs);
  FockLayer& operator*=(std::complex<double> c);

 private:
  std::size_t n_ = 0, base_ = 0;
  std::vector<std::complex<double>> data_;
};

// Truncated Fock vector with layers 0..N_max.
class FockVector {
 public:
  FockVector(const RapidityGrid& grid, const ParticleSpectrum& spec,
             std::size_t n_max);

  static FockVector vacuum(const RapidityGrid& g, const ParticleSpectrum& s,
                           std::size_t n_max);
  static FockVector one_particle(const GridFunction& phi, const ParticleSpectrum& s,
                                 std::size_t n_max);
  // iid complex gaussian coefficients on layers 1..n_max (layer 0 zero),
  // normalized
  static FockVector random(const RapidityGrid& g, const ParticleSpectrum& s,
                           std::size_t n_max, std::mt19937_64& rng);

  const RapidityGrid& grid() const { return grid_; }
  const ParticleSpectrum& spectrum() const { return spec_; }
  std::size_t n_max() const { return layers_.size() - 1; }
  std::size_t base() const { return grid_.size() * spec_.species_count(); }
  FockLayer& layer(std::size_t n) { return layers_[n]; }
  const FockLayer& layer(std::size_t n) const { return layers_[n]; }

  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  double norm() const;
  double layer_weight_norm(std::size_t n) const;
  FockVector& operator+=(const FockVector& rhs);
  FockVector& operator-=(const FockVector& rhs);
  FockVector& operator*=(std::complex<double> c);

 private:
  RapidityGrid grid_;
  ParticleSpectrum spec_;
  std::vector<FockLayer> layers_;
  bool truncated_ = false;
};

std::complex<double> inner(const FockVector& a, const FockVector& b);
std::complex<double> layer_inner(const RapidityGrid& g, std::size_t D,
                                 const FockLayer& a, const FockLayer& b);
double layer_norm(const RapidityGrid& g, std::size_t D, const FockLayer& a);

// --- the S-dependent permutation action -----------------------------------

// D_n(tau_k) on a single layer (0-based k, exchanging slots k and k+1).
FockLayer d_n_transposition(const SPairCache& sc, std::size_t k, const FockLayer& in);
// D_n(pi) via the word of pi (applies the rightmost letter first).
FockLayer d_n(const SPairCache& sc, const Permutation& pi, const FockLayer& in);
// free fermionic/bosonic reference action D_n^sign with S = sign * F
FockLayer d_n_free(std::size_t D, int sign, const Permutation& pi, const FockLayer& in);
// P_n = (1/n!) sum_pi D_n(pi); guard n <= 8
FockLayer project_pn(const SPairCache& sc, const FockLayer& in);

// S_n^pi tensor at a fixed rapidity tuple, as a matrix on (C^D)^{ox n}
Eigen::MatrixXcd s_tensor_at(const SMatrix& s, const Permutation& pi,
                             const std::vector<double>& thetas);
// same, with rapidities given as grid point indices (uses the pair cache)
Eigen::MatrixXcd s_tensor_at_points(const SPairCache& sc, const Permutation& pi,
                                    const std::vector<std::size_t>& pts);

// --- Zamolodchikov-Faddeev operators --------------------------------------

// z^dagger(phi) explicit form (1/sqrt n) sum_k D_n(sigma_k)(phi ox Psi_{n-1});
// drops the (N_max+1)-layer component and marks truncation.
FockVector z_dagger(const SPairCache& sc, const GridFunction& phi, const FockVector& in);
// projector form P a^dagger(phi) P
FockVector z_dagger_projected(const SPairCache& sc, const GridFunction& phi,
                              const FockVector& in);
FockVector z_annihilate(const SPairCache& sc, const GridFunction& phi,
                        const FockVector& in);

// point kernels z_{i a}, z^dagger_{i a} (grid delta normalization 1/w_i)
FockLayer z_point(const SPairCache& sc, std::size_t i, std::size_t alpha,
                  const FockLayer& in_upper);
FockLayer z_dagger_point(const SPairCache& sc, std::size_t i, std::size_t alpha,
                         const FockLayer& in_lower);

// particle number, PCT, translations
FockVector apply_number_sqrt(const FockVector& in, double shift);  // (N+shift)^{1/2}
FockVector pct_J(const FockVector& in);
FockVector translate_U(const std::array<double, 2>& a, const FockVector& in);

// --- checks ----------------------------------------------------------------

struct ExchangeResiduals {
  double zz = 0, zdzd = 0, mixed = 0;
  double max() const { return std::max({zz, zdzd, mixed}); }
};
// smeared residuals of the three ZF relations on the state Psi
ExchangeResiduals check_exchange_relations(const SPairCache& sc,
                                           const GridFunction& phi,
                                           const GridFunction& psi,
                                           const FockVector& Psi);

struct NumberBoundPair {
  double lhs_z, rhs_z;        // ||z(phi)Psi||   vs ||phi|| ||N^{1/2}Psi||
  double lhs_zd, rhs_zd;      // ||zd(phi)Psi||  vs ||phi|| ||(N+1)^{1/2}Psi||
};
NumberBoundPair number_bound_check(const SPairCache& sc, const GridFunction& phi,
                                   const FockVector& Psi);

// residual of I_n D_n(tau_k) = D_n^- (tau_k) I_n on a layer, scalar S only
double check_intertwining(const SMatrix& s, const RapidityGrid& grid,
                          const FockLayer& psi);

}  // namespace iqft
