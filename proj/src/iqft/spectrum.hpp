#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace iqft {

// Particle spectrum: D species with masses m_[alpha] and a charge
// conjugation involution alpha -> conj(alpha) preserving masses.
class ParticleSpectrum {
 public:
  ParticleSpectrum(std::size_t species_count, std::vector<double> masses,
                   std::vector<std::size_t> conjugation);

  static ParticleSpectrum neutral(std::size_t species_count, double mass);

  std::size_t species_count() const { return d_; }
  double mass(std::size_t alpha) const { return masses_[alpha]; }
  std::size_t conjugate(std::size_t alpha) const { return conj_[alpha]; }
  double mass_gap() const { return mass_gap_; }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<std::size_t>& conjugation() const { return conj_; }

  // upper mass shell p(theta) = m (cosh, sinh); Minkowski product with a
  // 2-vector x is p . x = p0 x0 - p1 x1.
  std::complex<double> momentum0(std::size_t alpha, std::complex<double> zeta) const {
    return masses_[alpha] * std::cosh(zeta);
  }
  std::complex<double> momentum1(std::size_t alpha, std::complex<double> zeta) const {
    return masses_[alpha] * std::sinh(zeta);
  }

 private:
  std::size_t d_;
  std::vector<double> masses_;
  std::vector<std::size_t> conj_;
  double mass_gap_;
};

}  // namespace iqft
