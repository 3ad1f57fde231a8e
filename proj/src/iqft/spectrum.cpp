#include "iqft/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace iqft {

ParticleSpectrum::ParticleSpectrum(std::size_t species_count,
                                   std::vector<double> masses,
                                   std::vector<std::size_t> conjugation)
    : d_(species_count), masses_(std::move(masses)), conj_(std::move(conjugation)) {
  if (d_ == 0 || masses_.size() != d_ || conj_.size() != d_)
    throw std::invalid_argument("spectrum: inconsistent sizes");
  for (std::size_t a = 0; a < d_; ++a) {
    if (!(masses_[a] > 0.0)) throw std::invalid_argument("spectrum: mass <= 0");
    if (conj_[a] >= d_) throw std::invalid_argument("spectrum: conjugation out of range");
    if (conj_[conj_[a]] != a)
      throw std::invalid_argument("spectrum: conjugation not involutive");
    if (std::abs(masses_[conj_[a]] - masses_[a]) > 0.0)
      throw std::invalid_argument("spectrum: conjugate species mass mismatch");
  }
  mass_gap_ = *std::min_element(masses_.begin(), masses_.end());
}

ParticleSpectrum ParticleSpectrum::neutral(std::size_t species_count, double mass) {
  std::vector<std::size_t> id(species_count);
  std::iota(id.begin(), id.end(), 0);
  return ParticleSpectrum(species_count, std::vector<double>(species_count, mass), id);
}

}  // namespace iqft
