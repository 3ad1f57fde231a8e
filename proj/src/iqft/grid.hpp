#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace iqft {

class ParticleSpectrum;

// Discretization of L^2(R, dtheta): strictly increasing points with positive
// quadrature weights. All smeared identities in the library are stated with
// respect to the weighted inner product sum_i w_i conj(a_i) b_i and the
// grid delta rule delta(theta_i - theta_j) -> delta_ij / w_i.
struct RapidityGrid {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }

  static RapidityGrid uniform(double a, double b, std::size_t n);         // trapezoid
  static RapidityGrid gauss_legendre(double a, double b, std::size_t n);

  bool same_as(const RapidityGrid& other, double tol = 1e-14) const;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
void gauss_legendre_rule(std::size_t n, std::vector<double>& nodes,
                         std::vector<double>& weights);

// One-particle vector: values indexed (grid point, species).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const RapidityGrid& grid, std::size_t species_count);

  const RapidityGrid& grid() const { return grid_; }
  std::size_t species_count() const { return species_; }

  std::complex<double>& at(std::size_t i, std::size_t alpha) {
    return values_[i * species_ + alpha];
  }
  std::complex<double> at(std::size_t i, std::size_t alpha) const {
    return values_[i * species_ + alpha];
  }

  double norm() const;
  GridFunction conjugated() const;
  // One-particle PCT: (J f)^alpha(theta) = conj f^{conj(alpha)}(theta).
  GridFunction pct(const ParticleSpectrum& spec) const;

  GridFunction& operator+=(const GridFunction& rhs);
  GridFunction& operator*=(std::complex<double> c);

 private:
  RapidityGrid grid_;
  std::size_t species_ = 0;
  std::vector<std::complex<double>> values_;
};

std::complex<double> inner(const GridFunction& a, const GridFunction& b);

}  // namespace iqft
