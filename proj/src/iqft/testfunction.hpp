#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "iqft/grid.hpp"
#include "iqft/spectrum.hpp"

namespace iqft {

enum class WedgeTag { None, Right, Left };

// Smooth test function on 2d Minkowski space with species weights:
// f^alpha(x) = weight_alpha * profile(x). Bump profiles vanish identically
// outside the ball of radius r around the center; gaussian windows decay.
class TestFunction2D {
 public:
  enum class Kind { Bump, GaussianWindow };

  static TestFunction2D bump(std::array<double, 2> center, double radius,
                             std::vector<std::complex<double>> weights,
                             WedgeTag tag = WedgeTag::None,
                             std::array<double, 2> tag_shift = {0, 0});
  static TestFunction2D gaussian(std::array<double, 2> center,
                                 std::array<double, 2> widths,
                                 std::vector<std::complex<double>> weights);

  Kind kind() const { return kind_; }
  WedgeTag tag() const { return tag_; }
  std::size_t species_count() const { return weights_.size(); }
  const std::array<double, 2>& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<std::complex<double>>& weights() const { return weights_; }

  double profile(double x0, double x1) const;
  double dalembertian_profile(double x0, double x1) const;  // (d0^2 - d1^2) profile
  std::complex<double> value(double x0, double x1, std::size_t alpha) const {
    return weights_[alpha] * profile(x0, x1);
  }

  // integration box covering the (effective) support
  void support_box(double& x0a, double& x0b, double& x1a, double& x1b) const;

  // complex conjugated species-partner function f^*: (f*)^a = conj f^{conj a}
  TestFunction2D star(const ParticleSpectrum& spec) const;

 private:
  Kind kind_ = Kind::Bump;
  std::array<double, 2> center_{0, 0};
  double radius_ = 1.0;
  std::array<double, 2> widths_{1, 1};
  std::vector<std::complex<double>> weights_;
  WedgeTag tag_ = WedgeTag::None;
};

// signed distance into the tagged wedge: positive iff the point is inside
double wedge_distance(WedgeTag tag, std::array<double, 2> shift,
                      std::array<double, 2> x);

// On-shell Fourier transform
//   f^{+-, alpha}(zeta) = (1/2pi) int d^2x e^{+- i p_alpha(zeta) . x} f^alpha(x)
// by tensor Gauss-Legendre quadrature over the support box.
class OnShellTransformer {
 public:
  OnShellTransformer(const ParticleSpectrum& spec, std::size_t quad_points = 64);

  std::complex<double> transform(const TestFunction2D& f, int sign,
                                 std::complex<double> zeta, std::size_t alpha) const;
  // transform of (box + m^2) f (for the Klein-Gordon residual)
  std::complex<double> transform_kg(const TestFunction2D& f, int sign,
                                    std::complex<double> zeta, std::size_t alpha) const;

  GridFunction sample(const TestFunction2D& f, int sign, const RapidityGrid& g) const;
  std::size_t quad_points() const { return nq_; }

 private:
  ParticleSpectrum spec_;
  std::size_t nq_;
  std::vector<double> nodes_, gl_weights_;  // on [-1, 1]
};

// rapidity support with the 1e-10 relative magnitude rule
struct SupportInterval {
  double lo = 0, hi = 0;
  bool empty = true;
};
SupportInterval grid_support(const GridFunction& f, double rel_tol = 1e-10);
// precursor ordering: max supp(f) + gap < min supp(g)
bool precedes(const GridFunction& f, const GridFunction& g, double gap = 0.1);

}  // namespace iqft
