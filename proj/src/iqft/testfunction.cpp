#include "iqft/testfunction.hpp"

#include <cmath>
#include <stdexcept>

namespace iqft {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

double wedge_distance(WedgeTag tag, std::array<double, 2> shift,
                      std::array<double, 2> x) {
  double y0 = x[0] - shift[0], y1 = x[1] - shift[1];
  switch (tag) {
    case WedgeTag::Right:
      return (y1 - std::abs(y0)) / std::sqrt(2.0);
    case WedgeTag::Left:
      return (-y1 - std::abs(y0)) / std::sqrt(2.0);
    case WedgeTag::None:
      return 0.0;
  }
  return 0.0;
}

TestFunction2D TestFunction2D::bump(std::array<double, 2> center, double radius,
                                    std::vector<std::complex<double>> weights,
                                    WedgeTag tag, std::array<double, 2> tag_shift) {
  if (!(radius > 0)) throw std::invalid_argument("bump: radius <= 0");
  if (weights.empty()) throw std::invalid_argument("bump: no species weights");
  TestFunction2D f;
  f.kind_ = Kind::Bump;
  f.center_ = center;
  f.radius_ = radius;
  f.weights_ = std::move(weights);
  f.tag_ = tag;
  if (tag != WedgeTag::None && wedge_distance(tag, tag_shift, center) <= radius)
    throw std::invalid_argument("bump: declared wedge tag inconsistent with support");
  return f;
}

TestFunction2D TestFunction2D::gaussian(std::array<double, 2> center,
                                        std::array<double, 2> widths,
                                        std::vector<std::complex<double>> weights) {
  if (!(widths[0] > 0 && widths[1] > 0))
    throw std::invalid_argument("gaussian: widths <= 0");
  TestFunction2D f;
  f.kind_ = Kind::GaussianWindow;
  f.center_ = center;
  f.widths_ = widths;
  f.weights_ = std::move(weights);
  f.tag_ = WedgeTag::None;
  return f;
}

double TestFunction2D::profile(double x0, double x1) const {
  const double y0 = x0 - center_[0], y1 = x1 - center_[1];
  if (kind_ == Kind::Bump) {
    const double u = (y0 * y0 + y1 * y1) / (radius_ * radius_);
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u));
  }
  return std::exp(-0.5 * (y0 * y0 / (widths_[0] * widths_[0]) +
                          y1 * y1 / (widths_[1] * widths_[1])));
}

double TestFunction2D::dalembertian_profile(double x0, double x1) const {
  const double y0 = x0 - center_[0], y1 = x1 - center_[1];
  if (kind_ == Kind::Bump) {
    const double r2 = radius_ * radius_;
    const double u = (y0 * y0 + y1 * y1) / r2;
    if (u >= 1.0) return 0.0;
    const double s = 1.0 / (1.0 - u);
    const double chi = std::exp(-s);
    const double chi1 = -chi * s * s;                       // d chi / du
    const double chi2 = chi * (s * s * s * s - 2 * s * s * s);  // d^2 chi / du^2
    // d_i^2 f = chi2 (2 y_i / r2)^2 + chi1 * 2/r2 ; the chi1 parts cancel in
    // the d'Alembertian
    return chi2 * 4.0 * (y0 * y0 - y1 * y1) / (r2 * r2);
  }
  const double s0 = widths_[0] * widths_[0], s1 = widths_[1] * widths_[1];
  const double f = profile(x0, x1);
  return f * ((y0 * y0 / (s0 * s0) - 1.0 / s0) - (y1 * y1 / (s1 * s1) - 1.0 / s1));
}

void TestFunction2D::support_box(double& x0a, double& x0b, double& x1a,
                                 double& x1b) const {
  if (kind_ == Kind::Bump) {
    x0a = center_[0] - radius_;
    x0b = center_[0] + radius_;
    x1a = center_[1] - radius_;
    x1b = center_[1] + radius_;
  } else {
    x0a = center_[0] - 9 * widths_[0];
    x0b = center_[0] + 9 * widths_[0];
    x1a = center_[1] - 9 * widths_[1];
    x1b = center_[1] + 9 * widths_[1];
  }
}

TestFunction2D TestFunction2D::star(const ParticleSpectrum& spec) const {
  TestFunction2D f = *this;
  for (std::size_t a = 0; a < weights_.size(); ++a)
    f.weights_[a] = std::conj(weights_[spec.conjugate(a)]);
  return f;
}

OnShellTransformer::OnShellTransformer(const ParticleSpectrum& spec,
                                       std::size_t quad_points)
    : spec_(spec), nq_(quad_points) {
  if (nq_ < 8) throw std::invalid_argument("on-shell transform: quadrature too coarse");
  gauss_legendre_rule(nq_, nodes_, gl_weights_);
}

std::complex<double> OnShellTransformer::transform(const TestFunction2D& f, int sign,
                                                   std::complex<double> zeta,
                                                   std::size_t alpha) const {
  if (f.weights().size() != spec_.species_count() && f.weights().size() != 1)
    throw std::invalid_argument("on-shell transform: species mismatch");
  double a0, b0, a1, b1;
  f.support_box(a0, b0, a1, b1);
  const std::complex<double> p0 = spec_.momentum0(alpha, zeta);
  const std::complex<double> p1 = spec_.momentum1(alpha, zeta);
  const double h0 = 0.5 * (b0 - a0), m0 = 0.5 * (a0 + b0);
  const double h1 = 0.5 * (b1 - a1), m1 = 0.5 * (a1 + b1);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < nq_; ++i) {
    const double x0 = m0 + h0 * nodes_[i];
    std::complex<double> inner = 0.0;
    for (std::size_t j = 0; j < nq_; ++j) {
      const double x1 = m1 + h1 * nodes_[j];
      const double v = f.profile(x0, x1);
      if (v == 0.0) continue;
      std::complex<double> ph = std::exp(std::complex<double>(0, 1) *
                                         double(sign) * (p0 * x0 - p1 * x1));
      inner += gl_weights_[j] * v * ph;
    }
    acc += gl_weights_[i] * inner;
  }
  std::complex<double> wa = f.weights().size() == 1 ? f.weights()[0] : f.weights()[alpha];
  return wa * acc * h0 * h1 / (2 * kPi);
}

std::complex<double> OnShellTransformer::transform_kg(const TestFunction2D& f,
                                                      int sign,
                                                      std::complex<double> zeta,
                                                      std::size_t alpha) const {
  double a0, b0, a1, b1;
  f.support_box(a0, b0, a1, b1);
  const std::complex<double> p0 = spec_.momentum0(alpha, zeta);
  const std::complex<double> p1 = spec_.momentum1(alpha, zeta);
  const double m2 = spec_.mass(alpha) * spec_.mass(alpha);
  const double h0 = 0.5 * (b0 - a0), m0 = 0.5 * (a0 + b0);
  const double h1 = 0.5 * (b1 - a1), m1 = 0.5 * (a1 + b1);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < nq_; ++i) {
    const double x0 = m0 + h0 * nodes_[i];
    std::complex<double> inner = 0.0;
    for (std::size_t j = 0; j < nq_; ++j) {
      const double x1 = m1 + h1 * nodes_[j];
      const double v = f.dalembertian_profile(x0, x1) + m2 * f.profile(x0, x1);
      std::complex<double> ph = std::exp(std::complex<double>(0, 1) *
                                         double(sign) * (p0 * x0 - p1 * x1));
      inner += gl_weights_[j] * v * ph;
    }
    acc += gl_weights_[i] * inner;
  }
  std::complex<double> wa = f.weights().size() == 1 ? f.weights()[0] : f.weights()[alpha];
  return wa * acc * h0 * h1 / (2 * kPi);
}

GridFunction OnShellTransformer::sample(const TestFunction2D& f, int sign,
                                        const RapidityGrid& g) const {
  GridFunction out(g, spec_.species_count());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t a = 0; a < spec_.species_count(); ++a)
      out.at(i, a) = transform(f, sign, g.points[i], a);
  return out;
}

SupportInterval grid_support(const GridFunction& f, double rel_tol) {
  double mx = 0;
  for (std::size_t i = 0; i < f.grid().size(); ++i)
    for (std::size_t a = 0; a < f.species_count(); ++a)
      mx = std::max(mx, std::abs(f.at(i, a)));
  SupportInterval s;
  if (mx == 0) return s;
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    double v = 0;
    for (std::size_t a = 0; a < f.species_count(); ++a)
      v = std::max(v, std::abs(f.at(i, a)));
    if (v > rel_tol * mx) {
      if (s.empty) {
        s.lo = s.hi = f.grid().points[i];
        s.empty = false;
      } else {
        s.hi = f.grid().points[i];
      }
    }
  }
  return s;
}

bool precedes(const GridFunction& f, const GridFunction& g, double gap) {
  SupportInterval a = grid_support(f), b = grid_support(g);
  if (a.empty || b.empty) return false;
  return a.hi + gap < b.lo;
}

}  // namespace iqft
