#include "iqft/grid.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "iqft/spectrum.hpp"

namespace iqft {

RapidityGrid RapidityGrid::uniform(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform grid needs >= 2 points");
  RapidityGrid g;
  g.points.resize(n);
  g.weights.resize(n);
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.points[i] = a + h * double(i);
    g.weights[i] = (i == 0 || i + 1 == n) ? h / 2 : h;
  }
  return g;
}

void gauss_legendre_rule(std::size_t n, std::vector<double>& nodes,
                         std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * double(j) + 1.0) * x * p1 - double(j) * p2) / double(j + 1);
      }
      pp = double(n) * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

RapidityGrid RapidityGrid::gauss_legendre(double a, double b, std::size_t n) {
  std::vector<double> x, w;
  gauss_legendre_rule(n, x, w);
  RapidityGrid g;
  g.points.resize(n);
  g.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    g.points[i] = mid + half * x[i];
    g.weights[i] = half * w[i];
  }
  return g;
}

bool RapidityGrid::same_as(const RapidityGrid& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(points[i] - other.points[i]) > tol) return false;
    if (std::abs(weights[i] - other.weights[i]) > tol) return false;
  }
  return true;
}

GridFunction::GridFunction(const RapidityGrid& grid, std::size_t species_count)
    : grid_(grid), species_(species_count),
      values_(grid.size() * species_count, 0.0) {}

double GridFunction::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i)
    for (std::size_t a = 0; a < species_; ++a)
      s += grid_.weights[i] * std::norm(at(i, a));
  return std::sqrt(s);
}

GridFunction GridFunction::conjugated() const {
  GridFunction r(*this);
  for (auto& v : r.values_) v = std::conj(v);
  return r;
}

GridFunction GridFunction::pct(const ParticleSpectrum& spec) const {
  assert(spec.species_count() == species_);
  GridFunction r(grid_, species_);
  for (std::size_t i = 0; i < grid_.size(); ++i)
    for (std::size_t a = 0; a < species_; ++a)
      r.at(i, a) = std::conj(at(i, spec.conjugate(a)));
  return r;
}

GridFunction& GridFunction::operator+=(const GridFunction& rhs) {
  assert(values_.size() == rhs.values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(std::complex<double> c) {
  for (auto& v : values_) v *= c;
  return *this;
}

std::complex<double> inner(const GridFunction& a, const GridFunction& b) {
  assert(a.grid().size() == b.grid().size());
  assert(a.species_count() == b.species_count());
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i)
    for (std::size_t al = 0; al < a.species_count(); ++al)
      s += a.grid().weights[i] * std::conj(a.at(i, al)) * b.at(i, al);
  return s;
}

}  // namespace iqft
