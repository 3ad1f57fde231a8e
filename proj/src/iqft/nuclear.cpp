#include "iqft/nuclear.hpp"

#include <cmath>
#include <stdexcept>

namespace iqft {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

void NuclearityParams::validate() const {
  if (D == 0 || !(mass_gap > 0) || !(s_norm > 0) || !(gamma > 0) || !(gamma_prime > 0))
    throw std::invalid_argument("nuclearity params: nonpositive input");
  if (!(kappa > 0 && kappa < kPi / 2))
    throw std::invalid_argument("nuclearity params: need 0 < kappa < pi/2");
}

NuclearityParams NuclearityParams::with_default_gamma(std::size_t D, double mass_gap,
                                                      double kappa, double s_norm) {
  NuclearityParams p;
  p.D = D;
  p.mass_gap = mass_gap;
  p.kappa = kappa;
  p.s_norm = s_norm;
  p.gamma = p.gamma_prime = std::sqrt(s_norm);
  p.validate();
  return p;
}

double upsilon(const NuclearityParams& p, double s) {
  if (!(s > 0)) throw std::invalid_argument("upsilon: s <= 0");
  const double sk = std::sin(p.kappa);
  const double a = std::sqrt(2.0) * std::exp(-s * p.mass_gap * sk) /
                   (std::sqrt(p.kappa) * std::pow(kPi * s * p.mass_gap * sk, 0.25));
  return p.s_norm * std::sqrt(double(p.D)) * std::max(1.0, a);
}

double x_bound(const NuclearityParams& p, double s) {
  if (!(s > 0)) throw std::invalid_argument("x_bound: s <= 0");
  return (2.0 * double(p.D) / (kPi * p.kappa)) * std::exp(-s * p.mass_gap / 2) *
         std::sqrt(4.0 * kPi / (s * p.mass_gap));
}

XiBound xi_n_bound(const NuclearityParams& p, double s, std::size_t n) {
  if (n == 0) throw std::invalid_argument("xi_n_bound: n >= 1");
  const double base = 2.0 * p.gamma * p.gamma_prime * upsilon(p, s / 2) * x_bound(p, s);
  double nfact = 1;
  for (std::size_t i = 2; i <= n; ++i) nfact *= double(i);
  XiBound b;
  b.raw = std::pow(double(n), double(n)) / nfact * std::pow(base, double(n));
  b.stirling = std::pow(std::exp(1.0) * base, double(n)) /
               std::sqrt(2 * kPi * double(n));
  return b;
}

double q_of_s(const NuclearityParams& p, double s) {
  return 2.0 * std::exp(1.0) * p.gamma * p.gamma_prime * upsilon(p, s / 2) *
         x_bound(p, s);
}

SMinResult s_min(const NuclearityParams& p, double lo, double hi, double tol,
                 std::size_t monotone_samples) {
  p.validate();
  double qlo = q_of_s(p, lo), qhi = q_of_s(p, hi);
  if (!((qlo - 1.0) * (qhi - 1.0) < 0))
    throw std::invalid_argument("s_min: no sign change of q - 1 on the bracket");

  SMinResult r{};
  r.monotone = true;
  double prev = qlo;
  for (std::size_t i = 1; i <= monotone_samples; ++i) {
    double s = lo + (hi - lo) * double(i) / double(monotone_samples);
    double q = q_of_s(p, s);
    if (q >= prev) r.monotone = false;
    prev = q;
  }

  double a = lo, b = hi;
  std::size_t it = 0;
  while (++it < 200) {
    double mid = 0.5 * (a + b);
    double qm = q_of_s(p, mid);
    if (std::abs(qm - 1.0) < tol || (b - a) < 1e-15 * std::max(1.0, mid)) {
      r.s_min = mid;
      r.q_at_root = qm;
      r.iterations = it;
      return r;
    }
    if ((qm - 1.0) * (qlo - 1.0) > 0)
      a = mid;
    else
      b = mid;
  }
  r.s_min = 0.5 * (a + b);
  r.q_at_root = q_of_s(p, r.s_min);
  r.iterations = it;
  return r;
}

namespace {

KernelReport analyze_kernel(const std::function<Complex(double, double)>& K,
                            const RapidityGrid& grid, std::size_t species,
                            bool hermitian_positive) {
  const std::size_t n = grid.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      M(Eigen::Index(i), Eigen::Index(j)) = std::sqrt(grid.weights[i]) *
                                            K(grid.points[i], grid.points[j]) *
                                            std::sqrt(grid.weights[j]);
  KernelReport rep;
  rep.grid_points = n;
  if (hermitian_positive) {
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    double tn = 0, tr = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      tn += std::abs(es.eigenvalues()(i));
      tr += es.eigenvalues()(i);
    }
    rep.trace_norm_numeric = double(species) * tn;
    rep.trace_real = tr;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    rep.trace_norm_numeric = double(species) * svd.singularValues().sum();
    rep.trace_real = M.trace().real();
    rep.min_eigenvalue = 0;
  }
  return rep;
}

}  // namespace

KernelReport kernel_t_ab(double a, double b, const RapidityGrid& grid,
                         std::size_t species) {
  if (!(a > 0) || b == 0.0) throw std::invalid_argument("T_ab: need a > 0, b != 0");
  // endpoint decay guard
  if (std::exp(-a * std::cosh(grid.points.front())) > 1e-8 ||
      std::exp(-a * std::cosh(grid.points.back())) > 1e-8)
    throw std::invalid_argument("T_ab: grid does not resolve the kernel decay");
  KernelReport rep = analyze_kernel(
      [&](double t, double tp) {
        return std::exp(-a * std::cosh(t)) / Complex(tp - t, b);
      },
      grid, species, false);
  rep.analytic_bound = double(species) * std::pow(2.0, 0.25) * std::pow(kPi, 1.25) *
                       std::exp(-a) / std::pow(a, 0.25) *
                       std::sqrt((std::sqrt(kPi / 2) + 1.0 / (4 * a)) *
                                 (std::pow(b, 4) + 4 * b * b + 24) /
                                 std::pow(std::abs(b), 5));
  return rep;
}

KernelReport kernel_r_gb(const std::function<Complex(double)>& g, double b,
                         const RapidityGrid& grid, std::size_t species) {
  if (b == 0.0) throw std::invalid_argument("R_gb: b != 0");
  const double sgn = b > 0 ? 1.0 : -1.0;
  double norm_g2 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    norm_g2 += grid.weights[i] * std::norm(g(grid.points[i]));
  KernelReport rep = analyze_kernel(
      [&](double t, double tp) {
        return -sgn / (2 * kPi * Complex(0, 1)) * std::conj(g(t)) * g(tp) /
               Complex(tp - t, b);
      },
      grid, species, true);
  rep.analytic_bound = double(species) * norm_g2 / (2 * kPi * std::abs(b));
  return rep;
}

OneParticleNuclearity one_particle_nuclearity(double s, double mass,
                                              const RapidityGrid& grid) {
  if (!(s > 0)) throw std::invalid_argument("one_particle_nuclearity: s <= 0");
  auto norm_of = [&](double b) {
    Eigen::MatrixXcd M =
        Eigen::MatrixXcd::Zero(Eigen::Index(grid.size()), Eigen::Index(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        M(Eigen::Index(i), Eigen::Index(j)) =
            std::sqrt(grid.weights[i]) / (kPi * Complex(0, 1)) *
            std::exp(-s * mass * std::cosh(grid.points[i])) /
            Complex(grid.points[j] - grid.points[i], b) * std::sqrt(grid.weights[j]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues().sum();
  };
  OneParticleNuclearity r;
  r.norm_plus = norm_of(kPi / 2);
  r.norm_minus = norm_of(-kPi / 2);
  r.x1_bound = 0.5 * (r.norm_plus + r.norm_minus);
  return r;
}

}  // namespace iqft
