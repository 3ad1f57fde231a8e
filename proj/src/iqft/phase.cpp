#include "iqft/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "iqft/fock.hpp"

namespace iqft {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// unwrap phases phi (defined mod 2 pi) along the sorted points so that the
// branch at theta = 0 vanishes and adjacent steps stay below pi/2
std::vector<double> unwrap_from_zero(const std::vector<double>& thetas,
                                     const std::vector<double>& two_delta_mod) {
  auto it = std::min_element(thetas.begin(), thetas.end(),
                             [](double a, double b) { return std::abs(a) < std::abs(b); });
  std::size_t i0 = std::size_t(it - thetas.begin());
  if (std::abs(thetas[i0]) > 1e-12)
    throw std::invalid_argument("phase shift: grid must contain 0");
  std::vector<double> two_delta(thetas.size());
  two_delta[i0] = 0.0;
  auto step = [&](std::size_t from, std::size_t to) {
    double target = two_delta_mod[to];
    double k = std::round((two_delta[from] - target) / (2 * kPi));
    two_delta[to] = target + 2 * kPi * k;
    // the nearest branch is at most pi away; demand half of that so an
    // aliased branch cannot masquerade as a legitimate step
    if (std::abs(two_delta[to] - two_delta[from]) >= kPi / 2)
      throw std::runtime_error("phase shift: branch tracking failed (grid too coarse)");
  };
  for (std::size_t i = i0; i + 1 < thetas.size(); ++i) step(i, i + 1);
  for (std::size_t i = i0; i-- > 0;) step(i + 1, i);
  return two_delta;
}
}  // namespace

PhaseShiftTable::PhaseShiftTable(std::vector<double> thetas, std::vector<double> deltas)
    : thetas_(std::move(thetas)), deltas_(std::move(deltas)) {}

double PhaseShiftTable::operator()(double theta, double tol) const {
  auto it = std::lower_bound(thetas_.begin(), thetas_.end(), theta - tol);
  if (it == thetas_.end() || std::abs(*it - theta) > tol)
    throw std::out_of_range("phase shift table: point not tabulated");
  return deltas_[std::size_t(it - thetas_.begin())];
}

PhaseShiftTable phase_shift_scalar(const SMatrix& s, std::vector<double> grid) {
  if (s.dim() != 1) throw std::invalid_argument("phase_shift_scalar: scalar S only");
  std::sort(grid.begin(), grid.end());
  if (std::abs(std::abs(s.scalar(0.0)) - 1.0) > 1e-10 ||
      std::abs(s.scalar(0.0) - Complex(-1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("phase_shift_scalar: S(0) != -1");
  std::vector<double> ph(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Complex v = s.scalar(grid[i]);
    if (std::abs(std::abs(v) - 1.0) > 1e-10)
      throw std::invalid_argument("phase_shift_scalar: |S| != 1 on grid");
    ph[i] = std::arg(-v);
  }
  std::vector<double> td = unwrap_from_zero(grid, ph);
  for (auto& v : td) v *= 0.5;
  return PhaseShiftTable(std::move(grid), std::move(td));
}

namespace {

// difference set densified with a fine filler grid so the unwrap never has
// to cross a large hole
PhaseShiftTable phase_table_for(const SMatrix& s, std::vector<double> pts) {
  pts.push_back(0.0);
  double lo = *std::min_element(pts.begin(), pts.end());
  double hi = *std::max_element(pts.begin(), pts.end());
  const double step = 0.04;
  for (double x = lo; x < hi + step; x += step) pts.push_back(std::min(x, hi));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            pts.end());
  return phase_shift_scalar(s, std::move(pts));
}

}  // namespace

PhaseShiftTable phase_shift_on_differences(const SMatrix& s, const RapidityGrid& grid) {
  std::vector<double> pts;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      pts.push_back(grid.points[i] - grid.points[j]);
  return phase_table_for(s, std::move(pts));
}

Complex intertwiner_In(const PhaseShiftTable& delta, const std::vector<double>& thetas) {
  Complex v = 1.0;
  for (std::size_t k = 0; k < thetas.size(); ++k)
    for (std::size_t l = k + 1; l < thetas.size(); ++l)
      v *= -std::exp(Complex(0.0, delta(thetas[k] - thetas[l])));
  return v;
}

Complex intertwiner_In(const SMatrix& s, const std::vector<double>& thetas) {
  if (thetas.size() < 2) return 1.0;
  std::vector<double> pts;
  for (std::size_t k = 0; k < thetas.size(); ++k)
    for (std::size_t l = 0; l < thetas.size(); ++l)
      if (k != l) pts.push_back(thetas[k] - thetas[l]);
  return intertwiner_In(phase_table_for(s, std::move(pts)), thetas);
}

Eigen::MatrixXcd MatrixPhaseShift::reconstruct(std::size_t k) const {
  const Eigen::MatrixXcd& r = rho[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  Eigen::VectorXcd ph = (2.0 * Complex(0, 1) * es.eigenvalues().array()).exp();
  Eigen::MatrixXcd e2ir =
      es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  std::size_t D = std::size_t(std::lround(std::sqrt(double(r.rows()))));
  return -flip_tensor(D) * e2ir;
}

MatrixPhaseShift phase_shift_matrix(const SMatrix& s, std::vector<double> grid,
                                    double commute_tol) {
  std::sort(grid.begin(), grid.end());
  const std::size_t D = s.dim();
  const Eigen::MatrixXcd F = flip_tensor(D);

  MatrixPhaseShift out;
  Eigen::MatrixXcd S0 = s.eval(0.0);
  if ((S0 + F).norm() < 0.1) {
    out.amplitude_picture = false;
  } else if ((F * S0 + F).norm() < 0.1) {
    out.amplitude_picture = true;
  } else {
    throw std::invalid_argument("phase_shift_matrix: S(0) != -F in either picture");
  }
  auto shat = [&](double th) -> Eigen::MatrixXcd {
    return out.amplitude_picture ? Eigen::MatrixXcd(F * s.eval(th)) : s.eval(th);
  };

  std::vector<Eigen::MatrixXcd> U(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) U[i] = -F * shat(grid[i]);

  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      out.commutator_defect =
          std::max(out.commutator_defect, (U[i] * U[j] - U[j] * U[i]).norm());
  if (out.commutator_defect > commute_tol)
    throw std::invalid_argument("phase_shift_matrix: family does not commute");

  // common eigenbasis from a generic hermitian combination
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D * D, D * D);
  double c = 0.37;
  for (std::size_t i = 0; i < grid.size(); i += std::max<std::size_t>(1, grid.size() / 5)) {
    A += c * (U[i] + U[i].adjoint());
    A += (1.3 * c) * Complex(0, 1) * (U[i] - U[i].adjoint());
    c = std::fmod(c * 1.618 + 0.21, 1.0) + 0.05;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  Eigen::MatrixXcd V = es.eigenvectors();

  // eigenvalue phases, branch tracked per eigenvector
  std::vector<std::vector<double>> lam_phase(D * D,
                                             std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::MatrixXcd L = V.adjoint() * U[i] * V;
    for (Eigen::Index k = 0; k < L.rows(); ++k) {
      double off = 0;
      for (Eigen::Index l = 0; l < L.cols(); ++l)
        if (l != k) off = std::max(off, std::abs(L(k, l)));
      out.diagonalization_defect = std::max(out.diagonalization_defect, off);
      lam_phase[std::size_t(k)][i] = std::arg(L(k, k));
    }
  }
  if (out.diagonalization_defect > 1e2 * commute_tol)
    throw std::runtime_error(
        "phase_shift_matrix: eigenvalue crossing defeats the common eigenbasis");

  out.thetas = grid;
  out.rho.resize(grid.size());
  std::vector<std::vector<double>> two_delta(D * D);
  for (std::size_t k = 0; k < D * D; ++k)
    two_delta[k] = unwrap_from_zero(grid, lam_phase[k]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::VectorXd d(D * D);
    for (std::size_t k = 0; k < D * D; ++k) d(Eigen::Index(k)) = 0.5 * two_delta[k][i];
    out.rho[i] = V * d.cast<Complex>().asDiagonal() * V.adjoint();
  }
  return out;
}

Eigen::MatrixXcd intertwiner_nonanalytic(const SMatrix& s,
                                         const std::vector<double>& thetas,
                                         double tie_tol) {
  const std::size_t n = thetas.size(), D = s.dim();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t(0));
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return thetas[a] < thetas[b]; });
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs(thetas[idx[i + 1]] - thetas[idx[i]]) < tie_tol)
      throw std::invalid_argument("nonanalytic intertwiner: rapidity tie (simplex ambiguous)");
  // pi with theta_{pi(1)} <= ... <= theta_{pi(n)}
  Permutation pi(idx);

  // (-1)^{sign(pi)} F_n^pi, realized as the word tensor of the free
  // fermionic representation; with this reading the intertwining relation
  // with the S = -F reference action holds on every simplex
  SMatrix free_fermi = SMatrix::constant_flip(s.spectrum(), -1);
  Eigen::MatrixXcd Fpi = s_tensor_at(free_fermi, pi, thetas);
  Eigen::MatrixXcd Spi = s_tensor_at(s, pi, thetas);
  (void)D;
  return Fpi * Spi.inverse();
}

}  // namespace iqft
