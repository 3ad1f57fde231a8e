#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iqft/grid.hpp"
#include "iqft/permutation.hpp"
#include "iqft/smatrix.hpp"

namespace iqft {

// Branch-tracked scalar phase shift table: delta(0) = 0 and
// S(theta) = -e^{2 i delta(theta)} on the stored points.
class PhaseShiftTable {
 public:
  PhaseShiftTable(std::vector<double> thetas, std::vector<double> deltas);
  // exact lookup (the table is built on the needed points)
  double operator()(double theta, double tol = 1e-10) const;
  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& deltas() const { return deltas_; }

 private:
  std::vector<double> thetas_;  // sorted
  std::vector<double> deltas_;
};

// Scalar phase shift on a sorted grid containing 0. Requires S scalar with
// |S| = 1 on the grid and S(0) = -1; unwrapping fails (throws) when adjacent
// phases jump by >= pi/2.
PhaseShiftTable phase_shift_scalar(const SMatrix& s, std::vector<double> theta_grid);

// Table on all pairwise differences of the grid points (plus 0).
PhaseShiftTable phase_shift_on_differences(const SMatrix& s, const RapidityGrid& grid);

// I_n intertwiner value prod_{k<l} (-e^{i delta(theta_k - theta_l)}).
Complex intertwiner_In(const PhaseShiftTable& delta, const std::vector<double>& thetas);
Complex intertwiner_In(const SMatrix& s, const std::vector<double>& thetas);

// Matrix phase shift of a commuting family with S(0) = -F in whichever of
// the exchange picture (eval) or the amplitude picture (F * eval) realizes
// that value; rho(theta) hermitian, rho(0) = 0, and Shat = -F e^{2 i rho}.
struct MatrixPhaseShift {
  std::vector<double> thetas;
  std::vector<Eigen::MatrixXcd> rho;
  bool amplitude_picture = false;  // true when Shat = F * eval was used
  double commutator_defect = 0;    // max ||[S(t1),S(t2)]|| over grid pairs
  double diagonalization_defect = 0;

  Eigen::MatrixXcd reconstruct(std::size_t k) const;  // -F e^{2 i rho_k}
};

MatrixPhaseShift phase_shift_matrix(const SMatrix& s, std::vector<double> theta_grid,
                                    double commute_tol = 1e-8);

// Non-analytic intertwiner (-1)^{sign(pi)} F_n^pi S_n^pi(thetas)^{-1} for the
// sorting permutation pi of thetas; throws on ties within tol.
Eigen::MatrixXcd intertwiner_nonanalytic(const SMatrix& s,
                                         const std::vector<double>& thetas,
                                         double tie_tol = 1e-9);

}  // namespace iqft
