#pragma once

#include <vector>

#include "iqft/fock.hpp"
#include "iqft/testfunction.hpp"

namespace iqft {

// phi(f) = zd(f+) + z(J f-) and phi'(f) = J zd(J f+) J + J z(f-) J applied
// to truncated vectors; f+- sampled on the state's grid.
FockVector phi_field(const SPairCache& sc, const OnShellTransformer& tr,
                     const TestFunction2D& f, const FockVector& in);
FockVector phi_prime_field(const SPairCache& sc, const OnShellTransformer& tr,
                           const TestFunction2D& f, const FockVector& in);

// || [phi'(f), phi(g)] Psi || at the given rapidity-grid resolutions
// (Gauss-Legendre grids on [-L, L]); wedge tags are checked: f right, g left.
struct LocalitySweepPoint {
  std::size_t grid_points;
  double residual;
  double scale;  // ||f+|| ||g+|| ||Psi|| at this resolution
};
std::vector<LocalitySweepPoint> wedge_commutator_residual(
    const SMatrix& s, const OnShellTransformer& tr, const TestFunction2D& f,
    const TestFunction2D& g, const std::vector<std::size_t>& resolutions,
    double theta_max, std::size_t psi_layers, bool enforce_tags = true);

// sqrt(n!) P_n (f_1+ ox ... ox f_n+) / reversed for "in"; the one-particle
// transforms are supplied already sampled on a common grid.
enum class Direction { In, Out };
FockVector collision_state(const SPairCache& sc, std::vector<GridFunction> fplus,
                           Direction dir, double ordering_gap = 0.1);

Complex s_matrix_element(const SPairCache& sc, const std::vector<GridFunction>& fs,
                         const std::vector<GridFunction>& gs,
                         double ordering_gap = 0.1);

}  // namespace iqft
