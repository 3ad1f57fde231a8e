#include "iqft/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace iqft {

FockVector phi_field(const SPairCache& sc, const OnShellTransformer& tr,
                     const TestFunction2D& f, const FockVector& in) {
  GridFunction fplus = tr.sample(f, +1, in.grid());
  GridFunction fminus = tr.sample(f, -1, in.grid());
  FockVector out = z_dagger(sc, fplus, in);
  out += z_annihilate(sc, fminus.pct(in.spectrum()), in);
  return out;
}

FockVector phi_prime_field(const SPairCache& sc, const OnShellTransformer& tr,
                           const TestFunction2D& f, const FockVector& in) {
  GridFunction fplus = tr.sample(f, +1, in.grid());
  GridFunction fminus = tr.sample(f, -1, in.grid());
  // J zd(J f+) J + J z(f-) J
  FockVector jin = pct_J(in);
  FockVector a = z_dagger(sc, fplus.pct(in.spectrum()), jin);
  FockVector b = z_annihilate(sc, fminus, jin);
  a += b;
  return pct_J(a);
}

std::vector<LocalitySweepPoint> wedge_commutator_residual(
    const SMatrix& s, const OnShellTransformer& tr, const TestFunction2D& f,
    const TestFunction2D& g, const std::vector<std::size_t>& resolutions,
    double theta_max, std::size_t psi_layers, bool enforce_tags) {
  if (enforce_tags) {
    if (f.tag() != WedgeTag::Right)
      throw std::invalid_argument("wedge commutator: f must carry a right-wedge tag");
    if (g.tag() != WedgeTag::Left)
      throw std::invalid_argument("wedge commutator: g must carry a left-wedge tag");
  }
  std::vector<LocalitySweepPoint> sweep;
  for (std::size_t res : resolutions) {
    RapidityGrid grid = RapidityGrid::gauss_legendre(-theta_max, theta_max, res);
    SPairCache sc(s, grid);
    const std::size_t n_max = psi_layers + 2;
    FockVector psi(grid, s.spectrum(), n_max);
    // deterministic smooth S-symmetric reference state on layers <= psi_layers
    psi.layer(0)[0] = 1.0;
    const std::size_t D = s.spectrum().species_count();
    for (std::size_t n = 1; n <= psi_layers; ++n) {
      FockLayer tensor(n, psi.base());
      for (std::size_t t = 0; t < tensor.size(); ++t) {
        std::complex<double> v = 1.0;
        std::size_t rem = t;
        for (std::size_t j = 0; j < n; ++j) {
          std::size_t sv = rem / tensor.stride(j);
          rem %= tensor.stride(j);
          double th = grid.points[sv / D];
          v *= std::exp(-0.5 * th * th) * (1.0 + 0.2 * double(j)) /
               double(sv % D + 1);
        }
        tensor[t] = v;
      }
      psi.layer(n) = project_pn(sc, tensor);
    }
    psi *= 1.0 / psi.norm();

    FockVector ab = phi_prime_field(sc, tr, f, phi_field(sc, tr, g, psi));
    FockVector ba = phi_field(sc, tr, g, phi_prime_field(sc, tr, f, psi));
    ab -= ba;
    LocalitySweepPoint pt;
    pt.grid_points = res;
    pt.residual = ab.norm();
    pt.scale = tr.sample(f, +1, grid).norm() * tr.sample(g, +1, grid).norm() *
               psi.norm();
    sweep.push_back(pt);
  }
  return sweep;
}

FockVector collision_state(const SPairCache& sc, std::vector<GridFunction> fplus,
                           Direction dir, double ordering_gap) {
  const std::size_t n = fplus.size();
  if (n == 0) throw std::invalid_argument("collision state: empty list");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!precedes(fplus[i], fplus[i + 1], ordering_gap))
      throw std::invalid_argument("collision state: rapidity supports not ordered");

  const auto& spec = sc.spectrum();
  const std::size_t D = sc.species();
  FockVector out(sc.grid(), spec, n);
  FockLayer tensor(n, sc.grid().size() * D);
  std::vector<const GridFunction*> order(n);
  for (std::size_t j = 0; j < n; ++j)
    order[j] = dir == Direction::Out ? &fplus[j] : &fplus[n - 1 - j];
  for (std::size_t t = 0; t < tensor.size(); ++t) {
    std::complex<double> v = 1.0;
    std::size_t rem = t;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t sv = rem / tensor.stride(j);
      rem %= tensor.stride(j);
      v *= order[j]->at(sv / D, sv % D);
      if (v == 0.0) break;
    }
    tensor[t] = v;
  }
  double fact = 1.0;
  for (std::size_t i = 2; i <= n; ++i) fact *= double(i);
  FockLayer proj = project_pn(sc, tensor);
  proj *= std::sqrt(fact);
  out.layer(n) = proj;
  return out;
}

Complex s_matrix_element(const SPairCache& sc, const std::vector<GridFunction>& fs,
                         const std::vector<GridFunction>& gs, double ordering_gap) {
  if (fs.size() != gs.size())
    throw std::invalid_argument("s_matrix_element: particle numbers differ");
  FockVector out = collision_state(sc, fs, Direction::Out, ordering_gap);
  FockVector in = collision_state(sc, gs, Direction::In, ordering_gap);
  return inner(out, in);
}

}  // namespace iqft
