// Acceptance suite: runs every gate at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exits nonzero if any gate fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "iqft/contracted.hpp"
#include "iqft/deform.hpp"
#include "iqft/fields.hpp"
#include "iqft/nuclear.hpp"
#include "iqft/phase.hpp"

using namespace iqft;

namespace {

const double kPi = 3.14159265358979323846;
const Complex kI(0, 1);
int g_failures = 0;

void gate(int id, const char* what, bool ok, double value, double tol) {
  std::printf("[%s] criterion %2d: %-58s  value %.3e  tol %.1e\n",
              ok ? "PASS" : "FAIL", id, what, value, tol);
  if (!ok) ++g_failures;
}

SMatrix diag2() {
  std::vector<std::vector<ScalarAmplitude>> om(2, std::vector<ScalarAmplitude>(2));
  om[0][0] = sinh_gordon_amplitude(4 * kPi);
  om[0][1] = om[1][0] = sinh_gordon_amplitude(2.0);
  om[1][1] = sinh_gordon_amplitude(7.0);
  return SMatrix::diagonal(ParticleSpectrum::neutral(2, 1.0), om);
}

SMatrix scalar_pair_family() {
  ScalarAmplitude amp;
  amp.epsilon = -1;
  amp.zeros = {Complex(0.3, kPi / 4), Complex(-0.3, kPi / 4)};
  return SMatrix::scalar_family(1.0, amp);
}

GridFunction random_fn(const RapidityGrid& g, std::size_t D, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  GridFunction f(g, D);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t a = 0; a < D; ++a) f.at(i, a) = Complex(nd(rng), nd(rng));
  return f;
}

FockVector random_symmetric(const SPairCache& sc, std::size_t n_max,
                            std::mt19937_64& rng, std::size_t top_zero) {
  FockVector v = FockVector::random(sc.grid(), sc.spectrum(), n_max, rng);
  for (std::size_t n = 2; n <= n_max; ++n) v.layer(n) = project_pn(sc, v.layer(n));
  for (std::size_t n = n_max; n + top_zero > n_max && n > 0; --n)
    v.layer(n) = FockLayer(n, v.base());
  v *= 1.0 / v.norm();
  return v;
}

void criterion_1() {
  double worst_exact = 0;
  for (const SMatrix& s : {SMatrix::sinh_gordon(1.0, 4 * kPi), diag2(),
                           scalar_pair_family()}) {
    auto rep = check_axioms(s, default_theta_grid(), default_pair_grid());
    worst_exact = std::max(worst_exact, rep.max_residual());
  }
  gate(1, "axiom suite: sinh-gordon, diagonal, scalar family", worst_exact < 1e-10,
       worst_exact, 1e-10);
  double worst_on = 0;
  for (int N : {3, 4}) {
    auto rep = check_axioms(SMatrix::o_n(N, 1.0), default_theta_grid(),
                            default_pair_grid());
    worst_on = std::max(worst_on, rep.max_residual());
  }
  gate(1, "axiom suite: O(3) and O(4)", worst_on < 1e-8, worst_on, 1e-8);
}

void criterion_2() {
  // zero-rapidity limit of the O(3) amplitude; the familiar component
  // formula with S_N(0) = -F lives in the scattering picture F * eval
  SMatrix s = SMatrix::o_n(3, 1.0);
  Eigen::MatrixXcd F = flip_tensor(3);
  double r4 = (s.eval_vertex(1e-4) + F).norm();
  double r5 = (s.eval_vertex(1e-5) + F).norm();
  bool ok = r4 < 1e-3 && r5 < 0.15 * r4 && r5 > 0.05 * r4;
  gate(2, "O(3) limit F S(0) = -F, linear vanishing", ok, r4, 1e-3);
}

void criterion_3() {
  std::mt19937_64 rng(20240817);
  double worst = 0, margin = 0, dual = 0, exch = 0;
  std::vector<SMatrix> kinds;
  kinds.push_back(SMatrix::sinh_gordon(1.0, 4 * kPi));                       // D = 1
  kinds.push_back(diag2());                                                  // D = 2
  kinds.push_back(SMatrix::constant_flip(ParticleSpectrum::neutral(3, 1.0), -1));
  for (const SMatrix& s : kinds) {
    const std::size_t D = s.dim();
    RapidityGrid g = RapidityGrid::uniform(-4.0, 4.0, D == 1 ? 8 : (D == 2 ? 6 : 4));
    SPairCache sc(s, g);
    const std::size_t n_max = 4;
    for (std::size_t n = 2; n <= n_max; ++n) {
      FockVector v = FockVector::random(g, s.spectrum(), n_max, rng);
      FockLayer p = project_pn(sc, v.layer(n));
      FockLayer pp = project_pn(sc, p);
      pp -= p;
      worst = std::max(worst, layer_norm(g, D, pp));
      FockVector w = FockVector::random(g, s.spectrum(), n_max, rng);
      Complex a = layer_inner(g, D, w.layer(n), p);
      Complex b = layer_inner(g, D, project_pn(sc, w.layer(n)), v.layer(n));
      worst = std::max(worst, std::abs(a - b));
    }
    GridFunction phi = random_fn(g, D, rng), psi = random_fn(g, D, rng);
    FockVector v = random_symmetric(sc, 4, rng, 0);
    FockVector za = z_dagger(sc, phi, v);
    FockVector zb = z_dagger_projected(sc, phi, v);
    zb -= za;
    dual = std::max(dual, zb.norm());
    FockVector x = random_symmetric(sc, 4, rng, 2);
    exch = std::max(exch, check_exchange_relations(sc, phi, psi, x).max());
  }
  gate(3, "P_n idempotency and hermiticity (n <= 4, D <= 3)", worst < 1e-12, worst,
       1e-12);
  gate(3, "z-dagger dual-path equality", dual < 1e-12, dual, 1e-12);
  gate(3, "ZF exchange residuals", exch < 1e-12, exch, 1e-12);
  {
    SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
    RapidityGrid g = RapidityGrid::uniform(-4.0, 4.0, 8);
    SPairCache sc(s, g);
    GridFunction phi = random_fn(g, 1, rng);
    for (int k = 0; k < 100; ++k) {
      FockVector v = random_symmetric(sc, 4, rng, 1);
      auto b = number_bound_check(sc, phi, v);
      margin = std::max({margin, b.lhs_z - b.rhs_z, b.lhs_zd - b.rhs_zd});
    }
    gate(3, "number bounds on 100 seeded random vectors", margin <= 1e-12, margin,
         1e-12);
  }
}

void criterion_4() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  SMatrix shg = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = RapidityGrid::uniform(-4.0, 4.0, 8);
  double inter = 0;
  for (std::size_t n : {2u, 3u}) {
    FockLayer l(n, 8);
    for (std::size_t t = 0; t < l.size(); ++t) l[t] = Complex(nd(rng), nd(rng));
    inter = std::max(inter, check_intertwining(shg, g, l));
  }
  gate(4, "I_2, I_3 intertwining residual (sinh-gordon)", inter < 1e-10, inter, 1e-10);

  SMatrix on3 = SMatrix::o_n(3, 1.0);
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(0.2 * double(i));  // 21 points
  auto ps = phase_shift_matrix(on3, grid);
  Eigen::MatrixXcd F = flip_tensor(3);
  double rec = 0, herm = 0, rho0 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::MatrixXcd target = ps.amplitude_picture
                                  ? Eigen::MatrixXcd(F * on3.eval(grid[i]))
                                  : on3.eval(grid[i]);
    rec = std::max(rec, (ps.reconstruct(i) - target).norm());
    herm = std::max(herm, (ps.rho[i] - ps.rho[i].adjoint()).norm());
    if (std::abs(grid[i]) < 1e-14) rho0 = ps.rho[i].norm();
  }
  gate(4, "O(3) matrix phase shift reconstruction at 21 points", rec < 1e-8, rec, 1e-8);
  gate(4, "rho(0) = 0 and hermiticity", std::max(rho0, herm) < 1e-10,
       std::max(rho0, herm), 1e-10);
}

void criterion_5() {
  bool lemmas = true;
  for (std::size_t n = 0; n <= 7 && lemmas; ++n)
    for (std::size_t k = 0; k <= n && lemmas; ++k)
      for (const auto& c : enumerate_contractions(n, k)) {
        if (!verify_commutation(c)) lemmas = false;
        if (k + 1 <= n && !c.contracts_left(k + 1))
          for (std::size_t r = 1; r <= k; ++r)
            if (!c.contracts_right(r) && !verify_extension_right(c, r)) lemmas = false;
        if (k >= 1 && !c.contracts_right(k))
          for (std::size_t l = k + 1; l <= n; ++l)
            if (!c.contracts_left(l) && !verify_extension_left(c, l)) lemmas = false;
        if (!lemmas) break;
      }
  gate(5, "contraction lemmas exact for n <= 7", lemmas, lemmas ? 0.0 : 1.0, 0);

  bool counts = true;
  for (std::size_t n = 0; n <= 9; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      if (enumerate_contractions(n, k).size() != contraction_count_total(n, k))
        counts = false;
  gate(5, "contraction counts match the closed form (n <= 9)", counts,
       counts ? 0.0 : 1.0, 0);

  bool bound = true;
  double margin = 1e300;
  for (std::size_t n = 0; n <= 10; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      auto b = contraction_sum_bound(n, k);
      if (!(b.lhs <= b.rhs)) bound = false;
      margin = std::min(margin, b.rhs - b.lhs);
    }
  gate(5, "sum over contractions <= 2^n sqrt(n!) (n <= 10)", bound, margin, 0);
}

void criterion_6() {
  std::mt19937_64 rng(20240817);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = RapidityGrid::uniform(-4.0, 4.0, 8);
  SPairCache sc(s, g);
  const std::size_t n = 3;
  double bound_margin = 1e300;
  bool bound_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    TruncatedOperator A = TruncatedOperator::random(8, n, rng);
    double anorm = A.weighted_norm(g, 1);
    std::vector<GridFunction> fs;
    double fnorm = 1;
    for (std::size_t j = 0; j < n; ++j) {
      fs.push_back(random_fn(g, 1, rng));
      fnorm *= fs.back().norm();
    }
    std::size_t k = std::size_t(trial) % (n + 1);
    Complex val = fully_contracted_element(sc, A, n, k, fs);
    double rhs = std::pow(2.0, double(n)) * std::sqrt(6.0) * anorm * fnorm;
    if (!(std::abs(val) <= rhs * (1 + 1e-10))) bound_ok = false;
    bound_margin = std::min(bound_margin, rhs - std::abs(val));
  }
  gate(6, "estimate3 bound on 50 seeded random operators (n = 3)", bound_ok,
       bound_margin, 0);

  double dual = 0;
  for (int trial = 0; trial < 2; ++trial) {
    TruncatedOperator A = TruncatedOperator::random(8, n, rng);
    std::vector<GridFunction> fs;
    for (std::size_t j = 0; j < n; ++j) fs.push_back(random_fn(g, 1, rng));
    for (std::size_t k = 0; k < n; ++k) {
      Complex a = fully_contracted_element(sc, A, n, k, fs);
      Complex b = fully_contracted_element_rewri(sc, A, n, k, fs);
      dual = std::max(dual, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  gate(6, "commutator-form dual route agreement", dual < 1e-10, dual, 1e-10);
}

void criterion_7() {
  std::mt19937_64 rng(7);
  MomentumSet ms = MomentumSet::from_rapidity_grid(
      RapidityGrid::gauss_legendre(-3.0, 3.0, 12), 1.0);
  DeformationFunction r(+1, {kI});
  QMatrix q = QMatrix::two_dim(1.0);
  std::normal_distribution<double> nd;
  MomentumFunction phi(ms.size()), psi(ms.size());
  for (auto& v : phi) v = Complex(nd(rng), nd(rng));
  for (auto& v : psi) v = Complex(nd(rng), nd(rng));
  FermiFockVector v = FermiFockVector::random_antisymmetric(ms, 4, rng);
  for (auto& c : v.layer(4)) c = 0;
  for (auto& c : v.layer(3)) c = 0;

  double ex = check_deformed_exchange(r, q, q, phi, psi, v).max();
  ex = std::max(ex,
                check_deformed_exchange(r, q, QMatrix::two_dim(-0.7), phi, psi, v).max());
  double cross = check_opposite_commutators(r, q, phi, psi, v).max();
  gate(7, "deformed exchange relations and the opposite-Q system",
       std::max(ex, cross) < 1e-12, std::max(ex, cross), 1e-12);

  FermiFockVector w = FermiFockVector::random_antisymmetric(ms, 3, rng);
  std::vector<double> x{0.3, -1.1};
  double uni = std::abs(t_r(r, x, w).norm() - w.norm());
  DeformationFunction r2(-1, {Complex(0.4, 0.8), Complex(-0.4, 0.8)});
  FermiFockVector m1 = t_r(r, x, t_r(r2, x, w));
  std::vector<Complex> zz = r.zeros();
  for (auto& z : r2.zeros()) zz.push_back(z);
  FermiFockVector m2 = t_r(DeformationFunction(-1, zz), x, w);
  m1 -= m2;
  double mult = m1.norm();
  gate(7, "T_R unitarity and multiplicativity", std::max(uni, mult) < 1e-14,
       std::max(uni, mult), 1e-14);

  MomentumFunction fm(ms.size());
  for (auto& c : fm) c = Complex(nd(rng), nd(rng));
  FermiFockVector lhs = z_grading(phi_rq(r, q, phi, fm, z_grading(w)));
  FermiFockVector rhs = phi_rq(r.negated(), q, phi, fm, w);
  lhs -= rhs;
  gate(7, "grading conjugation maps R to -R", lhs.norm() < 1e-12, lhs.norm(), 1e-12);
}

void criterion_8() {
  MomentumSet ms = MomentumSet::from_rapidity_grid(
      RapidityGrid::gauss_legendre(-3.0, 3.0, 64), 1.0);
  auto window = [&](double c) {
    MomentumFunction f(ms.size(), 0.0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      double th = std::asinh(ms.momenta[i][1]);
      double x = (th - c) / 0.8;
      if (std::abs(x) < 1.0) f[i] = std::exp(-1.0 / (1.0 - x * x));
    }
    return f;
  };
  MomentumFunction f = window(-1.5), g = window(1.5), h = window(1.4), k = window(-1.4);
  DeformationFunction r(+1, {kI});
  QMatrix q = QMatrix::two_dim(1.0);
  auto el = two_particle_element(r, q, ms, f, g, h, k);
  double rel = std::abs(el.route_a - el.route_b) / std::max(1e-300, std::abs(el.route_b));
  gate(8, "two-particle element: Fock route vs integral route", rel < 1e-8, rel, 1e-8);

  auto free_el = two_particle_element(DeformationFunction::one(), q, ms, f, g, h, k);
  Complex want = -inner(ms, g, h) * inner(ms, f, k);
  double err = std::max(std::abs(free_el.route_a - want), std::abs(free_el.route_b - want));
  gate(8, "R = 1 closed form -<g+,h+><f+,k+>", err < 1e-10, err, 1e-10);
}

void criterion_9() {
  std::mt19937_64 rng(9);
  MomentumSet ms = MomentumSet::from_rapidity_grid(
      RapidityGrid::gauss_legendre(-2.5, 2.5, 10), 1.0);
  ParticleSpectrum spec = ParticleSpectrum::neutral(1, 1.0);
  OnShellTransformer tr(spec, 48);
  TestFunction2D f = TestFunction2D::bump({0.4, 2.2}, 1.0, {1.0}, WedgeTag::Right);
  TestFunction2D g = TestFunction2D::bump({-0.3, -2.1}, 1.0, {1.0}, WedgeTag::Left);
  DeformationFunction r(+1, {kI});
  QMatrix q = QMatrix::two_dim(1.0);
  FermiFockVector psi = FermiFockVector::random_antisymmetric(ms, 2, rng);

  auto sweep = locality_residual_integral(r, q, spec, tr, f, g, psi, {32, 64, 128}, 4.2);
  bool halves = sweep[1].residual < 0.5 * sweep[0].residual &&
                sweep[2].residual < 0.5 * sweep[1].residual;
  gate(9, "locality integral halves per refinement 32->64->128", halves,
       sweep[2].residual / std::max(1e-300, sweep[1].residual), 0.5);

  RapidityGrid g128 = RapidityGrid::gauss_legendre(-4.2, 4.2, 128);
  double fn = 0, gn = 0;
  for (std::size_t i = 0; i < g128.size(); ++i) {
    fn += g128.weights[i] * std::norm(tr.transform(f, +1, g128.points[i], 0));
    gn += g128.weights[i] * std::norm(tr.transform(g, +1, g128.points[i], 0));
  }
  double scale = std::sqrt(fn) * std::sqrt(gn) * psi.norm();
  gate(9, "final correct-tag residual below 1e-3 of the state scale",
       sweep[2].residual < 1e-3 * scale, sweep[2].residual / scale, 1e-3);

  auto swapped = locality_residual_integral(r, q, spec, tr, g, f, psi, {32, 64, 128},
                                            4.2, /*enforce_tags=*/false);
  bool stalls = swapped[2].residual > 0.5 * swapped[1].residual &&
                swapped[2].residual > 1e-2 * scale;
  gate(9, "swapped tags stall at a nonvanishing value", stalls,
       swapped[2].residual / scale, 1e-2);
}

void criterion_10() {
  DeformationFunction r(+1, {kI});
  double z0 = std::abs(scattering_function_bridge(r, 1.0, 1.0, 0.0) - Complex(-1, 0));
  gate(10, "S_lambda(0) = -1 exactly", z0 == 0.0, z0, 0);

  SMatrix s = bridge_smatrix(r, 1.0, 1.0);
  auto rep = check_axioms(s, default_theta_grid(), default_pair_grid());
  gate(10, "bridge S-matrix passes the axiom suite", rep.max_residual() < 1e-12,
       rep.max_residual(), 1e-12);

  std::mt19937_64 rng(10);
  RapidityGrid grid = RapidityGrid::gauss_legendre(-3.0, 3.0, 12);
  MomentumSet ms = MomentumSet::from_rapidity_grid(grid, 1.0);
  std::normal_distribution<double> nd;
  MomentumFunction phi(ms.size()), psi(ms.size());
  for (auto& v : phi) v = Complex(nd(rng), nd(rng));
  for (auto& v : psi) v = Complex(nd(rng), nd(rng));
  FermiFockVector v = FermiFockVector::random_antisymmetric(ms, 4, rng);
  for (auto& c : v.layer(4)) c = 0;
  for (auto& c : v.layer(3)) c = 0;
  double res = zf_bridge_check(r, 1.0, 1.0, grid, phi, psi, v).max();
  gate(10, "ZF bridge relations with S_lambda", res < 1e-12, res, 1e-12);
}

void criterion_11() {
  RapidityGrid g = RapidityGrid::uniform(-6.0, 6.0, 400);
  auto gauss = [](double th) { return Complex(std::exp(-std::cosh(th)), 0.0); };
  auto rep = kernel_r_gb(gauss, 1.0, g);
  gate(11, "R_{g,1} minimum eigenvalue >= -1e-10", rep.min_eigenvalue >= -1e-10,
       rep.min_eigenvalue, 1e-10);

  // independent Bessel quadrature oracle for K0(2)
  double k0 = 0;
  const int nq = 20000;
  const double tmax = 40.0;
  for (int i = 0; i < nq; ++i) {
    double t = tmax * (double(i) + 0.5) / double(nq);
    k0 += std::exp(-2.0 * std::cosh(t));
  }
  k0 *= tmax / double(nq);
  double want = 2.0 * k0 / (2 * kPi);
  gate(11, "R_{g,1} trace vs Bessel oracle 2 K0(2)/(2 pi)",
       std::abs(rep.trace_real - want) < 1e-4, std::abs(rep.trace_real - want), 1e-4);

  bool tb = true;
  double margin = 1e300;
  for (double a : {1.0, 2.0})
    for (double b : {1.0, -1.0, kPi / 2, -kPi / 2}) {
      auto t = kernel_t_ab(a, b, g);
      if (!(t.trace_norm_numeric <= t.analytic_bound)) tb = false;
      margin = std::min(margin, t.analytic_bound - t.trace_norm_numeric);
    }
  gate(11, "T_{a,b} numeric trace norm below the closed-form bound", tb, margin, 0);
}

void criterion_12() {
  NuclearityParams p;
  p.D = 1;
  p.mass_gap = 1.0;
  p.kappa = 1.0;
  p.s_norm = 1.0;
  p.gamma = p.gamma_prime = 1.0;

  bool monotone = true;
  double prev = q_of_s(p, 0.1);
  for (int i = 1; i <= 499; ++i) {
    double s = 0.1 + (50.0 - 0.1) * double(i) / 499.0;
    double q = q_of_s(p, s);
    if (!(q < prev)) monotone = false;
    prev = q;
  }
  gate(12, "q(s) strictly decreasing on [0.1, 50]", monotone, monotone ? 0.0 : 1.0, 0);

  auto root = s_min(p, 0.1, 50.0);
  gate(12, "bisection converges, |q(s_min) - 1| < 1e-10",
       std::abs(root.q_at_root - 1.0) < 1e-10, std::abs(root.q_at_root - 1.0), 1e-10);

  // no closed-form value exists; pinned from the first computation
  const double pinned = 3.7045826028730517;
  gate(12, "s_min regression pin", std::abs(root.s_min - pinned) < 1e-9,
       std::abs(root.s_min - pinned), 1e-9);

  double s = 1.1 * root.s_min;
  bool converges = true;
  double sum = 0, prev_term = 0;
  for (std::size_t n = 1; n <= 40; ++n) {
    double term = xi_n_bound(p, s, n).stirling;
    if (n > 5 && !(term < 0.95 * prev_term)) converges = false;
    prev_term = term;
    sum += term;
  }
  gate(12, "xi_n partial sums converge at s = 1.1 s_min (ratio < 0.95)", converges,
       sum, 0.95);

  // below s_min the ratio test must fail: q(0.5 s_min) > 1
  double qlow = q_of_s(p, 0.5 * root.s_min);
  gate(12, "series diverges by ratio test at s = 0.5 s_min", qlow > 1.0, qlow, 1.0);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (g_failures) {
    std::printf("\n%d criterion gate(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("\nall criterion gates passed\n");
  return 0;
}
