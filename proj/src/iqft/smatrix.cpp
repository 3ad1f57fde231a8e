#include "iqft/smatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqft {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const Complex kI(0.0, 1.0);

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m,
                                                     Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

}  // namespace

void ScalarAmplitude::validate() const {
  if (!(epsilon == 1 || epsilon == -1))
    throw std::invalid_argument("scalar amplitude: epsilon must be +-1");
  if (a < 0.0) throw std::invalid_argument("scalar amplitude: a < 0");
  // zero multiset closed under b -> -conj(b), all in the physical half strip
  for (const auto& b : zeros) {
    if (!(b.imag() > 0.0 && b.imag() <= kPi / 2 + 1e-12))
      throw std::invalid_argument("scalar amplitude: zero outside 0 < Im b <= pi/2");
  }
  std::vector<Complex> pool = zeros;
  for (const auto& b : zeros) {
    Complex partner = -std::conj(b);
    auto it = std::find_if(pool.begin(), pool.end(), [&](Complex c) {
      return std::abs(c - partner) < 1e-12;
    });
    if (it == pool.end())
      throw std::invalid_argument("scalar amplitude: zeros not closed under b -> -conj(b)");
    pool.erase(it);
  }
}

Complex ScalarAmplitude::eval(Complex zeta, double pole_tol) const {
  Complex sz = std::sinh(zeta);
  Complex v = double(epsilon) * std::exp(kI * a * sz);
  for (const auto& b : zeros) {
    Complex sb = std::sinh(b);
    if (std::abs(sb + sz) < pole_tol)
      throw PoleError("scalar amplitude: Blaschke denominator zero");
    v *= (sb - sz) / (sb + sz);
  }
  return v;
}

ScalarAmplitude sinh_gordon_amplitude(double g_squared) {
  if (!(g_squared > 0.0)) throw std::invalid_argument("sinh-gordon: g^2 <= 0");
  double b = kPi * g_squared / (4 * kPi + g_squared);
  ScalarAmplitude amp;
  amp.epsilon = -1;
  amp.a = 0.0;
  amp.zeros = {Complex(0.0, b)};
  return amp;
}

SigmaTriple on_sigma_direct(int N, Complex zeta, double pole_tol) {
  if (N < 3) throw std::invalid_argument("o(n): N >= 3 required");
  const double nu = 1.0 / double(N - 2);
  auto sigma2 = [&](Complex z) {
    Complex x = kI * z / (2 * kPi);
    Complex num = cgamma(nu - x, pole_tol) * cgamma(0.5 - x, pole_tol) *
                  cgamma(0.5 + nu + x, pole_tol) * cgamma(1.0 + x, pole_tol);
    Complex den = cgamma(0.5 + nu - x, pole_tol) * cgamma(-x, pole_tol) *
                  cgamma(1.0 + nu + x, pole_tol) * cgamma(0.5 + x, pole_tol);
    return num / den;
  };
  const Complex ipi(0.0, kPi);
  if (std::abs(ipi - zeta) < pole_tol)
    throw PoleError("sigma_1: quotient point zeta = i pi");
  if (std::abs(zeta) < pole_tol)
    throw PoleError("sigma_3: quotient point zeta = 0");
  SigmaTriple t;
  t.s2 = sigma2(zeta);
  const Complex c = -2.0 * kPi * kI / double(N - 2);
  t.s1 = c * t.s2 / (ipi - zeta);
  t.s3 = c * sigma2(ipi - zeta) / zeta;  // sigma_1(i pi - zeta)
  return t;
}

SigmaTriple on_sigma(int N, Complex zeta) {
  // exact limits at the two quotient points
  if (std::abs(zeta) < 1e-12) return {0.0, 0.0, -1.0};
  if (std::abs(zeta - Complex(0.0, kPi)) < 1e-12) return {-1.0, 0.0, 0.0};
  try {
    return on_sigma_direct(N, zeta);
  } catch (const PoleError&) {
    // evaluate as a limit; never divide at the pole
    auto sample = [&](double h) { return on_sigma_direct(N, zeta + Complex(h, 0.0)); };
    double h = 1e-4;
    SigmaTriple a, b;
    try {
      a = sample(h);
      b = sample(h / 10);
    } catch (const PoleError&) {
      a = sample(-h);
      b = sample(-h / 10);
    }
    SigmaTriple t;
    t.s1 = (10.0 * b.s1 - a.s1) / 9.0;
    t.s2 = (10.0 * b.s2 - a.s2) / 9.0;
    t.s3 = (10.0 * b.s3 - a.s3) / 9.0;
    return t;
  }
}

SMatrix::SMatrix(SMatrixKind kind, ParticleSpectrum spec)
    : kind_(kind), spec_(std::move(spec)) {}

SMatrix SMatrix::constant_flip(ParticleSpectrum spec, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("constant: sign must be +-1");
  SMatrix s(SMatrixKind::Constant, std::move(spec));
  s.flip_sign_ = sign;
  s.kappa_ = kPi / 2;
  s.norm_kappa_ = 1.0;
  return s;
}

SMatrix SMatrix::scalar_family(double mass, ScalarAmplitude amp) {
  amp.validate();
  SMatrix s(SMatrixKind::ScalarFamily, ParticleSpectrum::neutral(1, mass));
  s.amp_ = std::move(amp);
  return s;
}

SMatrix SMatrix::sinh_gordon(double mass, double g_squared) {
  SMatrix s(SMatrixKind::SinhGordon, ParticleSpectrum::neutral(1, mass));
  s.amp_ = sinh_gordon_amplitude(g_squared);
  return s;
}

SMatrix SMatrix::diagonal(ParticleSpectrum spec,
                          std::vector<std::vector<ScalarAmplitude>> omega) {
  const std::size_t D = spec.species_count();
  if (omega.size() != D) throw std::invalid_argument("diagonal: omega table size");
  for (const auto& row : omega)
    if (row.size() != D) throw std::invalid_argument("diagonal: omega table size");
  SMatrix s(SMatrixKind::Diagonal, std::move(spec));
  s.omega_ = std::move(omega);
  return s;
}

SMatrix SMatrix::o_n(int N, double mass) {
  if (N < 3) throw std::invalid_argument("o(n): N >= 3");
  SMatrix s(SMatrixKind::ON, ParticleSpectrum::neutral(std::size_t(N), mass));
  s.on_n_ = N;
  return s;
}

SMatrix SMatrix::user_table(ParticleSpectrum spec, std::vector<double> thetas,
                            std::vector<Eigen::MatrixXcd> values) {
  if (thetas.size() < 2 || thetas.size() != values.size())
    throw std::invalid_argument("user table: need >= 2 samples");
  const Eigen::Index dd = Eigen::Index(spec.species_count() * spec.species_count());
  for (const auto& v : values)
    if (v.rows() != dd || v.cols() != dd)
      throw std::invalid_argument("user table: value dimension");
  SMatrix s(SMatrixKind::UserTable, std::move(spec));
  s.table_thetas_ = std::move(thetas);
  s.table_values_ = std::move(values);
  return s;
}

Eigen::MatrixXcd flip_tensor(std::size_t D) {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(D * D, D * D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) f(a * D + b, b * D + a) = 1.0;
  return f;
}

Complex SMatrix::scalar(Complex zeta) const {
  switch (kind_) {
    case SMatrixKind::ScalarFamily:
    case SMatrixKind::SinhGordon:
      return amp_.eval(zeta);
    case SMatrixKind::Constant:
      if (dim() == 1) return Complex(double(flip_sign_), 0.0);
      break;
    default:
      break;
  }
  throw std::logic_error("scalar(): not a scalar S-matrix");
}

Eigen::MatrixXcd SMatrix::eval(Complex zeta) const {
  const std::size_t D = dim();
  switch (kind_) {
    case SMatrixKind::Constant:
      return double(flip_sign_) * flip_tensor(D);
    case SMatrixKind::ScalarFamily:
    case SMatrixKind::SinhGordon: {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = amp_.eval(zeta);
      return m;
    }
    case SMatrixKind::Diagonal: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(D * D, D * D);
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b)
          m(a * D + b, b * D + a) = omega_[a][b].eval(zeta);
      return m;
    }
    case SMatrixKind::ON: {
      // Exchange (braid) tensor: the flip composed with the amplitude
      // sigma_1 P + sigma_2 id + sigma_3 F, so sigma_2 multiplies the flip
      // pattern and sigma_3 the identity here. Of the six possible pattern
      // assignments this is the only one satisfying the braid Yang-Baxter
      // equation together with unitarity and crossing.
      SigmaTriple t = on_sigma(on_n_, zeta);
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(D * D, D * D);
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b)
          for (std::size_t c = 0; c < D; ++c)
            for (std::size_t d = 0; d < D; ++d) {
              Complex v = 0.0;
              if (a == b && c == d) v += t.s1;
              if (a == c && b == d) v += t.s3;
              if (a == d && b == c) v += t.s2;
              if (v != 0.0) m(a * D + b, c * D + d) = v;
            }
      return m;
    }
    case SMatrixKind::UserTable: {
      if (std::abs(zeta.imag()) > 1e-12)
        throw std::domain_error("user table: real rapidity only");
      double th = zeta.real();
      const auto& xs = table_thetas_;
      if (th <= xs.front()) return table_values_.front();
      if (th >= xs.back()) return table_values_.back();
      auto it = std::upper_bound(xs.begin(), xs.end(), th);
      std::size_t j = std::size_t(it - xs.begin());
      double t = (th - xs[j - 1]) / (xs[j] - xs[j - 1]);
      return (1.0 - t) * table_values_[j - 1] + t * table_values_[j];
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXcd SMatrix::eval_vertex(Complex zeta) const {
  return flip_tensor(dim()) * eval(zeta);
}

Complex SMatrix::entry(std::size_t a, std::size_t b, std::size_t c,
                       std::size_t d, Complex zeta) const {
  const std::size_t D = dim();
  return eval(zeta)(a * D + b, c * D + d);
}

double AxiomReport::max_residual() const {
  double m = std::max({unitarity, hermitian_analyticity, yang_baxter, crossing,
                       pct, translational});
  if (gauge) m = std::max(m, *gauge);
  return m;
}

std::vector<double> default_theta_grid() {
  std::vector<double> g(81);
  for (int i = 0; i < 81; ++i) g[std::size_t(i)] = -4.0 + 0.1 * double(i);
  return g;
}

std::vector<std::pair<double, double>> default_pair_grid() {
  std::vector<std::pair<double, double>> g;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      g.emplace_back(-4.0 + 8.0 * (double(i) + 0.5) / 20.0,
                     -4.0 + 8.0 * (double(j) + 0.5) / 20.0);
  return g;
}

AxiomReport check_axioms(const SMatrix& s, const std::vector<double>& grid,
                         const std::vector<std::pair<double, double>>& pair_grid,
                         const std::vector<Eigen::MatrixXcd>* gauge_reps) {
  if (grid.empty() || pair_grid.empty())
    throw std::invalid_argument("check_axioms: empty grid");
  const std::size_t D = s.dim();
  const std::size_t DD = D * D;
  const auto& spec = s.spectrum();
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(DD, DD);
  const Eigen::MatrixXcd oneD = Eigen::MatrixXcd::Identity(D, D);
  const Complex ipi(0.0, kPi);

  AxiomReport rep;
  rep.grid_description = std::to_string(grid.size()) + " theta points, " +
                         std::to_string(pair_grid.size()) + " pairs";

  for (double th : grid) {
    Eigen::MatrixXcd S = s.eval(th);
    Eigen::MatrixXcd Sm = s.eval(-th);
    Eigen::MatrixXcd Sx = s.analytic() ? s.eval(ipi - th) : S;

    rep.unitarity = std::max(rep.unitarity, spectral_norm(S.adjoint() * S - one));
    rep.hermitian_analyticity =
        std::max(rep.hermitian_analyticity, spectral_norm(S.inverse() - Sm));

    double cro = 0, pct = 0, tra = 0;
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b)
        for (std::size_t c = 0; c < D; ++c)
          for (std::size_t d = 0; d < D; ++d) {
            std::size_t ab = spec.conjugate(a), bb = spec.conjugate(b),
                        cb = spec.conjugate(c), db = spec.conjugate(d);
            if (s.analytic())
              cro = std::max(cro, std::abs(Sx(a * D + b, c * D + d) -
                                           S(cb * D + a, d * D + bb)));
            pct = std::max(pct, std::abs(S(a * D + b, c * D + d) -
                                         S(db * D + cb, bb * D + ab)));
            if (spec.mass(a) != spec.mass(d) || spec.mass(b) != spec.mass(c))
              tra = std::max(tra, std::abs(S(a * D + b, c * D + d)));
          }
    rep.crossing = std::max(rep.crossing, cro);
    rep.pct = std::max(rep.pct, pct);
    rep.translational = std::max(rep.translational, tra);

    if (gauge_reps) {
      double g = rep.gauge.value_or(0.0);
      for (const auto& v : *gauge_reps) {
        Eigen::MatrixXcd vv = kron(v, v);
        g = std::max(g, spectral_norm(S * vv - vv * S));
      }
      rep.gauge = g;
    }
  }

  for (auto [t1, t2] : pair_grid) {
    Eigen::MatrixXcd s1 = s.eval(t1), s2p = s.eval(t1 + t2), s2 = s.eval(t2);
    Eigen::MatrixXcd l = kron(s1, oneD) * kron(oneD, s2p) * kron(s2, oneD);
    Eigen::MatrixXcd r = kron(oneD, s2) * kron(s2p, oneD) * kron(oneD, s1);
    rep.yang_baxter = std::max(rep.yang_baxter, spectral_norm(l - r));
  }
  return rep;
}

StripEstimate estimate_kappa_and_norm(const SMatrix& s, std::size_t lambda_samples,
                                      std::size_t theta_samples, double det_tol) {
  if (!s.analytic())
    throw std::invalid_argument("kappa estimate: kind has no analytic continuation");
  StripEstimate est;
  est.lambda_samples = lambda_samples;
  est.theta_samples = theta_samples;

  std::vector<double> thetas(theta_samples);
  for (std::size_t i = 0; i < theta_samples; ++i)
    thetas[i] = -4.0 + 8.0 * double(i) / double(theta_samples - 1);

  // geometric-mean normalization keeps the determinant criterion
  // comparable across tensor dimensions
  const double dd = double(s.dim() * s.dim());
  auto min_det = [&](double lam) {
    double m = std::numeric_limits<double>::infinity();
    for (double th : thetas) {
      try {
        m = std::min(m, std::pow(std::abs(s.eval(Complex(th, lam)).determinant()),
                                 1.0 / dd));
      } catch (const PoleError&) {
        return 0.0;
      }
    }
    return m;
  };

  double kappa = 0.0;
  bool capped = true;
  for (std::size_t j = 1; j <= lambda_samples; ++j) {
    double lam = (kPi / 2) * double(j) / double(lambda_samples);
    if (min_det(lam) > det_tol) {
      kappa = lam;
    } else {
      est.pole_candidates.push_back(lam);
      capped = false;
      break;
    }
  }
  est.kappa_est = kappa;
  est.capped = capped;

  // sup norm over the closed enlarged strip S(-kappa, pi + kappa), sampled
  double sup = 0.0;
  const std::size_t nl = std::max<std::size_t>(lambda_samples, 8);
  for (std::size_t j = 0; j <= nl; ++j) {
    double lam = -kappa + (kPi + 2 * kappa) * double(j) / double(nl);
    for (double th : thetas) {
      try {
        Eigen::MatrixXcd S = s.eval(Complex(th, lam));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S.adjoint() * S,
                                                           Eigen::EigenvaluesOnly);
        sup = std::max(sup, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
      } catch (const PoleError&) {
        // skip the sample; the kappa scan already flagged this region
      }
    }
  }
  est.sup_norm = sup;
  return est;
}

}  // namespace iqft
