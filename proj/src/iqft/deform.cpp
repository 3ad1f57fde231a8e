#include "iqft/deform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqft {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// decode tuple t (row-major, slot 0 major) into digits over base G
inline void decode(std::size_t t, std::size_t n, std::size_t G,
                   std::vector<std::size_t>& out) {
  for (std::size_t j = n; j-- > 0;) {
    out[j] = t % G;
    t /= G;
  }
}

}  // namespace

DeformationFunction::DeformationFunction(int sign, std::vector<Complex> zeros)
    : sign_(sign), zeros_(std::move(zeros)) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("deformation function: sign must be +-1");
  for (const auto& z : zeros_) {
    if (!(z.imag() > 0))
      throw std::invalid_argument("deformation function: zero with Im <= 0");
    Complex partner = -std::conj(z);
    auto it = std::find_if(zeros_.begin(), zeros_.end(), [&](Complex c) {
      return std::abs(c - partner) < 1e-12;
    });
    if (it == zeros_.end())
      throw std::invalid_argument("deformation function: zeros not closed under -conj");
  }
}

Complex DeformationFunction::eval(Complex a) const {
  if (a.imag() < -1e-12)
    // meromorphic continuation used by the contour checks; poles guarded
    for (const auto& z : zeros_)
      if (std::abs(a + z) < 1e-12)
        throw PoleError("deformation function: pole hit");
  Complex v = double(sign_);
  for (const auto& z : zeros_) v *= (z - a) / (z + a);
  return v;
}

QMatrix::QMatrix(std::size_t d, std::vector<std::vector<double>> q, double lambda)
    : d_(d), q_(std::move(q)), lambda_(lambda) {}

QMatrix QMatrix::two_dim(double lambda) {
  return QMatrix(2, {{0.0, lambda}, {lambda, 0.0}}, lambda);
}

QMatrix QMatrix::four_dim(double kappa, double kappa_prime) {
  return QMatrix(4,
                 {{0, kappa, 0, 0},
                  {kappa, 0, 0, 0},
                  {0, 0, 0, kappa_prime},
                  {0, 0, -kappa_prime, 0}},
                 kappa);
}

QMatrix QMatrix::negated() const {
  auto q = q_;
  for (auto& row : q)
    for (auto& v : row) v = -v;
  return QMatrix(d_, std::move(q), -lambda_);
}

std::vector<double> QMatrix::apply(const std::vector<double>& p) const {
  if (p.size() != d_) throw std::invalid_argument("Q apply: dimension");
  std::vector<double> r(d_, 0.0);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) r[i] += q_[i][j] * p[j];
  return r;
}

double QMatrix::minkowski(const std::vector<double>& a, const std::vector<double>& b) {
  double s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
  return s;
}

double QMatrix::skew_residual() const {
  double worst = 0;
  std::vector<double> a(d_), b(d_);
  for (int trial = 0; trial < 8; ++trial) {
    for (std::size_t i = 0; i < d_; ++i) {
      a[i] = std::sin(1.7 * double(i + 1) * double(trial + 1));
      b[i] = std::cos(0.9 * double(i + 2) * double(trial + 1));
    }
    worst = std::max(worst, std::abs(minkowski(apply(a), b) + minkowski(a, apply(b))));
  }
  return worst;
}

std::vector<std::vector<double>> QMatrix::boost_conjugated(double chi) const {
  // Lambda Q Lambda^{-1}, boost in the (0,1) plane
  std::vector<std::vector<double>> L(d_, std::vector<double>(d_, 0.0));
  for (std::size_t i = 0; i < d_; ++i) L[i][i] = 1.0;
  L[0][0] = L[1][1] = std::cosh(chi);
  L[0][1] = L[1][0] = std::sinh(chi);
  std::vector<std::vector<double>> Li = L;
  Li[0][1] = Li[1][0] = -std::sinh(chi);
  std::vector<std::vector<double>> tmp(d_, std::vector<double>(d_, 0.0)),
      out(d_, std::vector<double>(d_, 0.0));
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      for (std::size_t k = 0; k < d_; ++k) tmp[i][j] += q_[i][k] * Li[k][j];
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      for (std::size_t k = 0; k < d_; ++k) out[i][j] += L[i][k] * tmp[k][j];
  return out;
}

MomentumSet MomentumSet::from_rapidity_grid(const RapidityGrid& g, double mass) {
  MomentumSet ms;
  ms.d = 2;
  ms.weights = g.weights;
  ms.momenta.reserve(g.size());
  for (double th : g.points)
    ms.momenta.push_back({mass * std::cosh(th), mass * std::sinh(th)});
  return ms;
}

MomentumSet MomentumSet::discrete(std::size_t d,
                                  std::vector<std::vector<double>> momenta) {
  MomentumSet ms;
  ms.d = d;
  ms.momenta = std::move(momenta);
  for (const auto& p : ms.momenta)
    if (p.size() != d) throw std::invalid_argument("momentum set: dimension");
  ms.weights.assign(ms.momenta.size(), 1.0);
  return ms;
}

FermiFockVector::FermiFockVector(const MomentumSet& ms, std::size_t n_max) : ms_(ms) {
  layers_.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n)
    layers_.emplace_back(ipow(ms.size(), n), 0.0);
}

FermiFockVector FermiFockVector::vacuum(const MomentumSet& ms, std::size_t n_max) {
  FermiFockVector v(ms, n_max);
  v.layer(0)[0] = 1.0;
  return v;
}

FermiFockVector FermiFockVector::random_antisymmetric(const MomentumSet& ms,
                                                      std::size_t n_max,
                                                      std::mt19937_64& rng) {
  FermiFockVector v(ms, n_max);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::size_t G = ms.size();
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Complex> raw(v.layer(n).size());
    for (auto& x : raw) x = Complex(nd(rng), nd(rng));
    // antisymmetrize
    auto& out = v.layer(n);
    std::vector<std::size_t> dig(n);
    for (const auto& pi : Permutation::all(n)) {
      double sgn = pi.parity_sign();
      for (std::size_t t = 0; t < raw.size(); ++t) {
        decode(t, n, G, dig);
        std::size_t src = 0;
        for (std::size_t j = 0; j < n; ++j) src = src * G + dig[pi(j)];
        out[t] += sgn * raw[src];
      }
    }
  }
  double nn = v.norm();
  if (nn > 0) v *= 1.0 / nn;
  return v;
}

double FermiFockVector::norm() const { return std::sqrt(std::abs(inner(*this, *this).real())); }

double FermiFockVector::antisymmetry_residual() const {
  const std::size_t G = ms_.size();
  double worst = 0;
  for (std::size_t n = 2; n < layers_.size(); ++n) {
    const auto& l = layers_[n];
    std::vector<std::size_t> dig(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (std::size_t t = 0; t < l.size(); ++t) {
        decode(t, n, G, dig);
        std::swap(dig[k], dig[k + 1]);
        std::size_t s = 0;
        for (std::size_t j = 0; j < n; ++j) s = s * G + dig[j];
        worst = std::max(worst, std::abs(l[t] + l[s]));
      }
    }
  }
  return worst;
}

FermiFockVector& FermiFockVector::operator+=(const FermiFockVector& rhs) {
  for (std::size_t n = 0; n < layers_.size() && n < rhs.layers_.size(); ++n)
    for (std::size_t t = 0; t < layers_[n].size(); ++t)
      layers_[n][t] += rhs.layers_[n][t];
  return *this;
}

FermiFockVector& FermiFockVector::operator-=(const FermiFockVector& rhs) {
  for (std::size_t n = 0; n < layers_.size() && n < rhs.layers_.size(); ++n)
    for (std::size_t t = 0; t < layers_[n].size(); ++t)
      layers_[n][t] -= rhs.layers_[n][t];
  return *this;
}

FermiFockVector& FermiFockVector::operator*=(Complex c) {
  for (auto& l : layers_)
    for (auto& v : l) v *= c;
  return *this;
}

Complex inner(const FermiFockVector& a, const FermiFockVector& b) {
  const std::size_t G = a.momenta().size();
  Complex s = 0;
  std::vector<std::size_t> dig;
  for (std::size_t n = 0; n <= std::min(a.n_max(), b.n_max()); ++n) {
    dig.resize(n);
    const auto& la = a.layer(n);
    const auto& lb = b.layer(n);
    for (std::size_t t = 0; t < la.size(); ++t) {
      decode(t, n, G, dig);
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) w *= a.momenta().weights[dig[j]];
      s += w * std::conj(la[t]) * lb[t];
    }
  }
  return s;
}

Complex inner(const MomentumSet& ms, const MomentumFunction& a, const MomentumFunction& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    s += ms.weights[i] * std::conj(a[i]) * b[i];
  return s;
}

double norm(const MomentumSet& ms, const MomentumFunction& a) {
  return std::sqrt(std::abs(inner(ms, a, a).real()));
}

namespace {

// phases conj R(Q p_i . p_j) used by the deformed creation operator
struct RQPhases {
  std::vector<Complex> r;   // R(Q p_i . p_j), row-major i*G+j
  std::vector<Complex> rc;  // conj of the above
  std::size_t G;

  RQPhases(const DeformationFunction& R, const QMatrix& Q, const MomentumSet& ms) {
    G = ms.size();
    r.resize(G * G);
    rc.resize(G * G);
    for (std::size_t i = 0; i < G; ++i) {
      std::vector<double> qp = Q.apply(ms.momenta[i]);
      for (std::size_t j = 0; j < G; ++j) {
        Complex v = R.eval(QMatrix::minkowski(qp, ms.momenta[j]));
        r[i * G + j] = v;
        rc[i * G + j] = std::conj(v);
      }
    }
  }
};

std::vector<Complex> a_star_rq_layer(const RQPhases& ph, const MomentumFunction& phi,
                                     const std::vector<Complex>& in, std::size_t n,
                                     std::size_t G) {
  std::vector<Complex> out(ipow(G, n), 0.0);
  std::vector<std::size_t> dig(n);
  const double c = 1.0 / std::sqrt(double(n));
  for (std::size_t t = 0; t < out.size(); ++t) {
    decode(t, n, G, dig);
    Complex acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex f = phi[dig[k]];
      if (f == 0.0) continue;
      Complex tw = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) tw *= ph.rc[dig[k] * G + dig[j]];
      std::size_t src = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) src = src * G + dig[j];
      double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      acc += sgn * f * tw * in[src];
    }
    out[t] = c * acc;
  }
  return out;
}

std::vector<Complex> a_rq_layer(const RQPhases& ph, const MomentumSet& ms,
                                const MomentumFunction& phi,
                                const std::vector<Complex>& in_upper, std::size_t n,
                                std::size_t G) {
  std::vector<Complex> out(ipow(G, n), 0.0);
  std::vector<std::size_t> dig(n);
  const double c = std::sqrt(double(n + 1));
  for (std::size_t t = 0; t < out.size(); ++t) {
    decode(t, n, G, dig);
    Complex acc = 0;
    for (std::size_t q = 0; q < G; ++q) {
      Complex f = std::conj(phi[q]);
      if (f == 0.0) continue;
      Complex tw = 1.0;
      for (std::size_t j = 0; j < n; ++j) tw *= ph.r[q * G + dig[j]];
      acc += ms.weights[q] * f * tw * in_upper[q * out.size() + t];
    }
    out[t] = c * acc;
  }
  return out;
}

}  // namespace

FermiFockVector a_star(const MomentumFunction& phi, const FermiFockVector& in) {
  return a_star_rq(DeformationFunction::one(), QMatrix::two_dim(0.0), phi, in);
}

FermiFockVector a_annihilate(const MomentumFunction& phi, const FermiFockVector& in) {
  return a_rq(DeformationFunction::one(), QMatrix::two_dim(0.0), phi, in);
}

FermiFockVector t_r(const DeformationFunction& R, const std::vector<double>& x,
                    const FermiFockVector& in) {
  const auto& ms = in.momenta();
  const std::size_t G = ms.size();
  std::vector<Complex> ph(G);
  for (std::size_t i = 0; i < G; ++i)
    ph[i] = R.eval(QMatrix::minkowski(x, ms.momenta[i]));
  FermiFockVector out = in;
  std::vector<std::size_t> dig;
  for (std::size_t n = 1; n <= in.n_max(); ++n) {
    dig.resize(n);
    auto& l = out.layer(n);
    for (std::size_t t = 0; t < l.size(); ++t) {
      decode(t, n, G, dig);
      Complex c = 1.0;
      for (std::size_t j = 0; j < n; ++j) c *= ph[dig[j]];
      l[t] *= c;
    }
  }
  return out;
}

FermiFockVector a_star_rq(const DeformationFunction& R, const QMatrix& Q,
                          const MomentumFunction& phi, const FermiFockVector& in) {
  if (Q.d() != in.momenta().d)
    throw std::invalid_argument("a*_RQ: Q dimension mismatch");
  const std::size_t G = in.points();
  RQPhases ph(R, Q, in.momenta());
  FermiFockVector out(in.momenta(), in.n_max());
  for (std::size_t n = 1; n <= in.n_max(); ++n)
    out.layer(n) = a_star_rq_layer(ph, phi, in.layer(n - 1), n, G);
  return out;
}

FermiFockVector a_rq(const DeformationFunction& R, const QMatrix& Q,
                     const MomentumFunction& phi, const FermiFockVector& in) {
  if (Q.d() != in.momenta().d)
    throw std::invalid_argument("a_RQ: Q dimension mismatch");
  const std::size_t G = in.points();
  RQPhases ph(R, Q, in.momenta());
  FermiFockVector out(in.momenta(), in.n_max());
  for (std::size_t n = 0; n + 1 <= in.n_max(); ++n)
    out.layer(n) = a_rq_layer(ph, in.momenta(), phi, in.layer(n + 1), n, G);
  return out;
}

FermiFockVector z_grading(const FermiFockVector& in) {
  FermiFockVector out = in;
  for (std::size_t n = 0; n <= in.n_max(); ++n) {
    double s = (((n * (n - 1)) / 2) % 2 == 0) ? 1.0 : -1.0;
    for (auto& v : out.layer(n)) v *= s;
  }
  return out;
}

FermiFockVector phi_rq(const DeformationFunction& R, const QMatrix& Q,
                       const MomentumFunction& fplus, const MomentumFunction& fminus,
                       const FermiFockVector& in) {
  FermiFockVector out = a_star_rq(R, Q, fplus, in);
  MomentumFunction conj_fminus(fminus.size());
  for (std::size_t i = 0; i < fminus.size(); ++i)
    conj_fminus[i] = std::conj(fminus[i]);
  out += a_rq(R, Q, conj_fminus, in);
  return out;
}

DeformedExchangeResiduals check_deformed_exchange(const DeformationFunction& R,
                                                  const QMatrix& Q, const QMatrix& Qp,
                                                  const MomentumFunction& phi,
                                                  const MomentumFunction& psi,
                                                  const FermiFockVector& Psi) {
  const auto& ms = Psi.momenta();
  const std::size_t G = ms.size();
  const auto& w = ms.weights;
  RQPhases phQ(R, Q, ms), phQp(R, Qp, ms);
  DeformedExchangeResiduals res;

  auto point_fn = [&](std::size_t i) {
    MomentumFunction e(G, 0.0);
    e[i] = 1.0 / w[i];
    return e;
  };

  // a*_{R,Q}(p) a*_{R,Q'}(q) = -(R(Q'q.p)/R(Qp.q)) a*_{R,Q'}(q) a*_{R,Q}(p)
  {
    FermiFockVector lhs = a_star_rq(R, Q, phi, a_star_rq(R, Qp, psi, Psi));
    FermiFockVector rhs(ms, Psi.n_max());
    for (std::size_t i = 0; i < G; ++i) {
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_star_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = -w[i] * w[j] * phi[i] * psi[j] * phQp.r[j * G + i] /
                    phQ.r[i * G + j];
        if (c == 0.0) continue;
        FermiFockVector t = a_star_rq(R, Qp, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.star_star = lhs.norm();
  }

  // a_{R,Q}(p) a_{R,Q'}(q) = -(R(Q'q.p)/R(Qp.q)) a_{R,Q'}(q) a_{R,Q}(p)
  {
    FermiFockVector lhs = a_rq(R, Q, phi, a_rq(R, Qp, psi, Psi));
    FermiFockVector rhs(ms, Psi.n_max());
    for (std::size_t i = 0; i < G; ++i) {
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = -w[i] * w[j] * std::conj(phi[i]) * std::conj(psi[j]) *
                    phQp.r[j * G + i] / phQ.r[i * G + j];
        if (c == 0.0) continue;
        FermiFockVector t = a_rq(R, Qp, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.ann_ann = lhs.norm();
  }

  // a_{R,Q}(p) a*_{R,Q'}(q) = w delta T_R(Qp) T_R(Q'p)^*
  //                           - (R(Qp.q)/R(Q'q.p)) a*_{R,Q'}(q) a_{R,Q}(p)
  {
    FermiFockVector lhs = a_rq(R, Q, phi, a_star_rq(R, Qp, psi, Psi));
    FermiFockVector rhs(ms, Psi.n_max());
    for (std::size_t i = 0; i < G; ++i) {
      Complex c0 = w[i] * std::conj(phi[i]) * psi[i];
      if (c0 != 0.0) {
        // T_R(Q p_i) T_R(Q' p_i)^* multiplies layer tuples by phases
        FermiFockVector t = Psi;
        std::vector<std::size_t> dig;
        for (std::size_t n = 1; n <= Psi.n_max(); ++n) {
          dig.resize(n);
          auto& l = t.layer(n);
          for (std::size_t tt = 0; tt < l.size(); ++tt) {
            decode(tt, n, G, dig);
            Complex c = 1.0;
            for (std::size_t j = 0; j < n; ++j)
              c *= phQ.r[i * G + dig[j]] * phQp.rc[i * G + dig[j]];
            l[tt] *= c;
          }
        }
        t *= c0;
        rhs += t;
      }
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = -w[i] * w[j] * std::conj(phi[i]) * psi[j] *
                    phQ.r[i * G + j] / phQp.r[j * G + i];
        if (c == 0.0) continue;
        FermiFockVector t = a_star_rq(R, Qp, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.mixed = lhs.norm();
  }
  return res;
}

DeformedExchangeResiduals check_opposite_commutators(const DeformationFunction& R,
                                                     const QMatrix& Q,
                                                     const MomentumFunction& phi,
                                                     const MomentumFunction& psi,
                                                     const FermiFockVector& Psi) {
  const auto& ms = Psi.momenta();
  const std::size_t G = ms.size();
  const auto& w = ms.weights;
  DeformationFunction mR = R.negated();
  QMatrix mQ = Q.negated();
  RQPhases phQ(R, Q, ms), phmQ(R, mQ, ms);
  DeformedExchangeResiduals res;

  // [a_{R,Q}(phi), a_{-R,-Q}(psi)] = 0
  {
    FermiFockVector x = a_rq(R, Q, phi, a_rq(mR, mQ, psi, Psi));
    FermiFockVector y = a_rq(mR, mQ, psi, a_rq(R, Q, phi, Psi));
    x -= y;
    res.ann_ann = x.norm();
  }
  // [a*_{R,Q}(phi), a*_{-R,-Q}(psi)] = 0
  {
    FermiFockVector x = a_star_rq(R, Q, phi, a_star_rq(mR, mQ, psi, Psi));
    FermiFockVector y = a_star_rq(mR, mQ, psi, a_star_rq(R, Q, phi, Psi));
    x -= y;
    res.star_star = x.norm();
  }
  // [a_{R,Q}(phi), a*_{-R,-Q}(psi)] = sum_i w conj(phi) psi (-1)^N T T^*
  {
    FermiFockVector lhs = a_rq(R, Q, phi, a_star_rq(mR, mQ, psi, Psi));
    FermiFockVector sub = a_star_rq(mR, mQ, psi, a_rq(R, Q, phi, Psi));
    lhs -= sub;
    FermiFockVector rhs(ms, Psi.n_max());
    std::vector<std::size_t> dig;
    for (std::size_t i = 0; i < G; ++i) {
      Complex c0 = w[i] * std::conj(phi[i]) * psi[i];
      if (c0 == 0.0) continue;
      FermiFockVector t = Psi;
      for (std::size_t n = 0; n <= Psi.n_max(); ++n) {
        dig.resize(n);
        double gr = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^N
        auto& l = t.layer(n);
        for (std::size_t tt = 0; tt < l.size(); ++tt) {
          decode(tt, n, G, dig);
          Complex c = gr;
          for (std::size_t j = 0; j < n; ++j)
            c *= phQ.r[i * G + dig[j]] * phmQ.rc[i * G + dig[j]];
          l[tt] *= c;
        }
      }
      t *= c0;
      rhs += t;
    }
    lhs -= rhs;
    res.mixed = lhs.norm();
  }
  return res;
}

std::vector<LocalityIntegralPoint> locality_residual_integral(
    const DeformationFunction& R, const QMatrix& Q, const ParticleSpectrum& spec,
    const OnShellTransformer& tr, const TestFunction2D& f, const TestFunction2D& g,
    const FermiFockVector& Psi, const std::vector<std::size_t>& resolutions,
    double theta_max, bool enforce_tags) {
  if (Q.d() != 2)
    throw std::invalid_argument("locality integral: d = 2 path only");
  if (Q.lambda() < 0)
    throw std::invalid_argument(
        "locality integral: negative deformation parameter; call with the "
        "roles swapped (negated Q) for the corollary case");
  if (enforce_tags) {
    if (f.tag() != WedgeTag::Right)
      throw std::invalid_argument("locality integral: f must be right-wedge tagged");
    if (g.tag() != WedgeTag::Left)
      throw std::invalid_argument("locality integral: g must be left-wedge tagged");
  }
  const auto& ms = Psi.momenta();
  const std::size_t G = ms.size();

  std::vector<LocalityIntegralPoint> out;
  for (std::size_t res : resolutions) {
    RapidityGrid quad = RapidityGrid::gauss_legendre(-theta_max, theta_max, res);
    // per-node transforms and per-(node, state-point) ratios
    std::vector<Complex> fm(res), gp(res), fp(res), gm(res);
    for (std::size_t q = 0; q < res; ++q) {
      fm[q] = tr.transform(f, -1, quad.points[q], 0);
      gp[q] = tr.transform(g, +1, quad.points[q], 0);
      fp[q] = tr.transform(f, +1, quad.points[q], 0);
      gm[q] = tr.transform(g, -1, quad.points[q], 0);
    }
    std::vector<Complex> ratio(res * G);
    const double m = spec.mass(0);
    for (std::size_t q = 0; q < res; ++q) {
      std::vector<double> p{m * std::cosh(quad.points[q]),
                            m * std::sinh(quad.points[q])};
      std::vector<double> qp = Q.apply(p);
      for (std::size_t i = 0; i < G; ++i) {
        double arg = QMatrix::minkowski(ms.momenta[i], qp);
        ratio[q * G + i] = R.eval(arg) / R.eval(-arg);
      }
    }
    double resid = 0.0;
    std::vector<std::size_t> dig;
    for (std::size_t n = 0; n <= Psi.n_max(); ++n) {
      dig.resize(n);
      const auto& l = Psi.layer(n);
      const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t t = 0; t < l.size(); ++t) {
        if (l[t] == 0.0) continue;
        decode(t, n, G, dig);
        Complex integral = 0.0;
        for (std::size_t q = 0; q < res; ++q) {
          Complex prod = 1.0;
          for (std::size_t j = 0; j < n; ++j) prod *= ratio[q * G + dig[j]];
          integral += quad.weights[q] *
                      (fm[q] * gp[q] * prod - fp[q] * gm[q] / prod);
        }
        double w = 1.0;
        for (std::size_t j = 0; j < n; ++j) w *= ms.weights[dig[j]];
        double term = std::abs(sgn * integral * l[t]);
        resid += w * term * term;
      }
    }
    out.push_back({res, std::sqrt(resid)});
  }
  return out;
}

std::pair<Complex, Complex> locality_contour_pair(
    const DeformationFunction& R, const QMatrix& Q, const ParticleSpectrum& spec,
    const OnShellTransformer& tr, const TestFunction2D& f, const TestFunction2D& g,
    const std::vector<double>& p_state, std::size_t quad_points, double theta_max) {
  RapidityGrid quad = RapidityGrid::gauss_legendre(-theta_max, theta_max, quad_points);
  const double m = spec.mass(0);
  auto integrand = [&](Complex zeta) {
    Complex p0 = m * std::cosh(zeta), p1 = m * std::sinh(zeta);
    // Q p(zeta) . p_state with Q in the d = 2 normal form
    Complex qp0 = Q.entries()[0][1] * p1, qp1 = Q.entries()[1][0] * p0;
    Complex arg = qp0 * p_state[0] - qp1 * p_state[1];
    Complex ratio = R.eval(arg) / R.eval(-arg);
    return tr.transform(f, -1, zeta, 0) * tr.transform(g, +1, zeta, 0) * ratio;
  };
  Complex on_r = 0.0, shifted = 0.0;
  for (std::size_t q = 0; q < quad_points; ++q) {
    on_r += quad.weights[q] * integrand(quad.points[q]);
    shifted += quad.weights[q] * integrand(Complex(quad.points[q], kPi));
  }
  return {on_r, shifted};
}

namespace {

void check_ordering(const MomentumSet& ms, const MomentumFunction& slow,
                    const MomentumFunction& fast, const char* what) {
  // supports along the (rapidity-ordered) set with the 1e-10 rule
  auto support = [&](const MomentumFunction& h, std::size_t& lo, std::size_t& hi) {
    double mx = 0;
    for (auto& v : h) mx = std::max(mx, std::abs(v));
    lo = ms.size();
    hi = 0;
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (std::abs(h[i]) > 1e-10 * mx) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
  };
  std::size_t l1, h1, l2, h2;
  support(slow, l1, h1);
  support(fast, l2, h2);
  if (!(h1 < l2))
    throw std::invalid_argument(std::string("two-particle element: ") + what +
                                " supports not ordered");
}

}  // namespace

TwoParticleElement two_particle_element(const DeformationFunction& R, const QMatrix& Q,
                                        const MomentumSet& ms,
                                        const MomentumFunction& fplus,
                                        const MomentumFunction& gplus,
                                        const MomentumFunction& hplus,
                                        const MomentumFunction& kplus) {
  check_ordering(ms, fplus, gplus, "out-pair (need f before g)");
  check_ordering(ms, kplus, hplus, "in-pair (need k before h)");

  TwoParticleElement el;
  // route A: Fock construction of (g x_R f)_out and (k x_R h)_in
  {
    FermiFockVector omega = FermiFockVector::vacuum(ms, 2);
    FermiFockVector outstate = a_star_rq(R, Q, gplus, a_star(fplus, omega));
    FermiFockVector instate = a_star_rq(R, Q, kplus, a_star(hplus, omega));
    el.route_a = inner(outstate, instate);
  }
  // route B: double integral of the amplitude kernel
  {
    RQPhases ph(R, Q, ms);
    const std::size_t G = ms.size();
    Complex acc = 0.0;
    for (std::size_t p = 0; p < G; ++p)
      for (std::size_t q = 0; q < G; ++q) {
        Complex rfac = ph.r[p * G + q] * std::conj(ph.r[q * G + p]);
        acc += ms.weights[p] * ms.weights[q] * rfac * std::conj(gplus[p]) *
               hplus[p] * std::conj(fplus[q]) * kplus[q];
      }
    el.route_b = -acc;
  }
  return el;
}

Complex scattering_function_bridge(const DeformationFunction& R, double lambda,
                                   double mass, Complex zeta) {
  Complex v = R.eval(lambda * mass * mass * std::sinh(zeta));
  return -v * v;
}

SMatrix bridge_smatrix(const DeformationFunction& R, double lambda, double mass) {
  ScalarAmplitude amp;
  amp.epsilon = -1;
  for (const auto& z : R.zeros()) {
    Complex beta = std::asinh(z / (lambda * mass * mass));
    amp.zeros.push_back(beta);
    amp.zeros.push_back(beta);  // R enters squared
  }
  return SMatrix::scalar_family(mass, std::move(amp));
}

DeformedExchangeResiduals zf_bridge_check(const DeformationFunction& R, double lambda,
                                          double mass, const RapidityGrid& grid,
                                          const MomentumFunction& phi,
                                          const MomentumFunction& psi,
                                          const FermiFockVector& Psi) {
  const QMatrix Q = QMatrix::two_dim(lambda);
  const auto& ms = Psi.momenta();
  const std::size_t G = ms.size();
  const auto& w = ms.weights;
  SMatrix slam = bridge_smatrix(R, lambda, mass);
  DeformedExchangeResiduals res;

  auto point_fn = [&](std::size_t i) {
    MomentumFunction e(G, 0.0);
    e[i] = 1.0 / w[i];
    return e;
  };
  auto slam_at = [&](std::size_t a, std::size_t b) {
    return slam.scalar(grid.points[a] - grid.points[b]);
  };

  // z(t1) z(t2) = S(t2-t1) z(t2) z(t1)
  {
    FermiFockVector lhs = a_rq(R, Q, phi, a_rq(R, Q, psi, Psi));
    FermiFockVector rhs(ms, Psi.n_max());
    for (std::size_t i = 0; i < G; ++i) {
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = w[i] * w[j] * std::conj(phi[i]) * std::conj(psi[j]) * slam_at(j, i);
        if (c == 0.0) continue;
        FermiFockVector t = a_rq(R, Q, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.ann_ann = lhs.norm();
  }
  // zd(t1) zd(t2) = S(t2-t1) zd(t2) zd(t1)
  {
    FermiFockVector lhs = a_star_rq(R, Q, phi, a_star_rq(R, Q, psi, Psi));
    FermiFockVector rhs(ms, Psi.n_max());
    for (std::size_t i = 0; i < G; ++i) {
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_star_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = w[i] * w[j] * phi[i] * psi[j] * slam_at(j, i);
        if (c == 0.0) continue;
        FermiFockVector t = a_star_rq(R, Q, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.star_star = lhs.norm();
  }
  // z(t1) zd(t2) = S(t1-t2) zd(t2) z(t1) + delta(t1-t2)
  {
    FermiFockVector lhs = a_rq(R, Q, phi, a_star_rq(R, Q, psi, Psi));
    FermiFockVector rhs = Psi;
    Complex pairing = 0.0;
    for (std::size_t i = 0; i < G; ++i) pairing += w[i] * std::conj(phi[i]) * psi[i];
    rhs *= pairing;
    for (std::size_t i = 0; i < G; ++i) {
      if (phi[i] == 0.0) continue;
      FermiFockVector ai = a_rq(R, Q, point_fn(i), Psi);
      for (std::size_t j = 0; j < G; ++j) {
        Complex c = w[i] * w[j] * std::conj(phi[i]) * psi[j] * slam_at(i, j);
        if (c == 0.0) continue;
        FermiFockVector t = a_star_rq(R, Q, point_fn(j), ai);
        t *= c;
        rhs += t;
      }
    }
    lhs -= rhs;
    res.mixed = lhs.norm();
  }
  return res;
}

}  // namespace iqft
