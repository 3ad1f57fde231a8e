#include "iqft/contracted.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <stdexcept>

namespace iqft {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

double factd(std::size_t m) {
  double r = 1;
  for (std::size_t i = 2; i <= m; ++i) r *= double(i);
  return r;
}

}  // namespace

TruncatedOperator::TruncatedOperator(std::size_t base, std::size_t n_max)
    : base_(base), n_max_(n_max), blocks_((n_max + 1) * (n_max + 1)) {}

Eigen::MatrixXcd& TruncatedOperator::block(std::size_t to, std::size_t from) {
  Eigen::MatrixXcd& b = blocks_[to * (n_max_ + 1) + from];
  if (b.size() == 0)
    b = Eigen::MatrixXcd::Zero(Eigen::Index(ipow(base_, to)),
                               Eigen::Index(ipow(base_, from)));
  return b;
}

TruncatedOperator TruncatedOperator::identity(std::size_t base, std::size_t n_max) {
  TruncatedOperator a(base, n_max);
  for (std::size_t m = 0; m <= n_max; ++m)
    a.block(m, m).setIdentity();
  return a;
}

TruncatedOperator TruncatedOperator::random(std::size_t base, std::size_t n_max,
                                            std::mt19937_64& rng) {
  TruncatedOperator a(base, n_max);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (std::size_t to = 0; to <= n_max; ++to)
    for (std::size_t from = 0; from <= n_max; ++from) {
      auto& b = a.block(to, from);
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
          b(i, j) = std::complex<double>(nd(rng), nd(rng));
    }
  return a;
}

FockVector TruncatedOperator::apply(const FockVector& v) const {
  if (v.n_max() != n_max_ || v.base() != base_)
    throw std::invalid_argument("truncated operator: shape mismatch");
  FockVector out(v.grid(), v.spectrum(), n_max_);
  for (std::size_t to = 0; to <= n_max_; ++to) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(Eigen::Index(ipow(base_, to)));
    for (std::size_t from = 0; from <= n_max_; ++from) {
      if (!has_block(to, from)) continue;
      Eigen::VectorXcd x(Eigen::Index(v.layer(from).size()));
      for (std::size_t t = 0; t < v.layer(from).size(); ++t)
        x(Eigen::Index(t)) = v.layer(from)[t];
      acc += block(to, from) * x;
    }
    for (std::size_t t = 0; t < out.layer(to).size(); ++t)
      out.layer(to)[t] = acc(Eigen::Index(t));
  }
  return out;
}

namespace {

// per-layer tuple weights prod_j w_{point_j}
Eigen::VectorXd tuple_weights(const RapidityGrid& g, std::size_t D, std::size_t m) {
  const std::size_t base = g.size() * D;
  const std::size_t dim = ipow(base, m);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(Eigen::Index(dim));
  for (std::size_t t = 0; t < dim; ++t) {
    double p = 1.0;
    std::size_t rem = t;
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t st = ipow(base, m - 1 - j);
      p *= g.weights[(rem / st) / D];
      rem %= st;
    }
    w(Eigen::Index(t)) = p;
  }
  return w;
}

}  // namespace

double TruncatedOperator::weighted_norm(const RapidityGrid& g, std::size_t D) const {
  std::size_t total = 0;
  std::vector<std::size_t> offs(n_max_ + 2, 0);
  for (std::size_t m = 0; m <= n_max_; ++m) {
    offs[m] = total;
    total += ipow(base_, m);
  }
  offs[n_max_ + 1] = total;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(Eigen::Index(total), Eigen::Index(total));
  Eigen::VectorXd wsq = Eigen::VectorXd::Zero(Eigen::Index(total));
  for (std::size_t m = 0; m <= n_max_; ++m) {
    Eigen::VectorXd wm = tuple_weights(g, D, m);
    for (Eigen::Index i = 0; i < wm.size(); ++i)
      wsq(Eigen::Index(offs[m]) + i) = std::sqrt(wm(i));
    for (std::size_t l = 0; l <= n_max_; ++l)
      if (has_block(m, l))
        big.block(Eigen::Index(offs[m]), Eigen::Index(offs[l]),
                  Eigen::Index(ipow(base_, m)), Eigen::Index(ipow(base_, l))) =
            block(m, l);
  }
  Eigen::MatrixXcd sim = wsq.asDiagonal() * big *
                         wsq.cwiseInverse().cast<std::complex<double>>().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sim);
  return svd.singularValues()(0);
}

namespace {

// Evaluation context: caches the P_m matrices and the symmetrized blocks
// sqrt(mL! mR!) P^+ W A P used by the contracted matrix elements.
class ConEvaluator {
 public:
  ConEvaluator(const SPairCache& sc, const TruncatedOperator& A)
      : sc_(sc), a_(A), D_(sc.species()), base_(sc.grid().size() * D_) {}

  const SPairCache& sc() const { return sc_; }
  std::size_t D() const { return D_; }
  std::size_t base() const { return base_; }

  const Eigen::MatrixXcd& pmat(std::size_t m) {
    auto it = p_.find(m);
    if (it != p_.end()) return it->second;
    const std::size_t dim = ipow(base_, m);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(Eigen::Index(dim), Eigen::Index(dim));
    FockLayer col(m, base_);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t t = 0; t < dim; ++t) col[t] = (t == j) ? 1.0 : 0.0;
      FockLayer pj = project_pn(sc_, col);
      for (std::size_t t = 0; t < dim; ++t) P(Eigen::Index(t), Eigen::Index(j)) = pj[t];
    }
    return p_.emplace(m, std::move(P)).first->second;
  }

  const Eigen::VectorXd& weights(std::size_t m) {
    auto it = w_.find(m);
    if (it != w_.end()) return it->second;
    return w_.emplace(m, tuple_weights(sc_.grid(), D_, m)).first->second;
  }

  // P applied to a dense vector through the layer machinery (avoids
  // materializing the projector at high particle number)
  Eigen::VectorXcd project_vec(std::size_t m, const Eigen::VectorXcd& x) const {
    FockLayer l(m, base_);
    for (std::size_t t = 0; t < l.size(); ++t) l[t] = x(Eigen::Index(t));
    FockLayer p = project_pn(sc_, l);
    Eigen::VectorXcd out(x.size());
    for (std::size_t t = 0; t < p.size(); ++t) out(Eigen::Index(t)) = p[t];
    return out;
  }

  // sqrt(mL! mR!) P_mL^+ W_mL A_{mL,mR} P_mR
  const Eigen::MatrixXcd& sym_block(std::size_t mL, std::size_t mR) {
    auto key = std::make_pair(mL, mR);
    auto it = sym_.find(key);
    if (it != sym_.end()) return it->second;
    const double scale = std::sqrt(factd(mL) * factd(mR));
    Eigen::MatrixXcd m;
    if (!a_.has_block(mL, mR)) {
      m = Eigen::MatrixXcd::Zero(Eigen::Index(ipow(base_, mL)),
                                 Eigen::Index(ipow(base_, mR)));
    } else if (mR == 0) {
      // single column: P^+ W a = W P a by the weighted self-adjointness
      Eigen::VectorXcd col = a_.block(mL, 0).col(0);
      m = scale * (weights(mL).asDiagonal() * project_vec(mL, col));
    } else if (mL == 0) {
      // single row: (a P)^T = conj(W P W^{-1} conj(a^T))
      Eigen::VectorXcd row = a_.block(0, mR).row(0).transpose();
      Eigen::VectorXcd t = weights(mR).cwiseInverse().asDiagonal() * row.conjugate();
      m = scale *
          (weights(mR).asDiagonal() * project_vec(mR, t)).conjugate().transpose();
    } else {
      m = scale * pmat(mL).adjoint() * weights(mL).asDiagonal() *
          a_.block(mL, mR) * pmat(mR);
    }
    return sym_.emplace(key, std::move(m)).first->second;
  }

  // z_{i alpha} as a matrix taking layer m+1 to layer m; the S-symmetric
  // annihilator is the plain slice conjugated with the projections
  const Eigen::MatrixXcd& z_matrix(std::size_t m, std::size_t i, std::size_t alpha) {
    auto key = std::make_tuple(m, i, alpha);
    auto it = z_.find(key);
    if (it != z_.end()) return it->second;
    const std::size_t lo = ipow(base_, m);
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(Eigen::Index(lo),
                                                Eigen::Index(lo * base_));
    const std::size_t v = i * D_ + alpha;
    const double c = std::sqrt(double(m + 1));
    for (std::size_t t = 0; t < lo; ++t)
      Z(Eigen::Index(t), Eigen::Index(v * lo + t)) = c;
    Eigen::MatrixXcd zs = pmat(m) * Z * pmat(m + 1);
    return z_.emplace(key, std::move(zs)).first->second;
  }

  // sqrt(mL! mR!) P^+ W [z_{i alpha}, A] P between the given layers
  const Eigen::MatrixXcd& sym_comm_block(std::size_t mL, std::size_t mR,
                                         std::size_t i, std::size_t alpha) {
    auto key = std::make_tuple(mL, mR, i, alpha);
    auto it = symc_.find(key);
    if (it != symc_.end()) return it->second;
    const std::size_t nmax = a_.n_max();
    Eigen::MatrixXcd comm = Eigen::MatrixXcd::Zero(Eigen::Index(ipow(base_, mL)),
                                                   Eigen::Index(ipow(base_, mR)));
    if (mL + 1 <= nmax && a_.has_block(mL + 1, mR))
      comm += z_matrix(mL, i, alpha) * a_.block(mL + 1, mR);
    if (mR >= 1 && a_.has_block(mL, mR - 1))
      comm -= a_.block(mL, mR - 1) * z_matrix(mR - 1, i, alpha);
    Eigen::MatrixXcd m = std::sqrt(factd(mL) * factd(mR)) * pmat(mL).adjoint() *
                         weights(mL).asDiagonal() * comm * pmat(mR);
    return symc_.emplace(key, std::move(m)).first->second;
  }

 private:
  const SPairCache& sc_;
  const TruncatedOperator& a_;
  std::size_t D_, base_;
  std::map<std::size_t, Eigen::MatrixXcd> p_;
  std::map<std::size_t, Eigen::VectorXd> w_;
  std::map<std::pair<std::size_t, std::size_t>, Eigen::MatrixXcd> sym_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>,
           Eigen::MatrixXcd>
      symc_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Eigen::MatrixXcd> z_;
};

struct SlotLayout {
  std::vector<std::size_t> left_free;   // ascending, 1-based slots
  std::vector<std::size_t> right_free;  // ascending
};

SlotLayout layout_of(const Contraction& c) {
  SlotLayout lay;
  for (std::size_t j = c.k + 1; j <= c.n; ++j)
    if (!c.contracts_left(j)) lay.left_free.push_back(j);
  for (std::size_t j = 1; j <= c.k; ++j)
    if (!c.contracts_right(j)) lay.right_free.push_back(j);
  return lay;
}

// The smeared contribution of one contraction to <A>^con_{n,k}. When
// `commutator_route` is set, the middle element is <[z_{k+1}, A]>_C and the
// smearing of slot k+1 keeps its measure weight.
Complex contraction_term(ConEvaluator& ev, const Contraction& c,
                         const std::vector<GridFunction>& fs,
                         bool commutator_route) {
  const std::size_t n = c.n, k = c.k, len = c.length();
  const std::size_t D = ev.D();
  const std::size_t G = ev.sc().grid().size();
  const auto& w = ev.sc().grid().weights;
  const SlotLayout lay = layout_of(c);

  const std::size_t mR = lay.right_free.size();
  const std::size_t mLfull = lay.left_free.size();
  if (commutator_route && (lay.left_free.empty() || lay.left_free[0] != k + 1))
    throw std::logic_error("commutator route requires k+1 free");
  const std::size_t mL = commutator_route ? mLfull - 1 : mLfull;

  const Permutation prho = pi_rho(c), plam = pi_lambda(c);
  const Permutation pc = prho * plam;

  // free slots in assignment order: contracted pair points first, then frees
  std::vector<std::size_t> free_slots;
  for (auto s : lay.right_free) free_slots.push_back(s);
  for (auto s : lay.left_free) free_slots.push_back(s);

  const std::size_t n_pts = len + free_slots.size();
  std::vector<std::size_t> digit(n_pts, 0);
  std::vector<std::size_t> pts(n, 0);  // 0-based grid index per 1-based slot-1

  Complex total = 0.0;
  bool done = false;
  while (!done) {
    // assign points
    double wct = 1.0;
    for (std::size_t i = 0; i < len; ++i) {
      pts[c.ls[i] - 1] = digit[i];
      pts[c.rs[i] - 1] = digit[i];
      wct *= w[digit[i]];
    }
    for (std::size_t j = 0; j < free_slots.size(); ++j)
      pts[free_slots[j] - 1] = digit[len + j];
    if (commutator_route) wct *= w[pts[k]];  // slot k+1 measure weight

    Eigen::MatrixXcd M = s_tensor_at_points(ev.sc(), plam, pts) *
                         s_tensor_at_points(ev.sc(), prho, pts);
    (void)pc;

    // species sums
    const std::size_t nA = ipow(D, n);
    const std::size_t nG = ipow(D, len);
    const std::size_t nBL = ipow(D, mLfull);
    const std::size_t nBR = ipow(D, mR);
    Complex acc = 0.0;
    std::vector<std::size_t> av(n), lv(n);
    for (std::size_t ai = 0; ai < nA; ++ai) {
      std::size_t rem = ai;
      for (std::size_t j = n; j-- > 0;) {
        av[j] = rem % D;
        rem /= D;
      }
      Complex fprod = 1.0;
      for (std::size_t j = 0; j < n; ++j) fprod *= fs[j].at(pts[j], av[j]);
      if (fprod == 0.0) continue;

      for (std::size_t gi = 0; gi < nG; ++gi)
        for (std::size_t bl = 0; bl < nBL; ++bl)
          for (std::size_t br = 0; br < nBR; ++br) {
            // lower multi-index by column position (1-based u):
            //   u = k+i           -> gamma_i
            //   u = k+1-i         -> conj gamma_i
            //   u = 1..k-len      -> beta_right ascending
            //   u = k+len+1..n    -> beta_left ascending
            std::size_t g = gi, b = bl, r = br;
            std::vector<std::size_t> gam(len), betaL(mLfull), betaR(mR);
            for (std::size_t i = len; i-- > 0;) {
              gam[i] = g % D;
              g /= D;
            }
            for (std::size_t i = mLfull; i-- > 0;) {
              betaL[i] = b % D;
              b /= D;
            }
            for (std::size_t i = mR; i-- > 0;) {
              betaR[i] = r % D;
              r /= D;
            }
            for (std::size_t i = 0; i < len; ++i) {
              lv[k + i] = gam[i];                                   // u = k+i+1
              lv[k - i - 1] = ev.sc().spectrum().conjugate(gam[i]); // u = k-i
            }
            for (std::size_t j = 0; j < mR; ++j) lv[j] = betaR[j];
            for (std::size_t j = 0; j < mLfull; ++j) lv[k + len + j] = betaL[j];

            std::size_t li = 0;
            for (std::size_t j = 0; j < n; ++j) li = li * D + lv[j];
            Complex mval = M(Eigen::Index(ai), Eigen::Index(li));
            if (mval == 0.0) continue;

            // E row: ascending free-left tuples (minus slot k+1 on the
            // commutator route); E col: descending free-right tuples with
            // conjugated species
            std::size_t row = 0;
            for (std::size_t j = (commutator_route ? 1u : 0u); j < mLfull; ++j)
              row = row * ev.base() + pts[lay.left_free[j] - 1] * D + betaL[j];
            std::size_t col = 0;
            for (std::size_t j = mR; j-- > 0;)
              col = col * ev.base() + pts[lay.right_free[j] - 1] * D +
                    ev.sc().spectrum().conjugate(betaR[j]);

            Complex e;
            if (commutator_route)
              e = ev.sym_comm_block(mL, mR, pts[k], betaL[0])(Eigen::Index(row),
                                                              Eigen::Index(col));
            else
              e = ev.sym_block(mL, mR)(Eigen::Index(row), Eigen::Index(col));
            acc += fprod * mval * e;
          }
    }
    total += wct * acc;

    // next point assignment
    std::size_t d = 0;
    for (; d < n_pts; ++d) {
      if (++digit[d] < G) break;
      digit[d] = 0;
    }
    done = (d == n_pts) || n_pts == 0;
    if (n_pts == 0) break;
  }
  double sign = (len % 2 == 0) ? 1.0 : -1.0;
  return sign * total;
}

}  // namespace

Complex contracted_matrix_element(const SPairCache& sc, const TruncatedOperator& A,
                                  const Contraction& c,
                                  const std::vector<GridFunction>& left_frees,
                                  const std::vector<GridFunction>& right_frees) {
  c.validate();
  ConEvaluator ev(sc, A);
  const SlotLayout lay = layout_of(c);
  if (left_frees.size() != lay.left_free.size() ||
      right_frees.size() != lay.right_free.size())
    throw std::invalid_argument("contracted_matrix_element: smearing count");
  const std::size_t D = ev.D(), G = sc.grid().size();
  const std::size_t mL = left_frees.size(), mR = right_frees.size();
  const Eigen::MatrixXcd& E = ev.sym_block(mL, mR);

  // sum over free tuples of F G E with the row/column conventions of the
  // contracted elements (no measure weights; they cancel against the point
  // kernel normalization)
  Complex total = 0.0;
  const std::size_t nrow = ipow(G * D, mL), ncol = ipow(G * D, mR);
  for (std::size_t rowt = 0; rowt < nrow; ++rowt) {
    Complex fprod = 1.0;
    std::size_t rem = rowt;
    for (std::size_t j = mL; j-- > 0;) {
      std::size_t v = rem % (G * D);
      rem /= G * D;
      fprod *= left_frees[j].at(v / D, v % D);
    }
    if (fprod == 0.0) continue;
    for (std::size_t colt = 0; colt < ncol; ++colt) {
      // column digits run over descending right slots with conjugated
      // species; recover the ascending-order functions accordingly
      Complex gprod = 1.0;
      std::size_t c2 = colt;
      for (std::size_t j = 0; j < mR; ++j) {
        // digit j (most significant) corresponds to the highest slot
        std::size_t v = (colt / ipow(G * D, mR - 1 - j)) % (G * D);
        std::size_t point = v / D;
        std::size_t sp = sc.spectrum().conjugate(v % D);
        gprod *= right_frees[mR - 1 - j].at(point, sp);
      }
      (void)c2;
      if (gprod == 0.0) continue;
      total += fprod * gprod * E(Eigen::Index(rowt), Eigen::Index(colt));
    }
  }
  return total;
}

Complex fully_contracted_element(const SPairCache& sc, const TruncatedOperator& A,
                                 std::size_t n, std::size_t k,
                                 const std::vector<GridFunction>& fs) {
  if (fs.size() != n) throw std::invalid_argument("fully_contracted: need n functions");
  ConEvaluator ev(sc, A);
  Complex total = 0.0;
  for (const auto& c : enumerate_contractions(n, k))
    total += contraction_term(ev, c, fs, false);
  return total;
}

Complex fully_contracted_element_rewri(const SPairCache& sc,
                                       const TruncatedOperator& A, std::size_t n,
                                       std::size_t k,
                                       const std::vector<GridFunction>& fs) {
  if (k >= n) throw std::invalid_argument("rewri route: needs k < n");
  if (fs.size() != n) throw std::invalid_argument("fully_contracted: need n functions");
  ConEvaluator ev(sc, A);
  Complex total = 0.0;
  for (const auto& c : enumerate_contractions(n, k)) {
    if (c.contracts_left(k + 1)) continue;  // hat subset only
    total += contraction_term(ev, c, fs, true);
  }
  return total;
}

double s_tensor_factorization_residual(const SMatrix& s, const Contraction& c,
                                       const std::vector<double>& thetas) {
  c.validate();
  if (thetas.size() != c.n) throw std::invalid_argument("factorization: sizes");
  std::vector<double> th = thetas;
  for (std::size_t i = 0; i < c.length(); ++i) th[c.ls[i] - 1] = th[c.rs[i] - 1];
  Eigen::MatrixXcd lhs =
      s_tensor_at(s, pi_rho(c), th) * s_tensor_at(s, pi_lambda(c), th);
  Eigen::MatrixXcd rhs = s_tensor_at(s, pi_c(c), th);
  return (lhs - rhs).norm();
}

}  // namespace iqft
