#include "iqft/fock.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "iqft/phase.hpp"

namespace iqft {

namespace {
std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}
}  // namespace

SPairCache::SPairCache(const SMatrix& s, const RapidityGrid& grid)
    : grid_(grid), spec_(&s.spectrum()), g_(grid.size()),
      d_(s.spectrum().species_count()) {
  cache_.reserve(g_ * g_);
  for (std::size_t a = 0; a < g_; ++a)
    for (std::size_t b = 0; b < g_; ++b)
      cache_.push_back(s.eval(grid.points[b] - grid.points[a]));
}

FockLayer::FockLayer(std::size_t slots, std::size_t base)
    : n_(slots), base_(base), data_(ipow(base, slots), 0.0) {}

std::size_t FockLayer::stride(std::size_t slot) const {
  return ipow(base_, n_ - 1 - slot);
}

FockLayer& FockLayer::operator+=(const FockLayer& rhs) {
  assert(size() == rhs.size());
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += rhs.data_[t];
  return *this;
}

FockLayer& FockLayer::operator-=(const FockLayer& rhs) {
  assert(size() == rhs.size());
  for (std::size_t t = 0; t < data_.size(); ++t) data_[t] -= rhs.data_[t];
  return *this;
}

FockLayer& FockLayer::operator*=(std::complex<double> c) {
  for (auto& v : data_) v *= c;
  return *this;
}

FockVector::FockVector(const RapidityGrid& grid, const ParticleSpectrum& spec,
                       std::size_t n_max)
    : grid_(grid), spec_(spec) {
  const std::size_t base = grid.size() * spec.species_count();
  layers_.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) layers_.emplace_back(n, base);
}

FockVector FockVector::vacuum(const RapidityGrid& g, const ParticleSpectrum& s,
                              std::size_t n_max) {
  FockVector v(g, s, n_max);
  v.layer(0)[0] = 1.0;
  return v;
}

FockVector FockVector::one_particle(const GridFunction& phi,
                                    const ParticleSpectrum& s, std::size_t n_max) {
  FockVector v(phi.grid(), s, n_max);
  for (std::size_t t = 0; t < v.layer(1).size(); ++t)
    v.layer(1)[t] = phi.at(t / s.species_count(), t % s.species_count());
  return v;
}

FockVector FockVector::random(const RapidityGrid& g, const ParticleSpectrum& s,
                              std::size_t n_max, std::mt19937_64& rng) {
  FockVector v(g, s, n_max);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (std::size_t n = 1; n <= n_max; ++n)
    for (std::size_t t = 0; t < v.layer(n).size(); ++t)
      v.layer(n)[t] = std::complex<double>(nd(rng), nd(rng));
  double nn = v.norm();
  if (nn > 0) v *= 1.0 / nn;
  return v;
}

double FockVector::layer_weight_norm(std::size_t n) const {
  return layer_norm(grid_, spec_.species_count(), layers_[n]);
}

double FockVector::norm() const {
  double s = 0.0;
  for (std::size_t n = 0; n < layers_.size(); ++n) {
    double ln = layer_weight_norm(n);
    s += ln * ln;
  }
  return std::sqrt(s);
}

FockVector& FockVector::operator+=(const FockVector& rhs) {
  for (std::size_t n = 0; n < layers_.size() && n < rhs.layers_.size(); ++n)
    layers_[n] += rhs.layers_[n];
  truncated_ = truncated_ || rhs.truncated_;
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& rhs) {
  for (std::size_t n = 0; n < layers_.size() && n < rhs.layers_.size(); ++n)
    layers_[n] -= rhs.layers_[n];
  truncated_ = truncated_ || rhs.truncated_;
  return *this;
}

FockVector& FockVector::operator*=(std::complex<double> c) {
  for (auto& l : layers_) l *= c;
  return *this;
}

std::complex<double> layer_inner(const RapidityGrid& g, std::size_t D,
                                 const FockLayer& a, const FockLayer& b) {
  assert(a.size() == b.size() && a.slots() == b.slots());
  const std::size_t n = a.slots();
  std::complex<double> s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    double w = 1.0;
    std::size_t rem = t;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t st = a.stride(j);
      w *= g.weights[(rem / st) / D];
      rem %= st;
    }
    s += w * std::conj(a[t]) * b[t];
  }
  return s;
}

double layer_norm(const RapidityGrid& g, std::size_t D, const FockLayer& a) {
  return std::sqrt(std::abs(layer_inner(g, D, a, a).real()));
}

std::complex<double> inner(const FockVector& a, const FockVector& b) {
  std::complex<double> s = 0.0;
  const std::size_t nmax = std::min(a.n_max(), b.n_max());
  for (std::size_t n = 0; n <= nmax; ++n)
    s += layer_inner(a.grid(), a.spectrum().species_count(), a.layer(n), b.layer(n));
  return s;
}

FockLayer d_n_transposition(const SPairCache& sc, std::size_t k, const FockLayer& in) {
  const std::size_t n = in.slots(), D = sc.species();
  if (k + 1 >= n) throw std::invalid_argument("d_n_transposition: index");
  FockLayer out(n, in.base());
  const std::size_t sk = in.stride(k), sk1 = in.stride(k + 1);
  for (std::size_t t = 0; t < in.size(); ++t) {
    const std::size_t vk = (t / sk) % in.base(), vk1 = (t / sk1) % in.base();
    const std::size_t ia = vk / D, al = vk % D;   // slot k: point ia, species al
    const std::size_t ib = vk1 / D, be = vk1 % D; // slot k+1
    const Eigen::MatrixXcd& S = sc.at(ia, ib);    // S(theta_b - theta_a)
    const std::size_t t0 = t - vk * sk - vk1 * sk1;
    std::complex<double> acc = 0.0;
    for (std::size_t ga = 0; ga < D; ++ga)
      for (std::size_t de = 0; de < D; ++de)
        acc += S(al * D + be, ga * D + de) *
               in[t0 + (ib * D + ga) * sk + (ia * D + de) * sk1];
    out[t] = acc;
  }
  return out;
}

FockLayer d_n(const SPairCache& sc, const Permutation& pi, const FockLayer& in) {
  FockLayer cur = in;
  auto w = pi.word();
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    cur = d_n_transposition(sc, *it, cur);
  return cur;
}

FockLayer d_n_free(std::size_t D, int sign, const Permutation& pi, const FockLayer& in) {
  const std::size_t n = in.slots();
  FockLayer cur = in;
  auto w = pi.word();
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const std::size_t k = *it;
    FockLayer out(n, in.base());
    const std::size_t sk = cur.stride(k), sk1 = cur.stride(k + 1);
    for (std::size_t t = 0; t < cur.size(); ++t) {
      const std::size_t vk = (t / sk) % cur.base(), vk1 = (t / sk1) % cur.base();
      const std::size_t t0 = t - vk * sk - vk1 * sk1;
      out[t] = double(sign) * cur[t0 + vk1 * sk + vk * sk1];
    }
    cur = out;
  }
  return cur;
}

FockLayer project_pn(const SPairCache& sc, const FockLayer& in) {
  const std::size_t n = in.slots();
  if (n > 8) throw std::invalid_argument("project_pn: n > 8 guard");
  if (n < 2) return in;
  FockLayer acc(n, in.base());
  std::size_t count = 0;
  for (const auto& pi : Permutation::all(n)) {
    acc += d_n(sc, pi, in);
    ++count;
  }
  acc *= 1.0 / double(count);
  return acc;
}

namespace {

Eigen::MatrixXcd s_tensor_from_words(
    std::size_t n, std::size_t D, const Permutation& pi,
    const std::function<Eigen::MatrixXcd(std::size_t, std::size_t)>& pair_s) {
  const std::size_t dim = ipow(D, n);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(dim, dim);
  Permutation rho(n);
  for (std::size_t k : pi.word()) {
    Eigen::MatrixXcd S = pair_s(rho(k), rho(k + 1));
    // 1_{k} ox S ox 1 acting on slots k, k+1
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    const std::size_t left = ipow(D, k), right = ipow(D, n - k - 2);
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t r = 0; r < right; ++r)
        for (std::size_t ab = 0; ab < D * D; ++ab)
          for (std::size_t gd = 0; gd < D * D; ++gd)
            M((l * D * D + ab) * right + r, (l * D * D + gd) * right + r) = S(ab, gd);
    T = T * M;
    rho = rho * Permutation::transposition(n, k);
  }
  return T;
}

}  // namespace

Eigen::MatrixXcd s_tensor_at(const SMatrix& s, const Permutation& pi,
                             const std::vector<double>& thetas) {
  if (thetas.size() != pi.size()) throw std::invalid_argument("s_tensor_at: sizes");
  return s_tensor_from_words(pi.size(), s.dim(), pi,
                             [&](std::size_t a, std::size_t b) {
                               return s.eval(thetas[b] - thetas[a]);
                             });
}

Eigen::MatrixXcd s_tensor_at_points(const SPairCache& sc, const Permutation& pi,
                                    const std::vector<std::size_t>& pts) {
  if (pts.size() != pi.size())
    throw std::invalid_argument("s_tensor_at_points: sizes");
  return s_tensor_from_words(pi.size(), sc.species(), pi,
                             [&](std::size_t a, std::size_t b) {
                               return sc.at(pts[a], pts[b]);
                             });
}

namespace {

// z^dagger acting layer-to-layer: returns the n-slot layer built from the
// (n-1)-slot input, explicit formula with sigma_k = tau_{k-1}...tau_1.
FockLayer zdag_layer(const SPairCache& sc, const GridFunction& phi,
                     const FockLayer& in, std::size_t n) {
  const std::size_t D = sc.species();
  const std::size_t base = sc.grid().size() * D;
  assert(in.slots() + 1 == n);
  // phi ox in
  FockLayer tensor(n, base);
  const std::size_t s0 = tensor.stride(0);
  for (std::size_t v = 0; v < base; ++v) {
    std::complex<double> f = phi.at(v / D, v % D);
    if (f == 0.0) continue;
    for (std::size_t rest = 0; rest < in.size(); ++rest)
      tensor[v * s0 + rest] = f * in[rest];
  }
  FockLayer acc = tensor;  // k = 1 term, sigma_1 = id
  FockLayer cur = tensor;
  for (std::size_t k = 2; k <= n; ++k) {
    // sigma_k = sigma_{k-1} extended by one more transposition on the left:
    // D(sigma_k) X = D(tau_{k-2,0-based}) D(sigma_{k-1}) X
    cur = d_n_transposition(sc, k - 2, cur);
    acc += cur;
  }
  acc *= 1.0 / std::sqrt(double(n));
  return acc;
}

}  // namespace

FockVector z_dagger(const SPairCache& sc, const GridFunction& phi, const FockVector& in) {
  if (!sc.grid().same_as(in.grid()))
    throw std::invalid_argument("z_dagger: grid mismatch");
  FockVector out(in.grid(), in.spectrum(), in.n_max());
  for (std::size_t n = 1; n <= in.n_max(); ++n)
    out.layer(n) = zdag_layer(sc, phi, in.layer(n - 1), n);
  // the (n_max+1)-particle component of the input's top layer is dropped
  if (layer_norm(in.grid(), sc.species(), in.layer(in.n_max())) > 0)
    out.mark_truncated();
  return out;
}

FockVector z_dagger_projected(const SPairCache& sc, const GridFunction& phi,
                              const FockVector& in) {
  FockVector out(in.grid(), in.spectrum(), in.n_max());
  const std::size_t D = sc.species();
  const std::size_t base = in.base();
  for (std::size_t n = 1; n <= in.n_max(); ++n) {
    FockLayer pin = project_pn(sc, in.layer(n - 1));
    FockLayer tensor(n, base);
    const std::size_t s0 = tensor.stride(0);
    for (std::size_t v = 0; v < base; ++v) {
      std::complex<double> f = phi.at(v / D, v % D);
      if (f == 0.0) continue;
      for (std::size_t rest = 0; rest < pin.size(); ++rest)
        tensor[v * s0 + rest] = f * pin[rest];
    }
    tensor *= std::sqrt(double(n));
    out.layer(n) = project_pn(sc, tensor);
  }
  if (layer_norm(in.grid(), D, in.layer(in.n_max())) > 0) out.mark_truncated();
  return out;
}

FockVector z_annihilate(const SPairCache& sc, const GridFunction& phi,
                        const FockVector& in) {
  if (!sc.grid().same_as(in.grid()))
    throw std::invalid_argument("z: grid mismatch");
  const std::size_t D = sc.species();
  FockVector out(in.grid(), in.spectrum(), in.n_max());
  for (std::size_t n = 0; n + 1 <= in.n_max(); ++n) {
    const FockLayer& up = in.layer(n + 1);
    FockLayer& lo = out.layer(n);
    const std::size_t s0 = up.stride(0);
    for (std::size_t v = 0; v < in.base(); ++v) {
      std::complex<double> c = std::sqrt(double(n + 1)) *
                               in.grid().weights[v / D] *
                               std::conj(phi.at(v / D, v % D));
      if (c == 0.0) continue;
      for (std::size_t rest = 0; rest < lo.size(); ++rest)
        lo[rest] += c * up[v * s0 + rest];
    }
  }
  return out;
}

FockLayer z_point(const SPairCache& sc, std::size_t i, std::size_t alpha,
                  const FockLayer& in_upper) {
  const std::size_t D = sc.species();
  const std::size_t n = in_upper.slots() - 1;
  FockLayer out(n, in_upper.base());
  const std::size_t v = i * D + alpha;
  const std::size_t s0 = in_upper.stride(0);
  const double c = std::sqrt(double(n + 1));
  for (std::size_t rest = 0; rest < out.size(); ++rest)
    out[rest] = c * in_upper[v * s0 + rest];
  return out;
}

FockLayer z_dagger_point(const SPairCache& sc, std::size_t i, std::size_t alpha,
                         const FockLayer& in_lower) {
  GridFunction delta(sc.grid(), sc.species());
  delta.at(i, alpha) = 1.0 / sc.grid().weights[i];
  return zdag_layer(sc, delta, in_lower, in_lower.slots() + 1);
}

FockVector apply_number_sqrt(const FockVector& in, double shift) {
  FockVector out = in;
  for (std::size_t n = 0; n <= in.n_max(); ++n)
    out.layer(n) *= std::sqrt(double(n) + shift);
  return out;
}

FockVector pct_J(const FockVector& in) {
  const auto& spec = in.spectrum();
  const std::size_t D = spec.species_count();
  FockVector out(in.grid(), spec, in.n_max());
  for (std::size_t n = 0; n <= in.n_max(); ++n) {
    const FockLayer& a = in.layer(n);
    FockLayer& b = out.layer(n);
    std::vector<std::size_t> slot(n);
    for (std::size_t t = 0; t < a.size(); ++t) {
      std::size_t rem = t;
      for (std::size_t j = 0; j < n; ++j) {
        slot[j] = rem / a.stride(j);
        rem %= a.stride(j);
      }
      std::size_t src = 0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t v = slot[n - 1 - j];
        std::size_t conj_v = (v / D) * D + spec.conjugate(v % D);
        src += conj_v * a.stride(j);
      }
      b[t] = std::conj(a[src]);
    }
  }
  return out;
}

FockVector translate_U(const std::array<double, 2>& a, const FockVector& in) {
  const auto& spec = in.spectrum();
  const std::size_t D = spec.species_count();
  const auto& g = in.grid();
  // one-particle phases e^{i p.a}
  std::vector<std::complex<double>> ph(in.base());
  for (std::size_t v = 0; v < in.base(); ++v) {
    double m = spec.mass(v % D), th = g.points[v / D];
    double pa = m * (std::cosh(th) * a[0] - std::sinh(th) * a[1]);
    ph[v] = std::exp(std::complex<double>(0.0, pa));
  }
  FockVector out = in;
  for (std::size_t n = 1; n <= in.n_max(); ++n) {
    FockLayer& l = out.layer(n);
    for (std::size_t t = 0; t < l.size(); ++t) {
      std::size_t rem = t;
      std::complex<double> c = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        c *= ph[rem / l.stride(j)];
        rem %= l.stride(j);
      }
      l[t] *= c;
    }
  }
  return out;
}

ExchangeResiduals check_exchange_relations(const SPairCache& sc,
                                           const GridFunction& phi,
                                           const GridFunction& psi,
                                           const FockVector& Psi) {
  const std::size_t D = sc.species();
  const std::size_t G = sc.grid().size();
  const auto& w = sc.grid().weights;
  ExchangeResiduals res;

  auto apply_z_pt = [&](std::size_t i, std::size_t al, const FockVector& v) {
    FockVector out(v.grid(), v.spectrum(), v.n_max());
    for (std::size_t n = 0; n + 1 <= v.n_max(); ++n)
      out.layer(n) = z_point(sc, i, al, v.layer(n + 1));
    return out;
  };
  auto apply_zd_pt = [&](std::size_t j, std::size_t be, const FockVector& v) {
    FockVector out(v.grid(), v.spectrum(), v.n_max());
    for (std::size_t n = 1; n <= v.n_max(); ++n)
      out.layer(n) = z_dagger_point(sc, j, be, v.layer(n - 1));
    return out;
  };

  // relation 1: z(phi) z(psi) = twisted double sum of z z
  {
    FockVector lhs = z_annihilate(sc, phi, z_annihilate(sc, psi, Psi));
    FockVector rhs(Psi.grid(), Psi.spectrum(), Psi.n_max());
    for (std::size_t i = 0; i < G; ++i)
      for (std::size_t al = 0; al < D; ++al)
        for (std::size_t de = 0; de < D; ++de) {
          FockVector zi = apply_z_pt(i, de, Psi);
          for (std::size_t j = 0; j < G; ++j) {
            const Eigen::MatrixXcd& S = sc.at(j, i);  // S(theta_i - theta_j)
            for (std::size_t be = 0; be < D; ++be)
              for (std::size_t ga = 0; ga < D; ++ga) {
                std::complex<double> c = w[i] * w[j] *
                                         std::conj(phi.at(i, al)) *
                                         std::conj(psi.at(j, be)) *
                                         S(be * D + al, de * D + ga);
                if (c == 0.0) continue;
                FockVector t = apply_z_pt(j, ga, zi);
                t *= c;
                rhs += t;
              }
          }
        }
    lhs -= rhs;
    res.zz = lhs.norm();
  }

  // relation 2: zd(phi) zd(psi) = twisted double sum of zd zd
  {
    FockVector lhs = z_dagger(sc, phi, z_dagger(sc, psi, Psi));
    FockVector rhs(Psi.grid(), Psi.spectrum(), Psi.n_max());
    for (std::size_t i = 0; i < G; ++i)
      for (std::size_t al = 0; al < D; ++al)
        for (std::size_t de = 0; de < D; ++de) {
          FockVector zi = apply_zd_pt(i, de, Psi);
          for (std::size_t j = 0; j < G; ++j) {
            const Eigen::MatrixXcd& S = sc.at(j, i);  // S(theta_i - theta_j)
            for (std::size_t be = 0; be < D; ++be)
              for (std::size_t ga = 0; ga < D; ++ga) {
                std::complex<double> c = w[i] * w[j] * phi.at(i, al) *
                                         psi.at(j, be) * S(ga * D + de, al * D + be);
                if (c == 0.0) continue;
                FockVector t = apply_zd_pt(j, ga, zi);
                t *= c;
                rhs += t;
              }
          }
        }
    lhs -= rhs;
    res.zdzd = lhs.norm();
  }

  // relation 3: z(phi) zd(psi) = twisted zd z + <phi,psi> 1
  {
    FockVector lhs = z_annihilate(sc, phi, z_dagger(sc, psi, Psi));
    FockVector rhs = Psi;
    rhs *= inner(phi, psi);
    for (std::size_t i = 0; i < G; ++i)
      for (std::size_t al = 0; al < D; ++al)
        for (std::size_t de = 0; de < D; ++de) {
          FockVector zi = apply_z_pt(i, de, Psi);
          for (std::size_t j = 0; j < G; ++j) {
            const Eigen::MatrixXcd& S = sc.at(i, j);  // S(theta_j - theta_i)
            for (std::size_t be = 0; be < D; ++be)
              for (std::size_t ga = 0; ga < D; ++ga) {
                std::complex<double> c = w[i] * w[j] *
                                         std::conj(phi.at(i, al)) *
                                         psi.at(j, be) * S(al * D + ga, be * D + de);
                if (c == 0.0) continue;
                FockVector t = apply_zd_pt(j, ga, zi);
                t *= c;
                rhs += t;
              }
          }
        }
    lhs -= rhs;
    res.mixed = lhs.norm();
  }
  return res;
}

NumberBoundPair number_bound_check(const SPairCache& sc, const GridFunction& phi,
                                   const FockVector& Psi) {
  NumberBoundPair r;
  r.lhs_z = z_annihilate(sc, phi, Psi).norm();
  r.rhs_z = phi.norm() * apply_number_sqrt(Psi, 0.0).norm();
  r.lhs_zd = z_dagger(sc, phi, Psi).norm();
  r.rhs_zd = phi.norm() * apply_number_sqrt(Psi, 1.0).norm();
  return r;
}

double check_intertwining(const SMatrix& s, const RapidityGrid& grid,
                          const FockLayer& psi) {
  if (s.dim() != 1)
    throw std::invalid_argument("check_intertwining: scalar S only");
  const std::size_t n = psi.slots();
  if (n < 2) return 0.0;
  SPairCache sc(s, grid);

  // I_n multiplication at each grid tuple
  PhaseShiftTable delta = phase_shift_on_differences(s, grid);
  auto apply_In = [&](const FockLayer& in) {
    FockLayer out = in;
    std::vector<std::size_t> pt(n);
    for (std::size_t t = 0; t < in.size(); ++t) {
      std::size_t rem = t;
      for (std::size_t j = 0; j < n; ++j) {
        pt[j] = rem / in.stride(j);
        rem %= in.stride(j);
      }
      std::complex<double> c = 1.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l)
          c *= -std::exp(std::complex<double>(
              0.0, delta(grid.points[pt[k]] - grid.points[pt[l]])));
      out[t] *= c;
    }
    return out;
  };

  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    FockLayer a = apply_In(d_n_transposition(sc, k, psi));
    FockLayer b = d_n_free(1, -1, Permutation::transposition(n, k), apply_In(psi));
    a -= b;
    worst = std::max(worst, layer_norm(grid, 1, a));
  }
  return worst;
}

}  // namespace iqft
