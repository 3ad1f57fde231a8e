#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iqft/contracted.hpp"

using namespace iqft;

namespace {
const double kPi = 3.14159265358979323846;

RapidityGrid grid8() { return RapidityGrid::uniform(-4.0, 4.0, 8); }

GridFunction random_fn(const RapidityGrid& g, std::size_t D, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  GridFunction f(g, D);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t a = 0; a < D; ++a) f.at(i, a) = Complex(nd(rng), nd(rng));
  return f;
}

// sqrt(n!) <P_n tensor(f), layer>_w with the linear (unconjugated) pairing
Complex linear_pairing(const SPairCache& sc, const std::vector<GridFunction>& fs,
                       const FockLayer& layer) {
  const std::size_t n = fs.size(), D = sc.species();
  const auto& g = sc.grid();
  Complex acc = 0;
  for (std::size_t t = 0; t < layer.size(); ++t) {
    Complex fp = 1.0;
    double w = 1.0;
    std::size_t rem = t;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t v = rem / layer.stride(j);
      rem %= layer.stride(j);
      fp *= fs[j].at(v / D, v % D);
      w *= g.weights[v / D];
    }
    acc += w * fp * layer[t];
  }
  return acc;
}

}  // namespace

TEST_CASE("k = 0 sector reproduces sqrt(n!) (A Omega)_n") {
  std::mt19937_64 rng(3);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  for (std::size_t n : {1u, 2u, 3u}) {
    TruncatedOperator A = TruncatedOperator::random(8, n, rng);
    std::vector<GridFunction> fs;
    for (std::size_t j = 0; j < n; ++j) fs.push_back(random_fn(g, 1, rng));
    Complex route = fully_contracted_element(sc, A, n, 0, fs);
    // direct: sqrt(n!) * linear pairing with P_n (A Omega)_n
    FockVector omega = FockVector::vacuum(g, s.spectrum(), n);
    FockVector aom = A.apply(omega);
    FockLayer proj = project_pn(sc, aom.layer(n));
    double fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= double(i);
    Complex want = std::sqrt(fact) * linear_pairing(sc, fs, proj);
    CHECK(std::abs(route - want) < 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("k = n sector reproduces sqrt(n!) (J A* Omega)_n") {
  std::mt19937_64 rng(5);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  const std::size_t n = 2;
  TruncatedOperator A = TruncatedOperator::random(8, n, rng);
  std::vector<GridFunction> fs{random_fn(g, 1, rng), random_fn(g, 1, rng)};
  Complex route = fully_contracted_element(sc, A, n, n, fs);

  // adjoint blocks in the weighted inner product: A^+ = W^{-1} A^dag W
  TruncatedOperator Adag(8, n);
  for (std::size_t to = 0; to <= n; ++to)
    for (std::size_t from = 0; from <= n; ++from) {
      Eigen::MatrixXcd blk = A.block(from, to).adjoint();
      // weights
      for (Eigen::Index r = 0; r < blk.rows(); ++r)
        for (Eigen::Index c = 0; c < blk.cols(); ++c) {
          // row tuple weight and column tuple weight
          double wr = 1, wc = 1;
          std::size_t rem = std::size_t(r);
          for (std::size_t j = 0; j < to; ++j) {
            std::size_t st = 1;
            for (std::size_t u = j + 1; u < to; ++u) st *= 8;
            wr *= g.weights[(rem / st) % 8];
            rem %= st;
          }
          rem = std::size_t(c);
          for (std::size_t j = 0; j < from; ++j) {
            std::size_t st = 1;
            for (std::size_t u = j + 1; u < from; ++u) st *= 8;
            wc *= g.weights[(rem / st) % 8];
            rem %= st;
          }
          blk(r, c) *= wc / wr;
        }
      Adag.block(to, from) = blk;
    }
  FockVector omega = FockVector::vacuum(g, s.spectrum(), n);
  FockVector astar_om = Adag.apply(omega);
  FockLayer proj = project_pn(sc, astar_om.layer(n));
  // J: reverse slots and conjugate
  FockLayer jproj(n, 8);
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) jproj[a * 8 + b] = std::conj(proj[b * 8 + a]);
  Complex want = std::sqrt(2.0) * linear_pairing(sc, fs, jproj);
  CHECK(std::abs(route - want) < 1e-10 * std::max(1.0, std::abs(want)));
}

TEST_CASE("n = 4 edge sectors on sparse operators") {
  // the k = 0 and k = n sectors run at n = 4 on the default grid when the
  // operator only populates the blocks the states actually reach
  std::mt19937_64 rng(29);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  const std::size_t n = 4;
  TruncatedOperator A(8, n);
  std::normal_distribution<double> nd;
  {
    auto& col = A.block(n, 0);
    for (Eigen::Index i = 0; i < col.rows(); ++i) col(i, 0) = Complex(nd(rng), nd(rng));
    auto& row = A.block(0, n);
    for (Eigen::Index j = 0; j < row.cols(); ++j) row(0, j) = Complex(nd(rng), nd(rng));
    A.block(0, 0)(0, 0) = Complex(nd(rng), nd(rng));
  }
  std::vector<GridFunction> fs;
  for (std::size_t j = 0; j < n; ++j) fs.push_back(random_fn(g, 1, rng));

  // k = 0: sqrt(n!) (A Omega)_n
  Complex route = fully_contracted_element(sc, A, n, 0, fs);
  FockVector omega = FockVector::vacuum(g, s.spectrum(), n);
  FockLayer proj = project_pn(sc, A.apply(omega).layer(n));
  Complex want = std::sqrt(24.0) * linear_pairing(sc, fs, proj);
  CHECK(std::abs(route - want) < 1e-10 * std::max(1.0, std::abs(want)));

  // k = n: sqrt(n!) (J A* Omega)_n via the adjoint of the row block
  Complex route_n = fully_contracted_element(sc, A, n, n, fs);
  FockLayer astar(n, 8);
  for (std::size_t t = 0; t < astar.size(); ++t) {
    // weighted adjoint of the (0, n) block applied to the vacuum
    double w = 1.0;
    std::size_t rem = t;
    for (std::size_t j = 0; j < n; ++j) {
      w *= g.weights[(rem / astar.stride(j)) % 8];
      rem %= astar.stride(j);
    }
    astar[t] = std::conj(A.block(0, n)(0, Eigen::Index(t))) / w;
  }
  FockLayer projn = project_pn(sc, astar);
  FockLayer jproj(n, 8);
  for (std::size_t t = 0; t < jproj.size(); ++t) {
    std::size_t rem = t, src = 0;
    std::vector<std::size_t> dig(n);
    for (std::size_t j = 0; j < n; ++j) {
      dig[j] = rem / jproj.stride(j);
      rem %= jproj.stride(j);
    }
    for (std::size_t j = 0; j < n; ++j) src += dig[n - 1 - j] * jproj.stride(j);
    jproj[t] = std::conj(projn[src]);
  }
  Complex want_n = std::sqrt(24.0) * linear_pairing(sc, fs, jproj);
  CHECK(std::abs(route_n - want_n) < 1e-10 * std::max(1.0, std::abs(want_n)));
}

TEST_CASE("single-contraction Cauchy-Schwarz bound") {
  std::mt19937_64 rng(7);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  const std::size_t n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    TruncatedOperator A = TruncatedOperator::random(8, n, rng);
    double anorm = A.weighted_norm(g, 1);
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& c : enumerate_contractions(n, k)) {
        std::vector<GridFunction> lf, rf;
        double fnorm = 1.0;
        for (std::size_t j = 0; j < n - k - c.length(); ++j) {
          lf.push_back(random_fn(g, 1, rng));
          fnorm *= lf.back().norm();
        }
        for (std::size_t j = 0; j < k - c.length(); ++j) {
          rf.push_back(random_fn(g, 1, rng));
          fnorm *= rf.back().norm();
        }
        Complex val = contracted_matrix_element(sc, A, c, lf, rf);
        double fl = 1, fr = 1;
        for (std::size_t i = 2; i <= n - k - c.length(); ++i) fl *= double(i);
        for (std::size_t i = 2; i <= k - c.length(); ++i) fr *= double(i);
        CHECK(std::abs(val) <= std::sqrt(fl * fr) * fnorm * anorm * (1 + 1e-10));
      }
  }
}

TEST_CASE("identity operator pairing example") {
  // A = identity, n = 2, k = 1, C empty: <z+(f2) Omega, z+(conj slot f1) Omega>
  std::mt19937_64 rng(11);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  TruncatedOperator A = TruncatedOperator::identity(8, 2);
  GridFunction f1 = random_fn(g, 1, rng), f2 = random_fn(g, 1, rng);
  Contraction c{2, 1, {}, {}};
  Complex val = contracted_matrix_element(sc, A, c, {f2}, {f1});
  // one-particle states: <conj f2, conj f1>_w with the linear smearing
  Complex want = 0;
  for (std::size_t i = 0; i < 8; ++i)
    want += g.weights[i] * f2.at(i, 0) * f1.at(i, 0);
  CHECK(std::abs(val - want) < 1e-12);
}

TEST_CASE("estimate3 bound on seeded random operators") {
  std::mt19937_64 rng(13);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  const std::size_t n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    TruncatedOperator A = TruncatedOperator::random(8, n, rng);
    double anorm = A.weighted_norm(g, 1);
    std::vector<GridFunction> fs;
    double fnorm = 1;
    for (std::size_t j = 0; j < n; ++j) {
      fs.push_back(random_fn(g, 1, rng));
      fnorm *= fs.back().norm();
    }
    double fact = 6.0;  // 3!
    for (std::size_t k = 0; k <= n; ++k) {
      Complex val = fully_contracted_element(sc, A, n, k, fs);
      CHECK(std::abs(val) <=
            std::pow(2.0, double(n)) * std::sqrt(fact) * anorm * fnorm * (1 + 1e-10));
    }
  }
}

TEST_CASE("rewri dual route agreement, scalar") {
  std::mt19937_64 rng(17);
  SMatrix s = SMatrix::sinh_gordon(1.0, 4 * kPi);
  RapidityGrid g = grid8();
  SPairCache sc(s, g);
  for (std::size_t n : {2u, 3u}) {
    for (int trial = 0; trial < 3; ++trial) {
      TruncatedOperator A = TruncatedOperator::random(8, n, rng);
      std::vector<GridFunction> fs;
      for (std::size_t j = 0; j < n; ++j) fs.push_back(random_fn(g, 1, rng));
      for (std::size_t k = 0; k < n; ++k) {
        Complex a = fully_contracted_element(sc, A, n, k, fs);
        Complex b = fully_contracted_element_rewri(sc, A, n, k, fs);
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("rewri dual route agreement, diagonal D = 2 at n = 2") {
  std::mt19937_64 rng(19);
  std::vector<std::vector<ScalarAmplitude>> om(2, std::vector<ScalarAmplitude>(2));
  om[0][0] = sinh_gordon_amplitude(4 * kPi);
  om[0][1] = om[1][0] = sinh_gordon_amplitude(2.0);
  om[1][1] = sinh_gordon_amplitude(7.0);
  SMatrix s = SMatrix::diagonal(ParticleSpectrum::neutral(2, 1.0), om);
  RapidityGrid g = RapidityGrid::uniform(-3.0, 3.0, 4);
  SPairCache sc(s, g);
  const std::size_t n = 2;
  TruncatedOperator A = TruncatedOperator::random(8, n, rng);
  std::vector<GridFunction> fs{random_fn(g, 2, rng), random_fn(g, 2, rng)};
  for (std::size_t k = 0; k < n; ++k) {
    Complex a = fully_contracted_element(sc, A, n, k, fs);
    Complex b = fully_contracted_element_rewri(sc, A, n, k, fs);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
  }
}
