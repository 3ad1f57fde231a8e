#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iqft/contracted.hpp"
#include "iqft/contraction.hpp"

using namespace iqft;

TEST_CASE("sector (n, 0) holds exactly the empty contraction") {
  for (std::size_t n : {1u, 3u, 6u}) {
    auto cs = enumerate_contractions(n, 0);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].length() == 0);
    auto ct = enumerate_contractions(n, n);
    REQUIRE(ct.size() == 1);
  }
}

TEST_CASE("(4,2) has 7 contractions: 1 empty, 4 singles, 2 doubles") {
  auto cs = enumerate_contractions(4, 2);
  CHECK(cs.size() == 7);
  std::size_t by_len[3] = {0, 0, 0};
  for (const auto& c : cs) by_len[c.length()]++;
  CHECK(by_len[0] == 1);
  CHECK(by_len[1] == 4);
  CHECK(by_len[2] == 2);
}

TEST_CASE("counts match the closed form for all n <= 9") {
  for (std::size_t n = 0; n <= 9; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      CHECK(enumerate_contractions(n, k).size() == contraction_count_total(n, k));
}

TEST_CASE("pi examples from the normal forms") {
  SUBCASE("empty contraction gives identities") {
    Contraction c{4, 2, {}, {}};
    CHECK(pi_rho(c).is_identity());
    CHECK(pi_lambda(c).is_identity());
  }
  SUBCASE("n=4, k=2, C = {(3,1)}") {
    Contraction c{4, 2, {1}, {3}};
    CHECK(pi_rho(c) == pi_move(4, 1, 2));
    CHECK(pi_lambda(c).is_identity());
  }
  SUBCASE("moving permutations in one-line form") {
    CHECK(pi_move(3, 1, 1).is_identity());
    CHECK(pi_move(3, 1, 3) == Permutation({1, 2, 0}));  // (2,3,1) 1-based
    CHECK(pi_move(3, 3, 1) == Permutation({2, 0, 1}));  // (3,1,2) 1-based
  }
}

TEST_CASE("word and two-line forms agree for every contraction with n <= 7") {
  for (std::size_t n = 0; n <= 7; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& c : enumerate_contractions(n, k)) {
        CHECK_NOTHROW(pi_rho(c));   // throws on mismatch
        CHECK_NOTHROW(pi_lambda(c));
      }
}

TEST_CASE("pi_rho and pi_lambda commute (exhaustive n <= 7, sampled n = 9)") {
  for (std::size_t n = 0; n <= 7; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& c : enumerate_contractions(n, k)) CHECK(verify_commutation(c));

  std::mt19937_64 rng(5);
  auto cs = enumerate_contractions(9, 4);
  std::uniform_int_distribution<std::size_t> pick(0, cs.size() - 1);
  for (int i = 0; i < 50; ++i) CHECK(verify_commutation(cs[pick(rng)]));
}

TEST_CASE("extension lemma, right index") {
  SUBCASE("exhaustive n <= 7") {
    for (std::size_t n = 1; n <= 7; ++n)
      for (std::size_t k = 0; k + 1 <= n; ++k)
        for (const auto& c : enumerate_contractions(n, k)) {
          if (c.contracts_left(k + 1)) continue;
          for (std::size_t r = 1; r <= k; ++r) {
            if (c.contracts_right(r)) continue;
            CHECK(verify_extension_right(c, r));
          }
        }
  }
  SUBCASE("spot case (5,2)") {
    Contraction c{5, 2, {2}, {4}};
    CHECK(verify_extension_right(c, 1));
  }
  SUBCASE("|C| = 0 reduces to two moving permutations") {
    Contraction c{5, 3, {}, {}};
    for (std::size_t r = 1; r <= 3; ++r) {
      Contraction cp = c.extended_right(r);
      CHECK(pi_c(cp) == pi_move(5, r, 3) * pi_move(5, 4, 4));
    }
  }
}

TEST_CASE("extension lemma, left index") {
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::size_t kp1 = 1; kp1 <= n; ++kp1)
      for (const auto& ct : enumerate_contractions(n, kp1)) {
        if (ct.contracts_right(kp1)) continue;
        for (std::size_t l = kp1 + 1; l <= n; ++l) {
          if (ct.contracts_left(l)) continue;
          CHECK(verify_extension_left(ct, l));
        }
      }
}

TEST_CASE("contraction sum bound") {
  SUBCASE("(1,0): lhs 1 <= 2") {
    auto b = contraction_sum_bound(1, 0);
    CHECK(b.lhs == doctest::Approx(1.0));
    CHECK(b.rhs == doctest::Approx(2.0));
  }
  SUBCASE("(4,2): 2 + 4 + 2 = 8") {
    auto b = contraction_sum_bound(4, 2);
    CHECK(b.lhs == doctest::Approx(8.0));
    CHECK(b.rhs == doctest::Approx(16.0 * std::sqrt(24.0)));
  }
  SUBCASE("holds for all n <= 10") {
    for (std::size_t n = 0; n <= 10; ++n)
      for (std::size_t k = 0; k <= n; ++k) {
        auto b = contraction_sum_bound(n, k);
        CHECK(b.lhs <= b.rhs);
      }
  }
}

TEST_CASE("tensor factorization of pi_C") {
  SUBCASE("empty contraction: all identity") {
    SMatrix s = SMatrix::sinh_gordon(1.0, 4 * 3.14159265358979323846);
    Contraction c{3, 1, {}, {}};
    CHECK(s_tensor_factorization_residual(s, c, {0.3, -0.7, 1.9}) < 1e-15);
  }
  SUBCASE("scalar S, n = 3, single pair") {
    SMatrix s = SMatrix::sinh_gordon(1.0, 4 * 3.14159265358979323846);
    Contraction c{3, 1, {1}, {3}};
    CHECK(s_tensor_factorization_residual(s, c, {0.3, -0.7, 1.9}) < 1e-12);
  }
  SUBCASE("o(3), all contractions at n = 4, random points") {
    SMatrix s = SMatrix::o_n(3, 1.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> th(-2.0, 2.0);
    for (std::size_t k = 1; k <= 3; ++k)
      for (const auto& c : enumerate_contractions(4, k)) {
        std::vector<double> pts{th(rng), th(rng), th(rng), th(rng)};
        CHECK(s_tensor_factorization_residual(s, c, pts) < 1e-10);
      }
  }
}

TEST_CASE("hat and check subsets partition every sector") {
  // membership by the literal index conditions of the lemmas
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 0; k + 1 <= n; ++k)
      for (const auto& c : enumerate_contractions(n, k)) {
        bool hat = !c.contracts_left(k + 1);
        bool check = c.contracts_left(k + 1);
        CHECK(hat != check);
      }
}
