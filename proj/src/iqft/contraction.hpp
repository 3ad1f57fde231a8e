#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iqft/permutation.hpp"

namespace iqft {

// Contraction C in sector (n, k): ordered right indices r_1 < ... < r_|C|
// in {1..k} paired with pairwise distinct left indices l_1,...,l_|C| in
// {k+1..n} (the order of ls encodes the pairing). Indices are 1-based as in
// the source text; the associated permutations act 0-based.
struct Contraction {
  std::size_t n = 0, k = 0;
  std::vector<std::size_t> rs;  // strictly increasing
  std::vector<std::size_t> ls;  // distinct, order significant

  std::size_t length() const { return rs.size(); }
  void validate() const;

  bool contracts_left(std::size_t slot) const;   // slot among ls?
  bool contracts_right(std::size_t slot) const;  // slot among rs?

  // card{r_i < r}
  std::size_t v_r(std::size_t r) const;
  // card{l_i > l}
  std::size_t u_l(std::size_t l) const;

  // C' = C u {(k+1, r)}: inserts r into rs (sorted) and k+1 into ls at the
  // paired position v_r + 1
  Contraction extended_right(std::size_t r) const;
  // C'' = {(l, k+1)} u C~ for C~ in sector (n, k+1): appends (l, k+1)
  Contraction extended_left(std::size_t l) const;
};

// all contractions of sector (n,k), lexicographic by (|C|, rs, ls); n <= 12
std::vector<Contraction> enumerate_contractions(std::size_t n, std::size_t k);

// closed-form count per length: |C|! C(k,|C|) C(n-k,|C|)
std::uint64_t contraction_count(std::size_t n, std::size_t k, std::size_t len);
std::uint64_t contraction_count_total(std::size_t n, std::size_t k);

// pi_rho / pi_lambda in both the transposition-word and the two-line form;
// the two constructions are verified equal (throws on mismatch).
Permutation pi_rho(const Contraction& c);
Permutation pi_lambda(const Contraction& c);
Permutation pi_c(const Contraction& c);  // pi_rho * pi_lambda

// two-line normal forms used as the independent construction
Permutation pi_rho_two_line(const Contraction& c);
Permutation pi_lambda_two_line(const Contraction& c);

// pi_a^b with 1-based a, b
Permutation pi_move(std::size_t n, std::size_t a, std::size_t b);

// Lemma checks (exact permutation equalities)
bool verify_commutation(const Contraction& c);
bool verify_extension_right(const Contraction& c, std::size_t r);
bool verify_extension_left(const Contraction& c_tilde, std::size_t l);

// lhs = sum_C sqrt((n-k-|C|)! (k-|C|)!), rhs = 2^n sqrt(n!)
struct SumBound {
  double lhs, rhs;
};
SumBound contraction_sum_bound(std::size_t n, std::size_t k);

}  // namespace iqft
