#pragma once

#include <cstddef>
#include <vector>

namespace iqft {

// Permutation of {0,...,n-1} in one-line form together with word machinery
// over adjacent transpositions tau_k (swapping k and k+1, 0-based k).
// Products compose as functions: (p*q)(x) = p(q(x)); in a word the
// rightmost letter acts first.
class Permutation {
 public:
  explicit Permutation(std::size_t n);               // identity
  explicit Permutation(std::vector<std::size_t> one_line);

  static Permutation transposition(std::size_t n, std::size_t k);  // tau_k
  // Ordered word prod_i tau_{word[i]} (word[0] leftmost).
  static Permutation from_word(std::size_t n, const std::vector<std::size_t>& word);

  std::size_t size() const { return img_.size(); }
  std::size_t operator()(std::size_t x) const { return img_[x]; }
  const std::vector<std::size_t>& one_line() const { return img_; }

  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  bool operator==(const Permutation& rhs) const { return img_ == rhs.img_; }

  int parity_sign() const;  // +1 even, -1 odd
  bool is_identity() const;

  // Adjacent-transposition word multiplying (left to right) to *this.
  std::vector<std::size_t> word() const;

  static std::vector<Permutation> all(std::size_t n);  // lexicographic

 private:
  std::vector<std::size_t> img_;
};

// pi_a^b: the permutation moving element a to position b (1-based a, b as in
// the two-line normal form; this API is 0-based).
Permutation move_permutation(std::size_t n, std::size_t a, std::size_t b);

}  // namespace iqft
