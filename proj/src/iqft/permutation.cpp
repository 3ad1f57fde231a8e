#include "iqft/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace iqft {

Permutation::Permutation(std::size_t n) : img_(n) {
  std::iota(img_.begin(), img_.end(), std::size_t(0));
}

Permutation::Permutation(std::vector<std::size_t> one_line) : img_(std::move(one_line)) {
  std::vector<bool> seen(img_.size(), false);
  for (auto v : img_) {
    if (v >= img_.size() || seen[v])
      throw std::invalid_argument("permutation: invalid one-line form");
    seen[v] = true;
  }
}

Permutation Permutation::transposition(std::size_t n, std::size_t k) {
  if (k + 1 >= n) throw std::invalid_argument("transposition index out of range");
  Permutation p(n);
  std::swap(p.img_[k], p.img_[k + 1]);
  return p;
}

Permutation Permutation::from_word(std::size_t n, const std::vector<std::size_t>& word) {
  // rightmost letter acts first
  Permutation p(n);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it + 1 >= n) throw std::invalid_argument("word letter out of range");
    // p <- tau_k * p : postcompose with tau_k means swapping the VALUES k,k+1
    for (auto& v : p.img_) {
      if (v == *it) v = *it + 1;
      else if (v == *it + 1) v = *it;
    }
  }
  return p;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (size() != rhs.size()) throw std::invalid_argument("permutation size mismatch");
  Permutation r(size());
  for (std::size_t x = 0; x < size(); ++x) r.img_[x] = img_[rhs.img_[x]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r(size());
  for (std::size_t x = 0; x < size(); ++x) r.img_[img_[x]] = x;
  return r;
}

int Permutation::parity_sign() const {
  int s = 1;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (img_[i] > img_[j]) s = -s;
  return s;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

std::vector<std::size_t> Permutation::word() const {
  // bubble-sort the one-line form to the identity; the recorded swaps,
  // reversed, multiply left-to-right to *this
  std::vector<std::size_t> arr = img_;
  std::vector<std::size_t> swaps;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < arr.size(); ++i) {
      if (arr[i] > arr[i + 1]) {
        std::swap(arr[i], arr[i + 1]);
        swaps.push_back(i);
        moved = true;
      }
    }
  }
  std::reverse(swaps.begin(), swaps.end());
  return swaps;
}

std::vector<Permutation> Permutation::all(std::size_t n) {
  std::vector<std::size_t> arr(n);
  std::iota(arr.begin(), arr.end(), std::size_t(0));
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(arr));
  } while (std::next_permutation(arr.begin(), arr.end()));
  return out;
}

Permutation move_permutation(std::size_t n, std::size_t a, std::size_t b) {
  if (a >= n || b >= n) throw std::invalid_argument("move permutation out of range");
  std::vector<std::size_t> word;
  if (a < b)
    for (std::size_t j = a; j < b; ++j) word.push_back(j);
  else
    for (std::size_t j = a; j-- > b;) word.push_back(j);
  return Permutation::from_word(n, word);
}

}  // namespace iqft
