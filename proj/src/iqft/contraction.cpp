#include "iqft/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqft {

void Contraction::validate() const {
  if (k > n) throw std::invalid_argument("contraction: k > n");
  if (rs.size() != ls.size()) throw std::invalid_argument("contraction: pair count");
  if (rs.size() > std::min(k, n - k))
    throw std::invalid_argument("contraction: too many pairs");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] < 1 || rs[i] > k) throw std::invalid_argument("contraction: r range");
    if (i && rs[i] <= rs[i - 1]) throw std::invalid_argument("contraction: rs not increasing");
    if (ls[i] < k + 1 || ls[i] > n) throw std::invalid_argument("contraction: l range");
    for (std::size_t j = 0; j < i; ++j)
      if (ls[j] == ls[i]) throw std::invalid_argument("contraction: ls not distinct");
  }
}

bool Contraction::contracts_left(std::size_t slot) const {
  return std::find(ls.begin(), ls.end(), slot) != ls.end();
}

bool Contraction::contracts_right(std::size_t slot) const {
  return std::find(rs.begin(), rs.end(), slot) != rs.end();
}

std::size_t Contraction::v_r(std::size_t r) const {
  std::size_t c = 0;
  for (auto ri : rs)
    if (ri < r) ++c;
  return c;
}

std::size_t Contraction::u_l(std::size_t l) const {
  std::size_t c = 0;
  for (auto li : ls)
    if (li > l) ++c;
  return c;
}

Contraction Contraction::extended_right(std::size_t r) const {
  if (contracts_right(r)) throw std::invalid_argument("extend right: r already used");
  if (contracts_left(k + 1)) throw std::invalid_argument("extend right: k+1 contracted");
  Contraction c = *this;
  std::size_t pos = v_r(r);
  c.rs.insert(c.rs.begin() + std::ptrdiff_t(pos), r);
  c.ls.insert(c.ls.begin() + std::ptrdiff_t(pos), k + 1);
  c.validate();
  return c;
}

Contraction Contraction::extended_left(std::size_t l) const {
  if (contracts_left(l)) throw std::invalid_argument("extend left: l already used");
  if (contracts_right(k)) throw std::invalid_argument("extend left: k+1 contracted as right");
  Contraction c = *this;
  c.rs.push_back(k);  // here *this lives in sector (n, k) with k = k'+1; see caller
  c.ls.push_back(l);
  c.validate();
  return c;
}

std::vector<Contraction> enumerate_contractions(std::size_t n, std::size_t k) {
  if (k > n || n > 12) throw std::invalid_argument("enumerate_contractions: sector");
  std::vector<Contraction> out;
  const std::size_t maxlen = std::min(k, n - k);

  std::vector<std::size_t> rsel, lsel;
  std::vector<bool> lused(n + 1, false);

  // choose rs (increasing) then ordered ls
  auto rec_l = [&](auto&& self, std::size_t depth) -> void {
    if (depth == rsel.size()) {
      Contraction c;
      c.n = n;
      c.k = k;
      c.rs = rsel;
      c.ls = lsel;
      out.push_back(std::move(c));
      return;
    }
    for (std::size_t l = k + 1; l <= n; ++l) {
      if (lused[l]) continue;
      lused[l] = true;
      lsel.push_back(l);
      self(self, depth + 1);
      lsel.pop_back();
      lused[l] = false;
    }
  };
  auto rec_r = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    if (remaining == 0) {
      rec_l(rec_l, 0);
      return;
    }
    for (std::size_t r = start; r + remaining <= k + 1; ++r) {
      rsel.push_back(r);
      self(self, r + 1, remaining - 1);
      rsel.pop_back();
    }
  };
  for (std::size_t len = 0; len <= maxlen; ++len) rec_r(rec_r, 1, len);
  return out;
}

std::uint64_t contraction_count(std::size_t n, std::size_t k, std::size_t len) {
  if (len > std::min(k, n - k)) return 0;
  auto binom = [](std::size_t a, std::size_t b) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= len; ++i) f *= i;
  return f * binom(k, len) * binom(n - k, len);
}

std::uint64_t contraction_count_total(std::size_t n, std::size_t k) {
  std::uint64_t t = 0;
  for (std::size_t len = 0; len <= std::min(k, n - k); ++len)
    t += contraction_count(n, k, len);
  return t;
}

Permutation pi_move(std::size_t n, std::size_t a, std::size_t b) {
  return move_permutation(n, a - 1, b - 1);
}

namespace {

Permutation pi_rho_word(const Contraction& c) {
  // prod_i tau_{r_i - i + 1} ... tau_{k - i}  (1-based letters, ascending)
  std::vector<std::size_t> word;
  for (std::size_t i = 1; i <= c.length(); ++i)
    for (std::size_t j = c.rs[i - 1] - i + 1; j + i <= c.k; ++j)
      word.push_back(j - 1);  // 0-based letter
  return Permutation::from_word(c.n, word);
}

Permutation pi_lambda_word(const Contraction& c) {
  // prod_i tau_{l_i + u_i - 1} ... tau_{k + i}  (descending letters)
  std::vector<std::size_t> word;
  for (std::size_t i = 1; i <= c.length(); ++i) {
    std::size_t li = c.ls[i - 1];
    // u_i = card{l_j > l_i : j < i}
    std::size_t ui = 0;
    for (std::size_t j = 0; j + 1 < i; ++j)
      if (c.ls[j] > li) ++ui;
    for (std::size_t jj = li + ui; jj-- > c.k + i;) word.push_back(jj - 1);
  }
  return Permutation::from_word(c.n, word);
}

}  // namespace

Permutation pi_rho_two_line(const Contraction& c) {
  // bottom row: free right ascending, r_{|C|},...,r_1, then k+1..n
  std::vector<std::size_t> img;
  for (std::size_t j = 1; j <= c.k; ++j)
    if (!c.contracts_right(j)) img.push_back(j - 1);
  for (std::size_t i = c.length(); i-- > 0;) img.push_back(c.rs[i] - 1);
  for (std::size_t j = c.k + 1; j <= c.n; ++j) img.push_back(j - 1);
  return Permutation(img);
}

Permutation pi_lambda_two_line(const Contraction& c) {
  // bottom row: 1..k, l_1,...,l_{|C|}, then free left ascending
  std::vector<std::size_t> img;
  for (std::size_t j = 1; j <= c.k; ++j) img.push_back(j - 1);
  for (std::size_t i = 0; i < c.length(); ++i) img.push_back(c.ls[i] - 1);
  for (std::size_t j = c.k + 1; j <= c.n; ++j)
    if (!c.contracts_left(j)) img.push_back(j - 1);
  return Permutation(img);
}

Permutation pi_rho(const Contraction& c) {
  Permutation w = pi_rho_word(c), t = pi_rho_two_line(c);
  if (!(w == t)) throw std::logic_error("pi_rho: word and two-line forms disagree");
  return w;
}

Permutation pi_lambda(const Contraction& c) {
  Permutation w = pi_lambda_word(c), t = pi_lambda_two_line(c);
  if (!(w == t)) throw std::logic_error("pi_lambda: word and two-line forms disagree");
  return w;
}

Permutation pi_c(const Contraction& c) { return pi_rho(c) * pi_lambda(c); }

bool verify_commutation(const Contraction& c) {
  Permutation r = pi_rho(c), l = pi_lambda(c);
  return r * l == l * r;
}

bool verify_extension_right(const Contraction& c, std::size_t r) {
  Contraction cp = c.extended_right(r);
  cp.k = c.k;  // same sector
  cp.validate();
  std::size_t vr = c.v_r(r);
  Permutation expect = pi_c(c) * pi_move(c.n, r - vr, c.k - vr) *
                       pi_move(c.n, c.k + 1 + c.length(), c.k + 1 + vr);
  return pi_c(cp) == expect;
}

bool verify_extension_left(const Contraction& ct, std::size_t l) {
  // ct lives in sector (n, k+1) with k+1 not among its rs
  const std::size_t kp1 = ct.k;  // = k+1
  if (ct.contracts_right(kp1))
    throw std::invalid_argument("extension left: k+1 contracted as right");
  Contraction cpp = ct;
  cpp.rs.push_back(kp1);
  cpp.ls.push_back(l);
  cpp.validate();
  std::size_t ul = ct.u_l(l);
  Permutation expect = pi_c(ct) * pi_move(ct.n, l + ul, kp1 + 1 + ct.length());
  return pi_c(cpp) == expect;
}

SumBound contraction_sum_bound(std::size_t n, std::size_t k) {
  if (n > 12) throw std::invalid_argument("contraction_sum_bound: n > 12");
  auto fact = [](std::size_t m) {
    double r = 1;
    for (std::size_t i = 2; i <= m; ++i) r *= double(i);
    return r;
  };
  double lhs = 0;
  for (std::size_t len = 0; len <= std::min(k, n - k); ++len)
    lhs += double(contraction_count(n, k, len)) *
           std::sqrt(fact(n - k - len) * fact(k - len));
  double rhs = std::pow(2.0, double(n)) * std::sqrt(fact(n));
  return {lhs, rhs};
}

}  // namespace iqft
