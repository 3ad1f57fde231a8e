#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "iqft/contraction.hpp"
#include "iqft/fock.hpp"

namespace iqft {

// Linear operator on the truncated Fock space, dense blocks between layers.
class TruncatedOperator {
 public:
  TruncatedOperator(std::size_t base, std::size_t n_max);

  static TruncatedOperator identity(std::size_t base, std::size_t n_max);
  static TruncatedOperator random(std::size_t base, std::size_t n_max,
                                  std::mt19937_64& rng);

  std::size_t base() const { return base_; }
  std::size_t n_max() const { return n_max_; }
  // blocks are stored lazily; an empty matrix means the zero block
  Eigen::MatrixXcd& block(std::size_t to, std::size_t from);
  const Eigen::MatrixXcd& block(std::size_t to, std::size_t from) const {
    return blocks_[to * (n_max_ + 1) + from];
  }
  bool has_block(std::size_t to, std::size_t from) const {
    return blocks_[to * (n_max_ + 1) + from].size() != 0;
  }

  FockVector apply(const FockVector& v) const;
  // operator norm w.r.t. the quadrature inner product
  double weighted_norm(const RapidityGrid& g, std::size_t D) const;

 private:
  std::size_t base_, n_max_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

// Smeared contracted matrix element <A>_C(F ox G) for product smearing
// functions: F = left_frees[0] ox ... on the free left slots (ascending),
// G = right_frees[0] ox ... on the free right slots (ascending).
Complex contracted_matrix_element(const SPairCache& sc, const TruncatedOperator& A,
                                  const Contraction& c,
                                  const std::vector<GridFunction>& left_frees,
                                  const std::vector<GridFunction>& right_frees);

// Entirely contracted matrix element <A>^con_{n,k}(f_1 ox ... ox f_n):
// definition route (sum over all contractions of the sector).
Complex fully_contracted_element(const SPairCache& sc, const TruncatedOperator& A,
                                 std::size_t n, std::size_t k,
                                 const std::vector<GridFunction>& fs);
// Commutator route over the contractions not touching slot k+1.
Complex fully_contracted_element_rewri(const SPairCache& sc,
                                       const TruncatedOperator& A, std::size_t n,
                                       std::size_t k,
                                       const std::vector<GridFunction>& fs);

// || S^{pi_rho} S^{pi_lambda} - S^{pi_C} || at a rapidity tuple.
double s_tensor_factorization_residual(const SMatrix& s, const Contraction& c,
                                       const std::vector<double>& thetas);

}  // namespace iqft
