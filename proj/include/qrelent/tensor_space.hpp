#pragma once

#include <vector>

#include "qrelent/linalg.hpp"

namespace qrelent {

inline constexpr Index kDefaultDimCap = 4096;

/// H^{(x)N} for a d-dimensional site space.
///
/// Basis vectors are indexed in mixed radix d with leg 1 the most significant
/// digit, so kron(A_1, ..., A_N) acts with A_k on leg k.
class ManyBodySpace {
 public:
  ManyBodySpace(Index site_dim, int legs, Index cap = kDefaultDimCap);

  Index site_dim() const noexcept { return d_; }
  int legs() const noexcept { return n_; }
  Index total_dim() const noexcept { return total_; }
  Index cap() const noexcept { return cap_; }

  /// Stride of leg k (1-based) in the flat index.
  Index stride(int leg) const { return strides_.at(static_cast<std::size_t>(leg - 1)); }
  /// Digit of basis index x on leg k.
  Index digit(Index x, int leg) const { return (x / stride(leg)) % d_; }

 private:
  Index d_;
  int n_;
  Index total_;
  Index cap_;
  std::vector<Index> strides_;
};

/// Bijection of {1..N}; images[k-1] = pi(k).
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);
  static Permutation transposition(int n, int a, int b);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<int>& images() const noexcept { return images_; }
  Permutation inverse() const;

 private:
  std::vector<int> images_;
};

/// 1^{(x)(j-1)} (x) A (x) 1^{(x)(N-j)}.
Matrix embed_one_body(const Matrix& a, int j, const ManyBodySpace& space);
HermitianOperator embed_one_body(const HermitianOperator& a, int j, const ManyBodySpace& space);

/// W acting on legs (i, j), its first tensor factor on leg i.
Matrix embed_two_body(const Matrix& w, int i, int j, const ManyBodySpace& space);
HermitianOperator embed_two_body(const HermitianOperator& w, int i, int j,
                                 const ManyBodySpace& space);

/// Trace over every leg not in `keep`. The kept legs appear in ascending order.
Matrix partial_trace(const Matrix& gamma, std::vector<int> keep, const ManyBodySpace& space);
HermitianOperator partial_trace(const HermitianOperator& gamma, std::vector<int> keep,
                                const ManyBodySpace& space);

/// N-fold Kronecker power; throws CapacityError beyond `cap`.
HermitianOperator tensor_power(const HermitianOperator& gamma, int n,
                               Index cap = kDefaultDimCap);
Matrix tensor_power(const Matrix& gamma, int n, Index cap = kDefaultDimCap);

/// Permutation unitary: (U_pi)_{x,y} = 1 iff y_k = x_{pi(k)} for every leg k,
/// so U_pi (A_1 (x) ... (x) A_N) U_pi^* carries A_k to leg pi(k).
Matrix permutation_unitary(const Permutation& pi, const ManyBodySpace& space);

/// U_pi A U_pi^* computed by index relabelling.
Matrix conjugate_by_permutation(const Matrix& a, const Permutation& pi,
                                const ManyBodySpace& space);

/// Swap S on C^d (x) C^d.
Matrix swap_operator(Index d);

/// ||S W S - W||_op.
double flip_symmetry_defect(const Matrix& w);

/// Largest ||U_tau Gamma U_tau^* - Gamma||_op over all transpositions tau.
double symmetry_defect(const Matrix& gamma, const ManyBodySpace& space);
bool is_symmetric_state(const Matrix& gamma, const ManyBodySpace& space, double tol);

/// W_ij * M and M * W_ij without forming W_ij.
Matrix apply_two_body_left(const Matrix& w, int i, int j, const Matrix& m,
                           const ManyBodySpace& space);
Matrix apply_two_body_right(const Matrix& m, const Matrix& w, int i, int j,
                            const ManyBodySpace& space);

}  // namespace qrelent
