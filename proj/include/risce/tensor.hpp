// SPDX-License-Identifier: Apache-2.0
//
// Dense third-order complex tensors and the CP (PARAFAC) algebra needed by
// the ALS estimator.
//
// Unfolding conventions, for a tensor with dims (I, J, K):
//   mode 1: I x (K*J),  column k*J + j
//   mode 2: J x (K*I),  column k*I + i
//   mode 3: K x (J*I),  column j*I + i
// With these, a CP tensor with factors (A, B, C) satisfies
//   unfold(T,1) = A (C kr B)^T,  unfold(T,2) = B (C kr A)^T,
//   unfold(T,3) = C (B kr A)^T.
#pragma once

#include <array>
#include <vector>

#include "risce/types.hpp"

namespace risce {

class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(Index i, Index j, Index k);

  Index dim(int mode) const { return dims_.at(mode - 1); }
  const std::array<Index, 3>& dims() const { return dims_; }
  Index size() const { return static_cast<Index>(data_.size()); }

  // Storage is mode-1 fastest, mode-3 slowest.
  Complex& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
  const Complex& operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

  /// I x J matrix holding T(:, :, k).
  CMatrix frontal_slice(Index k) const;
  void set_frontal_slice(Index k, const CMatrix& slice);

  double squared_norm() const;

  bool operator==(const Tensor3& other) const = default;

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>(i + dims_[0] * (j + dims_[1] * k));
  }

  std::array<Index, 3> dims_{0, 0, 0};
  std::vector<Complex> data_;
};

/// Column-wise Kronecker product; row (k*M + m) of column n is A(k,n) B(m,n).
CMatrix khatri_rao(const CMatrix& a, const CMatrix& b);

CMatrix unfold(const Tensor3& t, int mode);
Tensor3 fold(const CMatrix& m, int mode, const std::array<Index, 3>& dims);

/// T(i,j,k) = sum_n A(i,n) B(j,n) C(k,n).
Tensor3 cp_reconstruct(const CMatrix& a, const CMatrix& b, const CMatrix& c);

struct PseudoInverse {
  CMatrix matrix;
  Index rank = 0;
};

/// Default relative rank cutoff: 1e-12 * max(rows, cols).
double default_pinv_rtol(const CMatrix& a);

/// Moore-Penrose inverse via SVD. Singular values below rtol * sigma_max are
/// treated as zero; a negative rtol selects default_pinv_rtol().
PseudoInverse pseudo_inverse(const CMatrix& a, double rtol = -1.0);

}  // namespace risce
