// SPDX-License-Identifier: Apache-2.0
#include "risce/tensor.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/SVD>

#include "risce/error.hpp"

namespace risce {
namespace {

void check_mode(int mode) {
  if (mode < 1 || mode > 3) throw DomainError("unfolding mode must be 1, 2 or 3");
}

// Rows and columns of the mode-n unfolding.
std::pair<Index, Index> unfolded_shape(const std::array<Index, 3>& d, int mode) {
  switch (mode) {
    case 1: return {d[0], d[2] * d[1]};
    case 2: return {d[1], d[2] * d[0]};
    default: return {d[2], d[1] * d[0]};
  }
}

}  // namespace

Tensor3::Tensor3(Index i, Index j, Index k)
    : dims_{i, j, k}, data_(static_cast<std::size_t>(i * j * k), Complex{0.0, 0.0}) {
  if (i < 1 || j < 1 || k < 1) throw DimensionError("tensor dimensions must be >= 1");
}

CMatrix Tensor3::frontal_slice(Index k) const {
  CMatrix slice(dims_[0], dims_[1]);
  for (Index j = 0; j < dims_[1]; ++j)
    for (Index i = 0; i < dims_[0]; ++i) slice(i, j) = (*this)(i, j, k);
  return slice;
}

void Tensor3::set_frontal_slice(Index k, const CMatrix& slice) {
  if (slice.rows() != dims_[0] || slice.cols() != dims_[1]) {
    throw DimensionError("frontal slice shape does not match tensor");
  }
  for (Index j = 0; j < dims_[1]; ++j)
    for (Index i = 0; i < dims_[0]; ++i) (*this)(i, j, k) = slice(i, j);
}

double Tensor3::squared_norm() const {
  double acc = 0.0;
  for (const auto& v : data_) acc += std::norm(v);
  return acc;
}

CMatrix khatri_rao(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "khatri_rao column mismatch: " << a.cols() << " vs " << b.cols();
    throw DimensionError(msg.str());
  }
  const Index m = b.rows();
  CMatrix out(a.rows() * m, a.cols());
  for (Index n = 0; n < a.cols(); ++n)
    for (Index k = 0; k < a.rows(); ++k) out.col(n).segment(k * m, m) = a(k, n) * b.col(n);
  return out;
}

CMatrix unfold(const Tensor3& t, int mode) {
  check_mode(mode);
  const auto& d = t.dims();
  const auto [rows, cols] = unfolded_shape(d, mode);
  CMatrix out(rows, cols);
  for (Index k = 0; k < d[2]; ++k) {
    for (Index j = 0; j < d[1]; ++j) {
      for (Index i = 0; i < d[0]; ++i) {
        const Complex v = t(i, j, k);
        switch (mode) {
          case 1: out(i, k * d[1] + j) = v; break;
          case 2: out(j, k * d[0] + i) = v; break;
          default: out(k, j * d[0] + i) = v; break;
        }
      }
    }
  }
  return out;
}

Tensor3 fold(const CMatrix& m, int mode, const std::array<Index, 3>& dims) {
  check_mode(mode);
  Tensor3 t(dims[0], dims[1], dims[2]);
  const auto [rows, cols] = unfolded_shape(dims, mode);
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << "fold: matrix is " << m.rows() << "x" << m.cols() << ", mode-" << mode
        << " unfolding needs " << rows << "x" << cols;
    throw DimensionError(msg.str());
  }
  for (Index k = 0; k < dims[2]; ++k) {
    for (Index j = 0; j < dims[1]; ++j) {
      for (Index i = 0; i < dims[0]; ++i) {
        switch (mode) {
          case 1: t(i, j, k) = m(i, k * dims[1] + j); break;
          case 2: t(i, j, k) = m(j, k * dims[0] + i); break;
          default: t(i, j, k) = m(k, j * dims[0] + i); break;
        }
      }
    }
  }
  return t;
}

Tensor3 cp_reconstruct(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  if (a.cols() != b.cols() || a.cols() != c.cols()) {
    throw DimensionError("cp_reconstruct: factors must share the column count");
  }
  // Mode-1 unfolding is A (C kr B)^T.
  const CMatrix m1 = a * khatri_rao(c, b).transpose();
  return fold(m1, 1, {a.rows(), b.rows(), c.rows()});
}

double default_pinv_rtol(const CMatrix& a) {
  return 1e-12 * static_cast<double>(std::max(a.rows(), a.cols()));
}

PseudoInverse pseudo_inverse(const CMatrix& a, double rtol) {
  if (rtol < 0.0) rtol = default_pinv_rtol(a);
  PseudoInverse out;
  out.matrix = CMatrix::Zero(a.cols(), a.rows());
  if (a.size() == 0) return out;

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = rtol * sigma(0);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  out.rank = rank;
  if (rank == 0) return out;

  const auto u = svd.matrixU().leftCols(rank);
  const auto v = svd.matrixV().leftCols(rank);
  const RVector inv_sigma = sigma.head(rank).cwiseInverse();
  out.matrix = v * inv_sigma.asDiagonal() * u.adjoint();
  return out;
}

}  // namespace risce
