// SPDX-License-Identifier: Apache-2.0
#include "risce/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/SVD>

#include "risce/csv.hpp"
#include "risce/error.hpp"

namespace risce {
namespace {

// Right pseudo-inverse of (S kr F)^T; throws if the factor lost column rank.
CMatrix kr_transpose_pinv(const CMatrix& s, const CMatrix& factor, int iteration,
                          const char* which) {
  const auto pinv = pseudo_inverse(khatri_rao(s, factor).transpose());
  if (pinv.rank < s.cols()) {
    std::ostringstream msg;
    msg << "Khatri-Rao factor (S kr " << which << ") has rank " << pinv.rank << " < N=" << s.cols()
        << " at iteration " << iteration;
    throw IllPosedError(msg.str());
  }
  return pinv.matrix;
}

}  // namespace

void AlsOptions::validate() const {
  if (max_iters < 1) throw DomainError("ALS needs max_iters >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("ALS needs epsilon > 0");
}

EstimationResult als_estimate(const Tensor3& y, const CMatrix& s, const AlsOptions& opts) {
  opts.validate();
  if (y.dim(3) != s.rows()) {
    std::ostringstream msg;
    msg << "tensor has " << y.dim(3) << " blocks but S has " << s.rows() << " rows";
    throw DimensionError(msg.str());
  }
  if (!s.allFinite()) throw DomainError("S has non-finite entries");
  const Index n = s.cols();
  const Index mt = y.dim(2);

  Eigen::JacobiSVD<CMatrix> s_svd(s);
  const auto& sv = s_svd.singularValues();
  if (sv.size() < n || sv(n - 1) <= 1e-12 * static_cast<double>(s.rows()) * sv(0)) {
    throw IllPosedError("phase-shift matrix S is not full column rank; channels are unidentifiable");
  }

  const CMatrix y1 = unfold(y, 1);
  const CMatrix y2 = unfold(y, 2);
  const double y_norm = y1.squaredNorm();
  if (!std::isfinite(y_norm)) throw DomainError("received tensor has non-finite entries");
  if (y_norm == 0.0) {
    throw DegenerateInputError("received tensor is identically zero; relative error is undefined");
  }

  EstimationResult result;
  result.g_hat = rayleigh_channel(mt, n, opts.init_seed);
  for (int it = 1; it <= opts.max_iters; ++it) {
    result.h_hat = y1 * kr_transpose_pinv(s, result.g_hat, it, "G");
    result.g_hat = y2 * kr_transpose_pinv(s, result.h_hat, it, "H");
    if (!result.h_hat.allFinite() || !result.g_hat.allFinite()) {
      throw DivergenceError("ALS produced non-finite iterates at iteration " + std::to_string(it));
    }

    const double e =
        (y1 - result.h_hat * khatri_rao(s, result.g_hat).transpose()).squaredNorm() / y_norm;
    result.error_trace.push_back(e);
    result.iterations = it;
    if (it > 1 && std::abs(e - result.error_trace[result.error_trace.size() - 2]) <= opts.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

ChannelPair resolve_scaling(const EstimationResult& result, const ChannelPair& truth) {
  const CMatrix& h_hat = result.h_hat;
  const CMatrix& g_hat = result.g_hat;
  if (h_hat.rows() != truth.h.rows() || h_hat.cols() != truth.h.cols() ||
      g_hat.rows() != truth.g.rows() || g_hat.cols() != truth.g.cols()) {
    throw DimensionError("estimate and reference channels differ in shape");
  }

  ChannelPair aligned{h_hat, g_hat};
  for (Index n = 0; n < h_hat.cols(); ++n) {
    const double col_norm = h_hat.col(n).squaredNorm();
    if (col_norm == 0.0) {
      throw AlignmentError("estimated H column " + std::to_string(n + 1) + " is zero");
    }
    // Least-squares fit of H_hat(:,n) * delta to H(:,n).
    const Complex delta = h_hat.col(n).dot(truth.h.col(n)) / col_norm;
    if (delta == Complex{0.0, 0.0}) {
      throw AlignmentError("estimated H column " + std::to_string(n + 1) +
                           " is orthogonal to the reference");
    }
    aligned.h.col(n) *= delta;
    aligned.g.col(n) /= delta;
  }
  return aligned;
}

double nmse_linear(const CMatrix& estimate, const CMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw DimensionError("nmse: shape mismatch");
  }
  const double ref = truth.squaredNorm();
  if (ref == 0.0) throw DegenerateInputError("nmse: reference has zero norm");
  return (estimate - truth).squaredNorm() / ref;
}

double to_db(double linear) {
  if (linear <= 0.0) return kNmseFloorDb;
  return std::max(10.0 * std::log10(linear), kNmseFloorDb);
}

double nmse_db(const CMatrix& estimate, const CMatrix& truth) {
  return to_db(nmse_linear(estimate, truth));
}

void write_trace_csv(std::ostream& out, const EstimationResult& result) {
  out << "iter,e\n";
  for (std::size_t i = 0; i < result.error_trace.size(); ++i)
    out << i + 1 << ',' << csv::format_double(result.error_trace[i]) << '\n';
}

}  // namespace risce
