// SPDX-License-Identifier: Apache-2.0
//
// Bilinear alternating least squares for the RIS cascaded channel model
// Y = I_N x1 H x2 G x3 S with the phase schedule S known at the receiver.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "risce/simulation.hpp"
#include "risce/tensor.hpp"
#include "risce/types.hpp"

namespace risce {

struct AlsOptions {
  int max_iters = 200;
  double epsilon = 1e-10;  // bound on |e(i) - e(i-1)|; circuit schedules converge linearly
  std::uint64_t init_seed = 0;

  void validate() const;
};

struct EstimationResult {
  CMatrix h_hat;
  CMatrix g_hat;
  std::vector<double> error_trace;  // e(1), e(2), ...
  int iterations = 0;
  bool converged = false;
};

/// Alternates H <- [Y]_(1) ((S kr G)^T)^+ and G <- [Y]_(2) ((S kr H)^T)^+
/// until the relative fit error changes by at most epsilon.
EstimationResult als_estimate(const Tensor3& y, const CMatrix& s, const AlsOptions& opts);

/// Removes the per-column scaling ambiguity against a reference pair.
/// The CP product H_aligned diag(.) G_aligned^T is unchanged.
ChannelPair resolve_scaling(const EstimationResult& result, const ChannelPair& truth);

/// NMSE reported for an exact estimate.
inline constexpr double kNmseFloorDb = -300.0;

/// ||estimate - truth||_F^2 / ||truth||_F^2.
double nmse_linear(const CMatrix& estimate, const CMatrix& truth);
/// nmse_linear in dB, clamped below at kNmseFloorDb.
double nmse_db(const CMatrix& estimate, const CMatrix& truth);

double to_db(double linear);

/// Header `iter,e`.
void write_trace_csv(std::ostream& out, const EstimationResult& result);

}  // namespace risce
