// SPDX-License-Identifier: Apache-2.0
//
// K x N reflection schedules for the RIS during training: row k is the
// pattern applied in block k, column n belongs to element n.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "risce/circuit_model.hpp"
#include "risce/types.hpp"

namespace risce {

struct DesignBox {
  double r_lo = 0.5;      // ohm
  double r_hi = 1.0;      // ohm
  double c_lo = 1.0e-12;  // F
  double c_hi = 2.0e-12;  // F

  void validate() const;
};

/// Operating region that avoids the deep-dissipation zone of the reference cell.
inline DesignBox reference_box() { return DesignBox{}; }

enum class DesignKind { kCircuit, kDft };

std::string_view to_string(DesignKind kind);
/// Accepts "circuit" or "dft".
DesignKind parse_design_kind(std::string_view name);

struct PhaseShiftMatrix {
  CMatrix s;
  DesignKind kind = DesignKind::kDft;
  // Per-entry element state, present for circuit designs only.
  std::optional<RMatrix> resistance;
  std::optional<RMatrix> capacitance;

  Index blocks() const { return s.rows(); }
  Index elements() const { return s.cols(); }
};

/// n equally spaced values from lo to hi inclusive; {lo} when n == 1.
RVector uniform_vector(double lo, double hi, Index n);

/// Row k (0-based) is `base` circularly shifted right by k positions.
RMatrix circshift_rows(const RVector& base, Index k_rows);

struct CircuitDesignOptions {
  // Permit K < N. The estimator cannot identify the channels in that regime.
  bool allow_underdetermined = false;
};

/// Circuit-based schedule: R and C rows are joint circular shifts of uniform
/// R/C vectors over the box, mapped through the element response.
PhaseShiftMatrix circuit_design(const CircuitParams& params, const DesignBox& box, Index k_blocks,
                                Index n_elements, CircuitDesignOptions opts = {});

/// First N columns of the K-point DFT matrix, S_kn = exp(-j 2 pi k n / K).
PhaseShiftMatrix dft_design(Index k_blocks, Index n_elements);

/// Header `k,n,re,im,amplitude,phase_rad`; indices are 1-based.
void write_design_csv(std::ostream& out, const PhaseShiftMatrix& design);
/// Header `k,n,r_ohm,c_farad`. Throws DomainError for designs without provenance.
void write_provenance_csv(std::ostream& out, const PhaseShiftMatrix& design);

}  // namespace risce
