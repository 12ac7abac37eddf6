// SPDX-License-Identifier: Apache-2.0
#include "risce/phase_design.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "risce/csv.hpp"
#include "risce/error.hpp"

namespace risce {

void DesignBox::validate() const {
  if (!(r_lo < r_hi) || !(c_lo < c_hi)) throw DomainError("design box needs lo < hi on both axes");
  if (r_lo < 0.0 || c_lo <= 0.0) throw DomainError("design box must satisfy R >= 0 and C > 0");
}

std::string_view to_string(DesignKind kind) {
  return kind == DesignKind::kCircuit ? "circuit" : "dft";
}

DesignKind parse_design_kind(std::string_view name) {
  if (name == "circuit") return DesignKind::kCircuit;
  if (name == "dft") return DesignKind::kDft;
  throw DomainError("unknown design '" + std::string(name) + "' (expected dft or circuit)");
}

RVector uniform_vector(double lo, double hi, Index n) {
  if (n < 1) throw DomainError("uniform_vector needs at least one point");
  if (!(lo <= hi)) throw DomainError("uniform_vector needs lo <= hi");
  RVector v(n);
  if (n == 1) {
    v(0) = lo;
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) v(i) = lo + step * static_cast<double>(i);
  v(n - 1) = hi;
  return v;
}

RMatrix circshift_rows(const RVector& base, Index k_rows) {
  const Index n = base.size();
  if (n < 1 || k_rows < 1) throw DimensionError("circshift_rows needs K >= 1 and N >= 1");
  RMatrix out(k_rows, n);
  for (Index k = 0; k < k_rows; ++k) {
    const Index shift = k % n;
    for (Index col = 0; col < n; ++col) out(k, col) = base((col - shift + n) % n);
  }
  return out;
}

PhaseShiftMatrix circuit_design(const CircuitParams& params, const DesignBox& box, Index k_blocks,
                                Index n_elements, CircuitDesignOptions opts) {
  params.validate();
  box.validate();
  if (k_blocks < 1 || n_elements < 1) throw DimensionError("design needs K >= 1 and N >= 1");
  if (k_blocks < n_elements && !opts.allow_underdetermined) {
    std::ostringstream msg;
    msg << "K=" << k_blocks << " < N=" << n_elements
        << ": channels are not identifiable with fewer blocks than RIS elements";
    throw DomainError(msg.str());
  }

  PhaseShiftMatrix design;
  design.kind = DesignKind::kCircuit;
  // One shift index per row for both R and C keeps each pair on the box diagonal.
  design.resistance = circshift_rows(uniform_vector(box.r_lo, box.r_hi, n_elements), k_blocks);
  design.capacitance = circshift_rows(uniform_vector(box.c_lo, box.c_hi, n_elements), k_blocks);
  design.s.resize(k_blocks, n_elements);
  for (Index k = 0; k < k_blocks; ++k) {
    for (Index n = 0; n < n_elements; ++n) {
      const auto rsp = response(params, {(*design.resistance)(k, n), (*design.capacitance)(k, n)});
      design.s(k, n) = std::polar(rsp.amplitude, rsp.phase);
    }
  }
  return design;
}

PhaseShiftMatrix dft_design(Index k_blocks, Index n_elements) {
  if (k_blocks < 1 || n_elements < 1) throw DimensionError("design needs K >= 1 and N >= 1");
  if (k_blocks < n_elements) {
    throw DomainError("DFT design needs K >= N for orthogonal columns");
  }
  PhaseShiftMatrix design;
  design.kind = DesignKind::kDft;
  design.s.resize(k_blocks, n_elements);
  for (Index k = 0; k < k_blocks; ++k) {
    for (Index n = 0; n < n_elements; ++n) {
      const Index idx = (k * n) % k_blocks;
      design.s(k, n) = std::polar(1.0, -2.0 * kPi * static_cast<double>(idx) /
                                           static_cast<double>(k_blocks));
    }
  }
  return design;
}

void write_design_csv(std::ostream& out, const PhaseShiftMatrix& design) {
  out << "k,n,re,im,amplitude,phase_rad\n";
  for (Index k = 0; k < design.s.rows(); ++k) {
    for (Index n = 0; n < design.s.cols(); ++n) {
      const Complex v = design.s(k, n);
      out << k + 1 << ',' << n + 1 << ',' << csv::format_double(v.real()) << ','
          << csv::format_double(v.imag()) << ',' << csv::format_double(std::abs(v)) << ','
          << csv::format_double(principal_arg(v)) << '\n';
    }
  }
}

void write_provenance_csv(std::ostream& out, const PhaseShiftMatrix& design) {
  if (!design.resistance || !design.capacitance) {
    throw DomainError("design has no R/C provenance (only circuit designs do)");
  }
  out << "k,n,r_ohm,c_farad\n";
  for (Index k = 0; k < design.s.rows(); ++k) {
    for (Index n = 0; n < design.s.cols(); ++n) {
      out << k + 1 << ',' << n + 1 << ',' << csv::format_double((*design.resistance)(k, n)) << ','
          << csv::format_double((*design.capacitance)(k, n)) << '\n';
    }
  }
}

}  // namespace risce
