// SPDX-License-Identifier: Apache-2.0
//
// Lumped-element model of a varactor-tuned RIS unit cell.
//
// Each element is an inductor L1 in parallel with a series branch
// L2 + C + R. The element impedance Z is compared against the free-space
// impedance Z0 to obtain the complex reflection coefficient
//
//     v = (Z - Z0) / (Z + Z0),
//
// whose magnitude is the reflected amplitude and whose argument is the
// imposed phase shift. Phases are stored in radians in (-pi, pi].
#pragma once

#include <iosfwd>
#include <vector>

#include "risce/types.hpp"

namespace risce {

struct CircuitParams {
  double l1 = 2.5e-9;   // H
  double l2 = 0.7e-9;   // H
  double z0 = 377.0;    // ohm
  double freq = 2.4e9;  // Hz

  double omega() const { return 2.0 * kPi * freq; }

  /// Throws DomainError unless every constant is finite and positive.
  void validate() const;
};

/// Constants used for the reference 2.4 GHz unit cell.
inline CircuitParams reference_circuit() { return CircuitParams{}; }

struct VaractorState {
  double resistance = 0.0;   // ohm, >= 0
  double capacitance = 0.0;  // F, > 0

  void validate() const;
};

struct ElementResponse {
  double amplitude = 0.0;
  double phase = 0.0;  // rad, (-pi, pi]
};

/// Amplitude/phase samples on a regular (R, C) lattice. Cell (i, j) belongs
/// to r_axis[i] and c_axis[j].
struct ResponseGrid {
  std::vector<double> r_axis;
  std::vector<double> c_axis;
  RMatrix amplitude;
  RMatrix phase;

  double min_amplitude() const { return amplitude.minCoeff(); }
};

/// Closed interval [lo, hi].
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Element impedance in ohms. Throws DomainError for invalid inputs and
/// SingularityError when the parallel combination has a vanishing
/// denominator.
Complex impedance(const CircuitParams& params, const VaractorState& state);

/// (Z - Z0) / (Z + Z0). Throws SingularityError when |Z + Z0| < 1e-12 * Z0.
Complex reflection_coefficient(Complex z, double z0);

ElementResponse response(const CircuitParams& params, const VaractorState& state);

/// Evaluates response() on an nr x nc lattice with inclusive endpoints.
ResponseGrid response_grid(const CircuitParams& params, Range r_range, Range c_range,
                           int nr, int nc);

/// Header `r_ohm,c_farad,amplitude,phase_rad`, r outer, c inner.
void write_grid_csv(std::ostream& out, const ResponseGrid& grid);

}  // namespace risce
