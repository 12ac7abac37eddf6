// SPDX-License-Identifier: Apache-2.0
#include "risce/circuit_model.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "risce/csv.hpp"
#include "risce/error.hpp"

namespace risce {
namespace {

constexpr double kSingularRtol = 1e-12;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::vector<double> linspace(Range r, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = (r.hi - r.lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = r.lo + step * i;
  out.back() = r.hi;
  return out;
}

}  // namespace

void CircuitParams::validate() const {
  if (!positive_finite(l1) || !positive_finite(l2) || !positive_finite(z0) ||
      !positive_finite(freq)) {
    throw DomainError("circuit constants L1, L2, Z0 and freq must be finite and positive");
  }
}

void VaractorState::validate() const {
  if (!positive_finite(capacitance)) {
    std::ostringstream msg;
    msg << "capacitance must be positive, got " << capacitance << " F";
    throw DomainError(msg.str());
  }
  if (!std::isfinite(resistance) || resistance < 0.0) {
    std::ostringstream msg;
    msg << "resistance must be non-negative, got " << resistance << " ohm";
    throw DomainError(msg.str());
  }
}

Complex impedance(const CircuitParams& params, const VaractorState& state) {
  params.validate();
  state.validate();
  const double w = params.omega();
  const Complex j{0.0, 1.0};
  const Complex shunt = j * w * params.l1;
  const Complex branch = j * w * params.l2 + 1.0 / (j * w * state.capacitance) + state.resistance;
  const Complex den = shunt + branch;
  if (std::abs(den) < kSingularRtol * params.z0) {
    std::ostringstream msg;
    msg << "impedance is singular at R=" << state.resistance << " ohm, C=" << state.capacitance
        << " F";
    throw SingularityError(msg.str());
  }
  return shunt * branch / den;
}

Complex reflection_coefficient(Complex z, double z0) {
  if (!positive_finite(z0)) throw DomainError("Z0 must be finite and positive");
  const Complex den = z + z0;
  if (std::abs(den) < kSingularRtol * z0) {
    throw SingularityError("reflection coefficient is singular: Z + Z0 vanishes");
  }
  return (z - z0) / den;
}

ElementResponse response(const CircuitParams& params, const VaractorState& state) {
  const Complex v = reflection_coefficient(impedance(params, state), params.z0);
  return {std::abs(v), principal_arg(v)};
}

ResponseGrid response_grid(const CircuitParams& params, Range r_range, Range c_range, int nr,
                           int nc) {
  if (nr < 2 || nc < 2) throw DomainError("response grid needs at least 2 points per axis");
  if (!(r_range.lo < r_range.hi) || !(c_range.lo < c_range.hi)) {
    throw DomainError("response grid ranges need lo < hi");
  }
  if (r_range.lo < 0.0 || c_range.lo <= 0.0) {
    throw DomainError("response grid needs R >= 0 and C > 0");
  }
  params.validate();

  ResponseGrid grid;
  grid.r_axis = linspace(r_range, nr);
  grid.c_axis = linspace(c_range, nc);
  grid.amplitude.resize(nr, nc);
  grid.phase.resize(nr, nc);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) {
      const auto rsp = response(params, {grid.r_axis[static_cast<std::size_t>(i)],
                                         grid.c_axis[static_cast<std::size_t>(j)]});
      grid.amplitude(i, j) = rsp.amplitude;
      grid.phase(i, j) = rsp.phase;
    }
  }
  return grid;
}

void write_grid_csv(std::ostream& out, const ResponseGrid& grid) {
  out << "r_ohm,c_farad,amplitude,phase_rad\n";
  for (std::size_t i = 0; i < grid.r_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.c_axis.size(); ++j) {
      const auto ii = static_cast<Index>(i);
      const auto jj = static_cast<Index>(j);
      out << csv::format_double(grid.r_axis[i]) << ',' << csv::format_double(grid.c_axis[j]) << ','
          << csv::format_double(grid.amplitude(ii, jj)) << ','
          << csv::format_double(grid.phase(ii, jj)) << '\n';
    }
  }
}

}  // namespace risce
