// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "golden.hpp"
#include "risce/circuit_model.hpp"
#include "risce/error.hpp"

using namespace risce;

namespace {

const CircuitParams kRef = reference_circuit();

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(CircuitParams, ReferenceConstants) {
  EXPECT_DOUBLE_EQ(kRef.l1, 2.5e-9);
  EXPECT_DOUBLE_EQ(kRef.l2, 0.7e-9);
  EXPECT_DOUBLE_EQ(kRef.z0, 377.0);
  EXPECT_DOUBLE_EQ(kRef.freq, 2.4e9);
  EXPECT_EQ(kRef.omega(), 2.0 * kPi * 2.4e9);
}

TEST(CircuitParams, RejectsNonPositive) {
  CircuitParams p = kRef;
  p.l2 = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = kRef;
  p.freq = -1.0;
  EXPECT_THROW(impedance(p, {0.5, 1e-12}), DomainError);
}

TEST(Impedance, LosslessIsPurelyReactive) {
  const Complex z = impedance(kRef, {0.0, 1e-12});
  EXPECT_LE(std::abs(z.real()), 1e-9 * std::abs(z));
}

TEST(Impedance, MatchesHighPrecisionOracle) {
  const auto& g = test::circuit_golden();
  const Complex expected{g["impedance"]["re"].get<double>(), g["impedance"]["im"].get<double>()};
  const Complex z = impedance(kRef, {0.5, 1e-12});
  EXPECT_LT(rel_err(z, expected), 1e-10);
  EXPECT_NEAR(z.real(), 2.18, 0.01);
  EXPECT_NEAR(z.imag(), 116.3, 0.1);
}

TEST(Impedance, DomainErrors) {
  EXPECT_THROW(impedance(kRef, {0.5, 0.0}), DomainError);
  EXPECT_THROW(impedance(kRef, {0.5, -1e-12}), DomainError);
  EXPECT_THROW(impedance(kRef, {-0.1, 1e-12}), DomainError);
}

TEST(Impedance, SingularDenominatorReportsState) {
  // R = 0 at the parallel resonance 1/(w C) = w (L1 + L2) cancels the denominator.
  const double w = kRef.omega();
  const double c_res = 1.0 / (w * w * (kRef.l1 + kRef.l2));
  try {
    impedance(kRef, {0.0, c_res});
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("R=0 ohm"), std::string::npos) << e.what();
  }
}

TEST(ReflectionCoefficient, MatchedLoadIsZero) {
  EXPECT_EQ(reflection_coefficient({377.0, 0.0}, 377.0), Complex(0.0, 0.0));
}

TEST(ReflectionCoefficient, ReactiveLoadHasUnitMagnitude) {
  for (double x : {-1e4, -50.0, 1e-3, 116.0, 3e5}) {
    EXPECT_NEAR(std::abs(reflection_coefficient({0.0, x}, 377.0)), 1.0, 1e-9) << x;
  }
}

TEST(ReflectionCoefficient, SingularAtMinusZ0) {
  EXPECT_THROW(reflection_coefficient({-377.0, 0.0}, 377.0), SingularityError);
  EXPECT_THROW(reflection_coefficient({1.0, 0.0}, 0.0), DomainError);
}

TEST(Response, MatchesOracle) {
  const auto& g = test::circuit_golden()["reflection"];
  const auto r = response(kRef, {0.5, 1e-12});
  EXPECT_NEAR(r.amplitude, g["amplitude"].get<double>(), 1e-12);
  EXPECT_NEAR(r.phase, g["phase_rad"].get<double>(), 1e-10);
  EXPECT_NEAR(r.amplitude, 0.990, 5e-4);
  EXPECT_NEAR(r.phase, 2.543, 5e-4);
}

TEST(Response, LosslessHasUnitAmplitude) {
  for (double c : {0.3e-12, 1e-12, 1.37e-12, 2e-12, 10e-12}) {
    EXPECT_NEAR(response(kRef, {0.0, c}).amplitude, 1.0, 1e-9) << c;
  }
}

// Property: passivity and strict dissipation over random states.
TEST(Response, PassiveAndDissipativeProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r_dist(1e-3, 50.0);
  std::uniform_real_distribution<double> logc(std::log(0.05e-12), std::log(50e-12));
  for (int i = 0; i < 20000; ++i) {
    const VaractorState s{r_dist(rng), std::exp(logc(rng))};
    const auto rsp = response(kRef, s);
    ASSERT_LT(rsp.amplitude, 1.0) << s.resistance << " " << s.capacitance;
    ASSERT_GE(rsp.amplitude, 0.0);
    ASSERT_GT(rsp.phase, -kPi);
    ASSERT_LE(rsp.phase, kPi);
    ASSERT_GE(impedance(kRef, s).real(), 0.0);
  }
}

TEST(Response, DissipationGrowsWithResistanceInBox) {
  for (int i = 0; i < 100; ++i) {
    const double c = 1e-12 + 1e-12 * i / 99.0;
    EXPECT_LE(response(kRef, {1.0, c}).amplitude, response(kRef, {0.5, c}).amplitude) << c;
  }
}

TEST(ResponseGrid, TwoByTwoIsPointwise) {
  const auto grid = response_grid(kRef, {0.5, 1.0}, {1e-12, 2e-12}, 2, 2);
  ASSERT_EQ(grid.amplitude.rows(), 2);
  ASSERT_EQ(grid.amplitude.cols(), 2);
  EXPECT_EQ(grid.r_axis, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(grid.c_axis, (std::vector<double>{1e-12, 2e-12}));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto r = response(kRef, {grid.r_axis[i], grid.c_axis[j]});
      EXPECT_EQ(grid.amplitude(i, j), r.amplitude);
      EXPECT_EQ(grid.phase(i, j), r.phase);
    }
  }
}

TEST(ResponseGrid, InvalidArguments) {
  EXPECT_THROW(response_grid(kRef, {0.5, 1.0}, {1e-12, 2e-12}, 1, 5), DomainError);
  EXPECT_THROW(response_grid(kRef, {1.0, 0.5}, {1e-12, 2e-12}, 5, 5), DomainError);
  EXPECT_THROW(response_grid(kRef, {0.5, 1.0}, {0.0, 2e-12}, 5, 5), DomainError);
}

TEST(ResponseGrid, ScansMatchOracle) {
  const auto& g = test::circuit_golden();
  const auto box = response_grid(kRef, {0.5, 1.0}, {1e-12, 2e-12}, 200, 200);
  Index bi = 0, bj = 0;
  EXPECT_NEAR(box.amplitude.minCoeff(&bi, &bj), g["scan_box_200"]["min_amplitude"].get<double>(),
              1e-10);
  EXPECT_EQ(bi, g["scan_box_200"]["row"].get<Index>());
  EXPECT_EQ(bj, g["scan_box_200"]["col"].get<Index>());

  const auto full = response_grid(kRef, {0.5, 2.5}, {0.47e-12, 2.35e-12}, 200, 200);
  Index fi = 0, fj = 0;
  EXPECT_NEAR(full.amplitude.minCoeff(&fi, &fj), g["scan_full_200"]["min_amplitude"].get<double>(),
              1e-10);
  EXPECT_EQ(fi, g["scan_full_200"]["row"].get<Index>());
  EXPECT_EQ(fj, g["scan_full_200"]["col"].get<Index>());
  EXPECT_LT(full.min_amplitude(), 0.5);
}

TEST(ResponseGrid, PhaseIsContinuousAt500) {
  const auto grid = response_grid(kRef, {0.5, 2.5}, {0.47e-12, 2.35e-12}, 500, 500);
  const auto wrapped = [](double d) { return std::abs(std::remainder(d, 2.0 * kPi)); };
  double worst = 0.0;
  for (Index i = 0; i < 500; ++i) {
    for (Index j = 0; j < 500; ++j) {
      if (i + 1 < 500) worst = std::max(worst, wrapped(grid.phase(i + 1, j) - grid.phase(i, j)));
      if (j + 1 < 500) worst = std::max(worst, wrapped(grid.phase(i, j + 1) - grid.phase(i, j)));
    }
  }
  EXPECT_LT(worst, 0.3);
}

TEST(ResponseGrid, CsvLayout) {
  const auto grid = response_grid(kRef, {0.5, 1.0}, {1e-12, 2e-12}, 3, 2);
  std::ostringstream out;
  write_grid_csv(out, grid);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r_ohm,c_farad,amplitude,phase_rad");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0.5,9.9999999999999998e-13,", 0), 0u) << line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0.5,2e-12,", 0), 0u) << line;
  int rows = 2;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}
