// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment driver: NMSE-vs-SNR sweeps over phase designs and
// block counts, plus the CSV artifacts behind every figure.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risce/circuit_model.hpp"
#include "risce/estimator.hpp"
#include "risce/phase_design.hpp"
#include "risce/simulation.hpp"

namespace risce {

struct ExperimentConfig {
  SystemDims dims;  // dims.k is ignored by sweeps; k_list drives it
  std::vector<double> snr_grid{0, 5, 10, 15, 20, 25, 30};
  bool noiseless = false;
  int runs = 500;
  std::vector<DesignKind> designs{DesignKind::kDft, DesignKind::kCircuit};
  std::vector<Index> k_list{10, 20};
  std::uint64_t master_seed = 1;
  CircuitParams circuit;
  DesignBox box;
  AlsOptions als;
  int heatmap_nr = 500;
  int heatmap_nc = 500;
  std::filesystem::path output_dir = ".";
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Reads a flat `key = value` file ('#' starts a comment) on top of `base`.
/// Lists are comma separated. Unknown keys raise ConfigError.
ExperimentConfig load_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});
/// Applies one `key = value` assignment.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

struct RunRecord {
  DesignKind design = DesignKind::kDft;
  Index k = 0;
  double snr_db = 0.0;  // meaningless when noiseless
  int run = 0;
  std::uint64_t seed = 0;
  double nmse_h = 0.0;  // linear
  double nmse_g = 0.0;  // linear
  int iterations = 0;
  bool converged = false;
};

struct RunFailure {
  DesignKind design = DesignKind::kDft;
  Index k = 0;
  double snr_db = 0.0;
  int run = 0;
  std::string message;
};

struct SweepPoint {
  DesignKind design = DesignKind::kDft;
  Index k = 0;
  double snr_db = 0.0;
  double nmse_h_db = 0.0;  // dB of the linear mean
  double nmse_g_db = 0.0;
  double mean_iters = 0.0;
  int runs = 0;  // completed runs
};

struct SweepResult {
  bool noiseless = false;
  std::vector<SweepPoint> points;
  std::vector<RunRecord> records;
  std::vector<RunFailure> failures;

  /// Throws std::out_of_range if the point was not swept.
  const SweepPoint& at(DesignKind design, Index k, double snr_db) const;
};

/// Seed of Monte Carlo run `run`; identical across designs, K and SNR.
std::uint64_t run_seed(std::uint64_t master, int run);

struct RunArtifacts {
  std::uint64_t seed = 0;
  ChannelPair truth;
  Tensor3 received;
  EstimationResult estimate;  // empty until estimated
  ChannelPair aligned;
};

/// Draws channels and noise for Monte Carlo run `run` and forms the received
/// tensor. Channel, noise and ALS-init streams derive from run_seed().
RunArtifacts generate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                          std::optional<double> snr_db, int run);

/// generate_run() followed by ALS and scaling alignment.
RunArtifacts estimate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                          std::optional<double> snr_db, int run);

/// One Monte Carlo realization: fresh channels and noise, ALS, alignment.
RunRecord simulate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                       std::optional<double> snr_db, int run);

/// Throws Error if more than 10% of the runs of the sweep fail.
SweepResult run_sweep(const ExperimentConfig& config);

/// Header `design,K,snr_db,nmse_h_db,nmse_g_db,mean_iters,runs`.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Header `design,K,snr_db,run,seed,nmse_h_db,nmse_g_db,iters,converged`.
void write_runs_csv(std::ostream& out, const SweepResult& result);

PhaseShiftMatrix build_design(const ExperimentConfig& config, DesignKind kind, Index k);

/// Writes amplitude/phase grids for the full component ranges and the
/// design box; returns the paths written.
std::vector<std::filesystem::path> emit_heatmaps(const ExperimentConfig& config);
/// Writes S (and R/C provenance for circuit designs) for every design and K.
std::vector<std::filesystem::path> emit_design(const ExperimentConfig& config);

/// Full component ranges of the reference cell.
inline Range full_resistance_range() { return {0.5, 2.5}; }
inline Range full_capacitance_range() { return {0.47e-12, 2.35e-12}; }

}  // namespace risce
