// SPDX-License-Identifier: Apache-2.0
//
// risce: command-line front end for the RIS circuit / channel-estimation
// experiments. Every subcommand writes CSV files under --out.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risce/csv.hpp"
#include "risce/error.hpp"
#include "risce/harness.hpp"

namespace {

using namespace risce;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  int runs = 0;
  std::vector<double> snr;
  std::vector<std::string> designs;
  std::vector<Index> k_list;
  bool noiseless = false;
  int threads = 0;
  int run_index = 0;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "key = value experiment file")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--runs", f.runs, "Monte Carlo runs per point")->check(CLI::PositiveNumber);
  sub->add_option("--snr", f.snr, "SNR grid in dB (comma separated)")->delimiter(',');
  sub->add_option("--design", f.designs, "dft and/or circuit")
      ->delimiter(',')
      ->check(CLI::IsMember({"dft", "circuit"}));
  sub->add_option("--K", f.k_list, "block counts (comma separated)")->delimiter(',');
  sub->add_flag("--noiseless", f.noiseless, "generate noiseless received signals");
  sub->add_option("--threads", f.threads, "worker threads for sweeps (0 = all cores)");
}

ExperimentConfig resolve_config(const CLI::App* sub, const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  if (sub->count("--seed")) cfg.master_seed = f.seed;
  if (sub->count("--out")) cfg.output_dir = f.out;
  if (sub->count("--runs")) cfg.runs = f.runs;
  if (sub->count("--snr")) cfg.snr_grid = f.snr;
  if (sub->count("--design")) {
    cfg.designs.clear();
    for (const auto& d : f.designs) cfg.designs.push_back(parse_design_kind(d));
  }
  if (sub->count("--K")) cfg.k_list = f.k_list;
  if (sub->count("--noiseless")) cfg.noiseless = f.noiseless;
  if (sub->count("--threads")) cfg.threads = f.threads;
  cfg.validate();
  return cfg;
}

std::optional<double> first_snr(const ExperimentConfig& cfg) {
  if (cfg.noiseless) return std::nullopt;
  return cfg.snr_grid.front();
}

template <typename Fn>
std::filesystem::path write_file(const std::filesystem::path& path, Fn&& fn) {
  auto out = csv::open_output(path);
  fn(out);
  if (!out) throw IoError("write failed: " + path.string());
  return path;
}

int cmd_heatmap(const ExperimentConfig& cfg) {
  for (const auto& p : emit_heatmaps(cfg)) std::cout << p.string() << '\n';
  return 0;
}

int cmd_design(const ExperimentConfig& cfg) {
  for (const auto& p : emit_design(cfg)) std::cout << p.string() << '\n';
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, int run) {
  const auto design = build_design(cfg, cfg.designs.front(), cfg.k_list.front());
  const auto a = generate_run(cfg, design, first_snr(cfg), run);
  const auto dir = cfg.output_dir;
  std::cout << write_file(dir / "channel_H.csv", [&](auto& o) { write_channel_csv(o, a.truth.h); })
                   .string()
            << '\n'
            << write_file(dir / "channel_G.csv", [&](auto& o) { write_channel_csv(o, a.truth.g); })
                   .string()
            << '\n'
            << write_file(dir / "received.csv", [&](auto& o) { write_tensor_csv(o, a.received); })
                   .string()
            << '\n';
  return 0;
}

int cmd_estimate(const ExperimentConfig& cfg, int run) {
  const auto kind = cfg.designs.front();
  const auto k = cfg.k_list.front();
  const auto design = build_design(cfg, kind, k);
  const auto a = estimate_run(cfg, design, first_snr(cfg), run);
  const auto name = "trace_" + std::string(to_string(kind)) + "_K" + std::to_string(k) + ".csv";
  const auto path =
      write_file(cfg.output_dir / name, [&](auto& o) { write_trace_csv(o, a.estimate); });
  std::cout << "design=" << to_string(kind) << " K=" << k << " run=" << run << " seed=" << a.seed
            << " iters=" << a.estimate.iterations
            << " converged=" << (a.estimate.converged ? "yes" : "no")
            << " nmse_h_db=" << nmse_db(a.aligned.h, a.truth.h)
            << " nmse_g_db=" << nmse_db(a.aligned.g, a.truth.g) << '\n'
            << path.string() << '\n';
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const auto result = run_sweep(cfg);
  const auto sweep = write_file(cfg.output_dir / "sweep.csv",
                                [&](auto& o) { write_sweep_csv(o, result); });
  const auto runs = write_file(cfg.output_dir / "runs.csv",
                               [&](auto& o) { write_runs_csv(o, result); });
  for (const auto& f : result.failures) {
    std::cerr << "run failed: " << to_string(f.design) << " K=" << f.k << " snr=" << f.snr_db
              << " run=" << f.run << ": " << f.message << '\n';
  }
  std::cout << sweep.string() << '\n' << runs.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS varactor phase design and PARAFAC channel estimation experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* heatmap = app.add_subcommand("heatmap", "amplitude/phase grids over (R, C)");
  auto* design = app.add_subcommand("design", "phase-shift matrices and R/C provenance");
  auto* simulate = app.add_subcommand("simulate", "one channel/received-tensor realization");
  auto* estimate = app.add_subcommand("estimate", "one ALS estimation run with error trace");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo NMSE-vs-SNR sweep");
  for (auto* sub : {heatmap, design, simulate, estimate, sweep}) add_common(sub, flags);
  for (auto* sub : {simulate, estimate}) {
    sub->add_option("--run", flags.run_index, "Monte Carlo run index")->check(CLI::NonNegativeNumber);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : app.get_subcommands()) {
      const auto cfg = resolve_config(sub, flags);
      const std::string name = sub->get_name();
      if (name == "heatmap") return cmd_heatmap(cfg);
      if (name == "design") return cmd_design(cfg);
      if (name == "simulate") return cmd_simulate(cfg, flags.run_index);
      if (name == "estimate") return cmd_estimate(cfg, flags.run_index);
      if (name == "sweep") return cmd_sweep(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
