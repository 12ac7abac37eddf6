// SPDX-License-Identifier: Apache-2.0
#include "risce/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "risce/csv.hpp"
#include "risce/error.hpp"

namespace risce {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a finite number, got '" + text + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("'" + key + "': expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + key + "': expected true/false, got '" + text + "'");
}

struct Task {
  std::size_t group;
  std::size_t snr_index;
  int run;
};

struct Outcome {
  std::optional<RunRecord> record;
  std::string error;
};

std::string grid_name(const char* which, int nr, int nc) {
  return std::string("heatmap_") + which + "_" + std::to_string(nr) + "x" + std::to_string(nc) +
         ".csv";
}

}  // namespace

void ExperimentConfig::validate() const {
  SystemDims d = dims;
  d.validate();
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!noiseless && snr_grid.empty()) throw ConfigError("snr grid must not be empty");
  if (designs.empty()) throw ConfigError("at least one design is required");
  if (k_list.empty()) throw ConfigError("at least one K is required");
  for (auto k : k_list) {
    if (k < dims.n) {
      throw ConfigError("every K must be >= N (K=" + std::to_string(k) +
                        ", N=" + std::to_string(dims.n) + ")");
    }
  }
  if (heatmap_nr < 2 || heatmap_nc < 2) throw ConfigError("heatmap resolution must be >= 2");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  circuit.validate();
  box.validate();
  als.validate();
}

void apply_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  auto count = [&](const std::string& k, const std::string& v) {
    const auto x = parse_int(k, v);
    if (x < 1) throw ConfigError("'" + k + "' must be >= 1");
    return static_cast<Index>(x);
  };

  if (key == "Mt") c.dims.mt = count(key, value);
  else if (key == "Mr") c.dims.mr = count(key, value);
  else if (key == "N") c.dims.n = count(key, value);
  else if (key == "T") c.dims.t = count(key, value);
  else if (key == "K") {
    c.k_list.clear();
    for (const auto& item : split_list(value)) c.k_list.push_back(count(key, item));
  } else if (key == "snr") {
    c.snr_grid.clear();
    for (const auto& item : split_list(value)) c.snr_grid.push_back(parse_double(key, item));
  } else if (key == "noiseless") c.noiseless = parse_bool(key, value);
  else if (key == "runs") c.runs = static_cast<int>(count(key, value));
  else if (key == "design" || key == "designs") {
    c.designs.clear();
    try {
      for (const auto& item : split_list(value)) c.designs.push_back(parse_design_kind(item));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "seed") c.master_seed = parse_u64(key, value);
  else if (key == "L1") c.circuit.l1 = parse_double(key, value);
  else if (key == "L2") c.circuit.l2 = parse_double(key, value);
  else if (key == "Z0") c.circuit.z0 = parse_double(key, value);
  else if (key == "freq") c.circuit.freq = parse_double(key, value);
  else if (key == "r_lo") c.box.r_lo = parse_double(key, value);
  else if (key == "r_hi") c.box.r_hi = parse_double(key, value);
  else if (key == "c_lo") c.box.c_lo = parse_double(key, value);
  else if (key == "c_hi") c.box.c_hi = parse_double(key, value);
  else if (key == "max_iters") c.als.max_iters = static_cast<int>(count(key, value));
  else if (key == "epsilon") c.als.epsilon = parse_double(key, value);
  else if (key == "heatmap_nr") c.heatmap_nr = static_cast<int>(count(key, value));
  else if (key == "heatmap_nc") c.heatmap_nc = static_cast<int>(count(key, value));
  else if (key == "out") c.output_dir = value;
  else if (key == "threads") c.threads = static_cast<int>(parse_int(key, value));
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig load_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  try {
    return load_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const SweepPoint& SweepResult::at(DesignKind design, Index k, double snr_db) const {
  for (const auto& p : points) {
    if (p.design == design && p.k == k && (p.snr_db == snr_db || (noiseless && std::isinf(p.snr_db)))) {
      return p;
    }
  }
  throw std::out_of_range("sweep point not found");
}

std::uint64_t run_seed(std::uint64_t master, int run) {
  return derive_seed(master, {static_cast<std::uint64_t>(run)});
}

PhaseShiftMatrix build_design(const ExperimentConfig& config, DesignKind kind, Index k) {
  if (kind == DesignKind::kDft) return dft_design(k, config.dims.n);
  return circuit_design(config.circuit, config.box, k, config.dims.n);
}

RunArtifacts generate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                          std::optional<double> snr_db, int run) {
  const auto& d = config.dims;
  RunArtifacts a;
  a.seed = run_seed(config.master_seed, run);
  a.truth = {rayleigh_channel(d.mr, d.n, derive_seed(a.seed, {1})),
             rayleigh_channel(d.mt, d.n, derive_seed(a.seed, {2}))};
  a.received = received_tensor(a.truth, design.s, pilot_matrix(d.mt, d.t),
                               {snr_db, derive_seed(a.seed, {3})});
  return a;
}

RunArtifacts estimate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                          std::optional<double> snr_db, int run) {
  RunArtifacts a = generate_run(config, design, snr_db, run);
  AlsOptions als = config.als;
  als.init_seed = derive_seed(a.seed, {4});
  a.estimate = als_estimate(a.received, design.s, als);
  a.aligned = resolve_scaling(a.estimate, a.truth);
  return a;
}

RunRecord simulate_run(const ExperimentConfig& config, const PhaseShiftMatrix& design,
                       std::optional<double> snr_db, int run) {
  const RunArtifacts a = estimate_run(config, design, snr_db, run);
  RunRecord rec;
  rec.design = design.kind;
  rec.k = design.blocks();
  rec.snr_db = snr_db.value_or(std::numeric_limits<double>::infinity());
  rec.run = run;
  rec.seed = a.seed;
  rec.nmse_h = nmse_linear(a.aligned.h, a.truth.h);
  rec.nmse_g = nmse_linear(a.aligned.g, a.truth.g);
  rec.iterations = a.estimate.iterations;
  rec.converged = a.estimate.converged;
  return rec;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();

  struct Group {
    DesignKind kind;
    Index k;
    std::optional<PhaseShiftMatrix> design;
    std::string error;
  };
  std::vector<Group> groups;
  for (auto kind : config.designs) {
    for (auto k : config.k_list) {
      Group g{kind, k, std::nullopt, {}};
      try {
        g.design = build_design(config, kind, k);
      } catch (const std::exception& e) {
        g.error = e.what();
      }
      groups.push_back(std::move(g));
    }
  }

  std::vector<std::optional<double>> snrs;
  if (config.noiseless) {
    snrs.push_back(std::nullopt);
  } else {
    for (double s : config.snr_grid) snrs.push_back(s);
  }

  std::vector<Task> tasks;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t s = 0; s < snrs.size(); ++s)
      for (int r = 0; r < config.runs; ++r) tasks.push_back({g, s, r});

  std::vector<Outcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      const Group& g = groups[t.group];
      if (!g.design) {
        outcomes[i].error = g.error;
        continue;
      }
      try {
        outcomes[i].record = simulate_run(config, *g.design, snrs[t.snr_index], t.run);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  // Aggregate in task order so the result is independent of scheduling.
  SweepResult result;
  result.noiseless = config.noiseless;
  std::size_t i = 0;
  for (const auto& g : groups) {
    for (const auto& snr : snrs) {
      SweepPoint p;
      p.design = g.kind;
      p.k = g.k;
      p.snr_db = snr.value_or(std::numeric_limits<double>::infinity());
      double sum_h = 0.0, sum_g = 0.0, sum_it = 0.0;
      for (int r = 0; r < config.runs; ++r, ++i) {
        const Outcome& o = outcomes[i];
        if (o.record) {
          sum_h += o.record->nmse_h;
          sum_g += o.record->nmse_g;
          sum_it += o.record->iterations;
          ++p.runs;
          result.records.push_back(*o.record);
        } else {
          result.failures.push_back({g.kind, g.k, p.snr_db, r, o.error});
        }
      }
      if (p.runs > 0) {
        p.nmse_h_db = to_db(sum_h / p.runs);
        p.nmse_g_db = to_db(sum_g / p.runs);
        p.mean_iters = sum_it / p.runs;
      } else {
        p.nmse_h_db = p.nmse_g_db = std::numeric_limits<double>::quiet_NaN();
      }
      result.points.push_back(p);
    }
  }

  if (result.failures.size() * 10 > tasks.size()) {
    std::ostringstream msg;
    msg << result.failures.size() << " of " << tasks.size()
        << " runs failed (limit 10%); first failure: " << to_string(result.failures.front().design)
        << " K=" << result.failures.front().k << " run " << result.failures.front().run << ": "
        << result.failures.front().message;
    throw Error(msg.str());
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "design,K,snr_db,nmse_h_db,nmse_g_db,mean_iters,runs\n";
  for (const auto& p : result.points) {
    out << to_string(p.design) << ',' << p.k << ',' << csv::format_double(p.snr_db) << ','
        << csv::format_double(p.nmse_h_db) << ',' << csv::format_double(p.nmse_g_db) << ','
        << csv::format_double(p.mean_iters) << ',' << p.runs << '\n';
  }
}

void write_runs_csv(std::ostream& out, const SweepResult& result) {
  out << "design,K,snr_db,run,seed,nmse_h_db,nmse_g_db,iters,converged\n";
  for (const auto& r : result.records) {
    out << to_string(r.design) << ',' << r.k << ',' << csv::format_double(r.snr_db) << ','
        << r.run << ',' << r.seed << ',' << csv::format_double(to_db(r.nmse_h)) << ','
        << csv::format_double(to_db(r.nmse_g)) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << '\n';
  }
}

std::vector<std::filesystem::path> emit_heatmaps(const ExperimentConfig& config) {
  config.circuit.validate();
  config.box.validate();
  const int nr = config.heatmap_nr;
  const int nc = config.heatmap_nc;
  std::vector<std::filesystem::path> written;

  const auto write = [&](const char* which, Range r, Range c) {
    const auto path = config.output_dir / grid_name(which, nr, nc);
    auto out = csv::open_output(path);
    write_grid_csv(out, response_grid(config.circuit, r, c, nr, nc));
    if (!out) throw IoError("write failed: " + path.string());
    written.push_back(path);
  };
  write("full", full_resistance_range(), full_capacitance_range());
  write("box", {config.box.r_lo, config.box.r_hi}, {config.box.c_lo, config.box.c_hi});
  return written;
}

std::vector<std::filesystem::path> emit_design(const ExperimentConfig& config) {
  std::vector<std::filesystem::path> written;
  for (auto kind : config.designs) {
    for (auto k : config.k_list) {
      const auto design = build_design(config, kind, k);
      const std::string stem = "design_" + std::string(to_string(kind)) + "_K" + std::to_string(k);
      const auto s_path = config.output_dir / (stem + ".csv");
      {
        auto out = csv::open_output(s_path);
        write_design_csv(out, design);
        if (!out) throw IoError("write failed: " + s_path.string());
      }
      written.push_back(s_path);
      if (design.resistance) {
        const auto rc_path = config.output_dir / (stem + "_rc.csv");
        auto out = csv::open_output(rc_path);
        write_provenance_csv(out, design);
        if (!out) throw IoError("write failed: " + rc_path.string());
        written.push_back(rc_path);
      }
    }
  }
  return written;
}

}  // namespace risce
