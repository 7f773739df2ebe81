#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momf/bench.hpp"
#include "momf/config.hpp"

namespace momf::runner {

namespace fs = std::filesystem;

/// MOMF_OUT_DIR when set, otherwise the configured output directory.
fs::path output_dir(const config::RunConfig& cfg);

std::string trial_stem(engine::Algorithm algorithm, int trial);

struct TrialOutcome {
  engine::Algorithm algorithm = engine::Algorithm::momf1;
  int trial = 0;
  std::uint64_t seed = 0;
  engine::TrialRecord record;
  bool failed = false;
  std::string error;
};

struct RunSummary {
  std::vector<TrialOutcome> trials;
  double wall_seconds = 0.0;
  [[nodiscard]] bool partial() const;
};

/// Runs every algorithm x trial on a pool of `jobs` workers. Each trial writes
/// `<stem>.csv` (observations) and `<stem>_gp.json` (fitted hyperparameters);
/// `manifest.json` echoes the config with per-trial seeds and wall time.
RunSummary run_experiment(const config::RunConfig& cfg, const fs::path& out, int jobs);

struct BenchOutput {
  std::map<std::string, std::vector<bench::HvTrace>> traces;
  std::map<std::string, bench::FidelityStats> fidelity;
  bench::BenchReport report;
  nlohmann::json report_json;
};

/// Traces and aggregates the persisted trial logs in `out`, writing
/// hv_trace.csv, report.json, fidelity_hist.csv and oracle_front.csv.
BenchOutput bench_from_logs(const config::RunConfig& cfg, const fs::path& out, int jobs);

void save_params(const fs::path& path, const engine::TrialRecord& record);
std::map<std::size_t, std::vector<gp::KernelParams>> load_params(const fs::path& path);

/// Writes oracle_front.csv into `out` and returns the sampled front.
problems::OracleFront write_oracle_front(const problems::Problem& problem, int n, std::uint64_t seed,
                                         const fs::path& out);

}  // namespace momf::runner
