#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "momf/config.hpp"
#include "momf/io.hpp"
#include "momf/runner.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct Common {
  std::string config_path;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

momf::config::RunConfig load(const Common& c) {
  auto cfg = momf::config::load(c.config_path);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.seeds.clear();
  }
  return cfg;
}

int cmd_run(const Common& c) {
  const auto cfg = load(c);
  const auto out = momf::runner::output_dir(cfg);
  const auto summary = momf::runner::run_experiment(cfg, out, c.jobs);
  for (const auto& t : summary.trials) {
    if (t.failed) std::cerr << "trial " << t.trial << " (" << momf::engine::to_string(t.algorithm) << ") failed: " << t.error << '\n';
    else if (t.record.aborted) std::cerr << "trial " << t.trial << " aborted: " << t.record.diagnostic << '\n';
  }
  std::cout << "wrote " << summary.trials.size() << " trial log(s) to " << out.string() << '\n';
  return summary.partial() ? kRuntimeError : 0;
}

int cmd_bench(const Common& c, bool from_logs) {
  const auto cfg = load(c);
  const auto out = momf::runner::output_dir(cfg);
  if (!from_logs) {
    const auto summary = momf::runner::run_experiment(cfg, out, c.jobs);
    for (const auto& t : summary.trials)
      if (t.failed) throw std::runtime_error("trial " + std::to_string(t.trial) + " failed: " + t.error);
  }
  const auto result = momf::runner::bench_from_logs(cfg, out, c.jobs);
  for (const auto& [name, sum] : result.report.algorithms) {
    std::cout << name << ": cost to " << cfg.threshold << " HV = "
              << (sum.mean_cost_to_threshold ? momf::io::format_double(*sum.mean_cost_to_threshold) : "not reached")
              << ", final HV " << momf::io::format_double(sum.final_mean_hv) << ", mean fidelity "
              << momf::io::format_double(result.fidelity.at(name).mean) << '\n';
  }
  for (const auto& [name, f] : result.report.reduction_factors)
    std::cout << "reduction factor " << name << ": " << momf::io::format_double(f) << '\n';
  for (const auto& d : result.report.diagnostics) std::cerr << "note: " << d << '\n';
  return 0;
}

int cmd_front(const std::string& problem_name, int n, std::uint64_t seed, const std::string& out_flag) {
  momf::problems::Problem problem;
  try {
    problem = momf::problems::make_problem(problem_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: --problem: " << e.what() << '\n';
    return kUsageError;
  }
  if (n < 1000) {
    std::cerr << "error: --n must be at least 1000 (got " << n << ")\n";
    return kUsageError;
  }
  std::string out = out_flag;
  if (const char* env = std::getenv("MOMF_OUT_DIR"); env && *env) out = env;
  const auto oracle = momf::runner::write_oracle_front(problem, n, seed, out);
  std::cout << "front points: " << oracle.front.size() << '\n'
            << "hypervolume: " << momf::io::format_double(oracle.hypervolume) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective multi-fidelity Bayesian optimization"};
  app.require_subcommand(1);

  Common common;
  bool from_logs = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--seed", common.seed, "override the master seed");
  };
  auto* run = app.add_subcommand("run", "run the configured trials and write observation logs");
  add_common(run);
  auto* bench = app.add_subcommand("bench", "run trials, trace hypervolume and write the report");
  add_common(bench);
  bench->add_flag("--from-logs", from_logs, "rebuild the report from existing trial logs");

  std::string problem;
  int n = 10000;
  std::uint64_t front_seed = 0;
  std::string front_out = ".";
  auto* front = app.add_subcommand("front", "sample the oracle Pareto front of a problem");
  front->add_option("--problem", problem, "forrester, branin-currin or park")->required();
  front->add_option("--n", n, "number of random inputs (>= 1000)");
  front->add_option("--seed", front_seed, "sampling seed");
  front->add_option("--out", front_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return cmd_run(common);
    if (*bench) return cmd_bench(common, from_logs);
    return cmd_front(problem, n, front_seed, front_out);
  } catch (const momf::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
