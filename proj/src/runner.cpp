#include "momf/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "momf/io.hpp"
#include "momf/rng.hpp"

namespace momf::runner {

using nlohmann::json;

namespace {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

json rounded(double v) { return io::round_trip(v); }

json optional_number(const std::optional<double>& v) { return v ? rounded(*v) : json("not reached"); }

}  // namespace

fs::path output_dir(const config::RunConfig& cfg) {
  if (const char* env = std::getenv("MOMF_OUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

std::string trial_stem(engine::Algorithm algorithm, int trial) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", trial);
  return std::string(engine::to_string(algorithm)) + "_trial" + buf;
}

bool RunSummary::partial() const {
  return std::any_of(trials.begin(), trials.end(), [](const TrialOutcome& t) { return t.failed || t.record.aborted; });
}

void save_params(const fs::path& path, const engine::TrialRecord& record) {
  json fitted = json::array();
  for (const auto& [n, params] : record.fitted_params) {
    json objectives = json::array();
    for (const auto& p : params) {
      objectives.push_back({{"lengthscales", std::vector<double>(p.lengthscales.data(),
                                                                   p.lengthscales.data() + p.lengthscales.size())},
                            {"signal_variance", p.signal_variance},
                            {"noise_variance", p.noise_variance}});
    }
    fitted.push_back({{"n", n}, {"objectives", objectives}});
  }
  auto out = open_out(path);
  out << json{{"fitted", fitted}}.dump(1) << '\n';
}

std::map<std::size_t, std::vector<gp::KernelParams>> load_params(const fs::path& path) {
  auto in = open_in(path);
  const json doc = json::parse(in);
  std::map<std::size_t, std::vector<gp::KernelParams>> out;
  for (const auto& entry : doc.at("fitted")) {
    auto& list = out[entry.at("n").get<std::size_t>()];
    for (const auto& o : entry.at("objectives")) {
      gp::KernelParams p;
      const auto ls = o.at("lengthscales").get<std::vector<double>>();
      p.lengthscales = Eigen::Map<const Eigen::VectorXd>(ls.data(), static_cast<Eigen::Index>(ls.size()));
      p.signal_variance = o.at("signal_variance").get<double>();
      p.noise_variance = o.at("noise_variance").get<double>();
      p.validate();
      list.push_back(std::move(p));
    }
  }
  return out;
}

RunSummary run_experiment(const config::RunConfig& cfg, const fs::path& out, int jobs) {
  fs::create_directories(out);
  const auto problem = cfg.make_problem();
  const auto start = std::chrono::steady_clock::now();

  RunSummary summary;
  for (auto alg : cfg.algorithms)
    for (int t = 0; t < cfg.trials; ++t) summary.trials.push_back({alg, t, cfg.trial_seed(t), {}, false, {}});

  parallel_for(summary.trials.size(), jobs, [&](std::size_t i) {
    auto& job = summary.trials[i];
    try {
      job.record = engine::run_trial(problem, cfg.loop_config(job.algorithm, job.trial));
    } catch (const std::exception& e) {
      job.failed = true;
      job.error = e.what();
      return;
    }
    const auto stem = trial_stem(job.algorithm, job.trial);
    auto csv = open_out(out / (stem + ".csv"));
    io::write_observations(csv, job.trial, job.record.data);
    save_params(out / (stem + "_gp.json"), job.record);
  });
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json trials = json::array();
  for (const auto& t : summary.trials) {
    json entry = {{"algorithm", std::string(engine::to_string(t.algorithm))},
                  {"trial", t.trial},
                  {"seed", t.seed},
                  {"status", t.failed ? "failed" : t.record.aborted ? "aborted" : "ok"}};
    if (!t.failed) {
      entry["observations"] = t.record.data.size();
      entry["total_cost"] = rounded(t.record.data.total_cost());
      entry["file"] = trial_stem(t.algorithm, t.trial) + ".csv";
    }
    if (t.failed) entry["error"] = t.error;
    if (t.record.aborted) entry["diagnostic"] = t.record.diagnostic;
    trials.push_back(std::move(entry));
  }
  json manifest = {{"config", cfg.to_json()},
                   {"trials", trials},
                   {"partial", summary.partial()},
                   {"wall_time_seconds", rounded(summary.wall_seconds)}};
  auto mf = open_out(out / "manifest.json");
  mf << manifest.dump(2) << '\n';
  return summary;
}

problems::OracleFront write_oracle_front(const problems::Problem& problem, int n, std::uint64_t seed,
                                         const fs::path& out) {
  fs::create_directories(out);
  auto oracle = problems::oracle_front(problem, n, seed);
  auto f = open_out(out / "oracle_front.csv");
  io::write_front(f, oracle.front);
  return oracle;
}

BenchOutput bench_from_logs(const config::RunConfig& cfg, const fs::path& out, int jobs) {
  const auto problem = cfg.make_problem();
  const auto oracle = write_oracle_front(problem, cfg.oracle_points, derive_seed(cfg.seed, {stream::kOracle}), out);
  const auto trace_seed = derive_seed(cfg.seed, {stream::kTrace});

  struct Job {
    engine::TrialRecord record;
    int trial = 0;
    bench::HvTrace trace;
  };
  std::vector<Job> work;
  for (auto alg : cfg.algorithms) {
    for (int t = 0; t < cfg.trials; ++t) {
      const auto stem = trial_stem(alg, t);
      Job job;
      job.trial = t;
      job.record.algorithm = alg;
      job.record.seed = cfg.trial_seed(t);
      auto csv = open_in(out / (stem + ".csv"));
      job.record.data = io::read_observations(csv, &problem.normalization).data;
      if (job.record.data.empty()) throw std::runtime_error(stem + ".csv holds no observations");
      if (fs::exists(out / (stem + "_gp.json"))) job.record.fitted_params = load_params(out / (stem + "_gp.json"));
      work.push_back(std::move(job));
    }
  }

  parallel_for(work.size(), jobs, [&](std::size_t i) {
    work[i].trace = bench::hv_trace(work[i].record, problem, oracle, cfg.test_points, trace_seed);
    work[i].trace.trial = work[i].trial;
  });

  BenchOutput result;
  std::vector<bench::HvTrace> flat;
  std::map<std::string, Dataset> pooled;
  for (auto& job : work) {
    const std::string name(engine::to_string(job.record.algorithm));
    flat.push_back(job.trace);
    result.traces[name].push_back(job.trace);
    auto& obs = pooled[name].observations;
    obs.insert(obs.end(), job.record.data.observations.begin(), job.record.data.observations.end());
  }
  for (const auto& [name, data] : pooled) result.fidelity[name] = bench::fidelity_stats(data, cfg.histogram_bins);

  {
    auto f = open_out(out / "hv_trace.csv");
    io::write_traces(f, flat);
  }
  {
    auto f = open_out(out / "fidelity_hist.csv");
    io::write_fidelity_histogram(f, result.fidelity, cfg.histogram_bins);
  }

  result.report = bench::aggregate(result.traces, cfg.threshold);
  const auto& rep = result.report;
  json algorithms = json::object();
  for (const auto& [name, sum] : rep.algorithms) {
    json per_trial = json::array();
    for (const auto& c : sum.trial_cost_to_threshold) per_trial.push_back(optional_number(c));
    json curve = json::array();
    for (double v : sum.mean_curve) curve.push_back(rounded(v));
    const auto& fid = result.fidelity.at(name);
    algorithms[name] = {{"cost_to_threshold", optional_number(sum.mean_cost_to_threshold)},
                        {"trial_cost_to_threshold", per_trial},
                        {"trials_reached", sum.trials_reached},
                        {"curve_cost_to_threshold", optional_number(sum.curve_cost_to_threshold)},
                        {"final_mean_hv", rounded(sum.final_mean_hv)},
                        {"mean_fidelity", rounded(fid.mean)},
                        {"outer_bin_fraction", rounded(fid.outer_fraction)},
                        {"selected_points", fid.count},
                        {"mean_curve", curve}};
  }
  json factors = json::object(), curve_factors = json::object(), grid = json::array();
  for (const auto& [name, f] : rep.reduction_factors) factors[name] = rounded(f);
  for (const auto& [name, f] : rep.curve_reduction_factors) curve_factors[name] = rounded(f);
  for (double c : rep.cost_grid) grid.push_back(rounded(c));
  result.report_json = {{"problem", cfg.problem},
                        {"threshold", rounded(rep.threshold)},
                        {"baseline", rep.baseline},
                        {"oracle_hypervolume", rounded(oracle.hypervolume)},
                        {"algorithms", algorithms},
                        {"reduction_factors", factors},
                        {"curve_reduction_factors", curve_factors},
                        {"cost_grid", grid},
                        {"diagnostics", rep.diagnostics}};
  auto f = open_out(out / "report.json");
  f << result.report_json.dump(2) << '\n';
  return result;
}

}  // namespace momf::runner
