#include "momf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "momf/rng.hpp"

namespace momf::config {

using nlohmann::json;

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

const std::set<std::string> kKnownKeys = {
    "problem",      "algorithm",     "budget",         "max_iterations", "cost_coefficient", "fixed_cost",
    "trials",       "seed",          "seeds",          "init_count",     "mc_samples",       "candidate_pool",
    "restarts",     "gp_restarts",   "mes_samples",    "fidelity_objective", "output_dir",   "threshold",
    "test_points",  "oracle_points", "histogram_bins"};

std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_at(text, pos);
}

class Reader {
 public:
  Reader(const std::string& text, const json& doc) : text_(text), doc_(doc) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + key + "': " + what, line_of_key(text_, key));
  }

  [[nodiscard]] bool has(const std::string& key) const { return doc_.contains(key); }
  [[nodiscard]] const json& at(const std::string& key) const { return doc_.at(key); }

  double number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  int integer(const std::string& key, const json& v, int min) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min) fail(key, "must be at least " + std::to_string(min));
    if (x > 100000000) fail(key, "is too large");
    return static_cast<int>(x);
  }

  std::string string(const std::string& key, const json& v) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::uint64_t seed(const std::string& key, const json& v) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  engine::Algorithm algorithm(const std::string& key, const json& v) const {
    const auto name = string(key, v);
    try {
      return engine::parse_algorithm(name);
    } catch (const std::invalid_argument&) {
      fail(key, "unknown algorithm '" + name + "' (expected momf1, momf2 or sf-ehvi)");
    }
  }

 private:
  const std::string& text_;
  const json& doc_;
};

template <class T, class Get>
std::map<engine::Algorithm, T> per_algorithm(const Reader& r, const std::string& key,
                                             const std::vector<engine::Algorithm>& algorithms, Get get) {
  std::map<engine::Algorithm, T> out;
  const json& v = r.at(key);
  if (v.is_object()) {
    for (const auto& [name, value] : v.items()) {
      const auto alg = r.algorithm(key, json(name));
      if (std::find(algorithms.begin(), algorithms.end(), alg) == algorithms.end())
        r.fail(key, "entry '" + name + "' is not a configured algorithm");
      out[alg] = get(value);
    }
    for (auto alg : algorithms)
      if (!out.count(alg)) r.fail(key, "missing entry for '" + std::string(engine::to_string(alg)) + "'");
  } else {
    const T x = get(v);
    for (auto alg : algorithms) out[alg] = x;
  }
  return out;
}

}  // namespace

std::uint64_t RunConfig::trial_seed(int trial) const {
  if (!seeds.empty()) return seeds.at(static_cast<std::size_t>(trial));
  return derive_seed(seed, {stream::kTrial, static_cast<std::uint64_t>(trial)});
}

engine::LoopConfig RunConfig::loop_config(engine::Algorithm algorithm, int trial) const {
  auto cfg = engine::default_config(algorithm);
  cfg.total_budget = budget.at(algorithm);
  if (auto it = max_iterations.find(algorithm); it != max_iterations.end()) cfg.max_iterations = it->second;
  if (init_count && algorithm != engine::Algorithm::sf_ehvi) cfg.init_count = *init_count;
  if (mc_samples) cfg.mc_samples = *mc_samples;
  if (candidate_pool) cfg.candidate_pool = *candidate_pool;
  if (restarts) cfg.restarts = *restarts;
  if (gp_restarts) cfg.gp_restarts = *gp_restarts;
  if (mes_samples) cfg.mes_samples = *mes_samples;
  cfg.fidelity = fidelity;
  cfg.seed = trial_seed(trial);
  cfg.validate();
  return cfg;
}

problems::Problem RunConfig::make_problem() const {
  return problems::make_problem(problem, CostModel{cost_coefficient, fixed_cost});
}

json RunConfig::to_json() const {
  json j;
  j["problem"] = problem;
  j["algorithm"] = json::array();
  for (auto a : algorithms) j["algorithm"].push_back(std::string(engine::to_string(a)));
  j["budget"] = json::object();
  for (const auto& [a, b] : budget) j["budget"][std::string(engine::to_string(a))] = b;
  if (!max_iterations.empty()) {
    j["max_iterations"] = json::object();
    for (const auto& [a, n] : max_iterations) j["max_iterations"][std::string(engine::to_string(a))] = n;
  }
  j["cost_coefficient"] = cost_coefficient;
  j["fixed_cost"] = fixed_cost;
  j["trials"] = trials;
  j["seed"] = seed;
  if (!seeds.empty()) j["seeds"] = seeds;
  if (init_count) j["init_count"] = *init_count;
  if (mc_samples) j["mc_samples"] = *mc_samples;
  if (candidate_pool) j["candidate_pool"] = *candidate_pool;
  if (restarts) j["restarts"] = *restarts;
  if (gp_restarts) j["gp_restarts"] = *gp_restarts;
  if (mes_samples) j["mes_samples"] = *mes_samples;
  j["fidelity_objective"] = std::string(acq::to_string(fidelity));
  j["output_dir"] = output_dir;
  j["threshold"] = threshold;
  j["test_points"] = test_points;
  j["oracle_points"] = oracle_points;
  j["histogram_bins"] = histogram_bins;
  return j;
}

RunConfig parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line_at(text, e.byte ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw ConfigError("top level must be a JSON object", 1);

  Reader r(text, doc);
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.count(key)) r.fail(key, "unknown key");
  for (const char* key : {"problem", "algorithm", "budget"})
    if (!r.has(key)) throw ConfigError(std::string("missing required field '") + key + "'", 1);

  RunConfig cfg;
  cfg.problem = r.string("problem", r.at("problem"));
  if (std::find(problems::kProblemNames.begin(), problems::kProblemNames.end(), cfg.problem) ==
      problems::kProblemNames.end())
    r.fail("problem", "unknown problem '" + cfg.problem + "' (expected forrester, branin-currin or park)");

  const json& alg = r.at("algorithm");
  if (alg.is_array()) {
    if (alg.empty()) r.fail("algorithm", "needs at least one entry");
    for (const auto& a : alg) {
      const auto parsed = r.algorithm("algorithm", a);
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), parsed) != cfg.algorithms.end())
        r.fail("algorithm", "duplicate entry");
      cfg.algorithms.push_back(parsed);
    }
  } else {
    cfg.algorithms.push_back(r.algorithm("algorithm", alg));
  }

  cfg.budget = per_algorithm<double>(r, "budget", cfg.algorithms, [&](const json& v) {
    const double b = r.number("budget", v);
    if (!(b > 0.0)) r.fail("budget", "must be positive");
    return b;
  });
  if (r.has("max_iterations"))
    cfg.max_iterations = per_algorithm<int>(r, "max_iterations", cfg.algorithms,
                                            [&](const json& v) { return r.integer("max_iterations", v, 0); });

  if (r.has("cost_coefficient")) cfg.cost_coefficient = r.number("cost_coefficient", r.at("cost_coefficient"));
  if (r.has("fixed_cost")) {
    cfg.fixed_cost = r.number("fixed_cost", r.at("fixed_cost"));
    if (cfg.fixed_cost < 0.0) r.fail("fixed_cost", "must be non-negative");
  }
  if (r.has("trials")) cfg.trials = r.integer("trials", r.at("trials"), 1);
  if (r.has("seed")) cfg.seed = r.seed("seed", r.at("seed"));
  if (r.has("seeds")) {
    const json& s = r.at("seeds");
    if (!s.is_array()) r.fail("seeds", "expected an array");
    for (const auto& v : s) cfg.seeds.push_back(r.seed("seeds", v));
    if (r.has("trials") && static_cast<int>(cfg.seeds.size()) != cfg.trials)
      r.fail("seeds", "length must equal trials");
    cfg.trials = static_cast<int>(cfg.seeds.size());
    if (cfg.trials < 1) r.fail("seeds", "needs at least one entry");
  }
  if (r.has("init_count")) cfg.init_count = r.integer("init_count", r.at("init_count"), 1);
  if (r.has("mc_samples")) cfg.mc_samples = r.integer("mc_samples", r.at("mc_samples"), 1);
  if (r.has("candidate_pool")) cfg.candidate_pool = r.integer("candidate_pool", r.at("candidate_pool"), 1);
  if (r.has("restarts")) cfg.restarts = r.integer("restarts", r.at("restarts"), 1);
  if (cfg.candidate_pool && cfg.restarts && *cfg.restarts > *cfg.candidate_pool)
    r.fail("restarts", "must not exceed candidate_pool");
  if (r.has("gp_restarts")) cfg.gp_restarts = r.integer("gp_restarts", r.at("gp_restarts"), 1);
  if (r.has("mes_samples")) cfg.mes_samples = r.integer("mes_samples", r.at("mes_samples"), 1);
  if (r.has("fidelity_objective")) {
    const auto name = r.string("fidelity_objective", r.at("fidelity_objective"));
    try {
      cfg.fidelity = acq::parse_fidelity_kind(name);
    } catch (const std::invalid_argument&) {
      r.fail("fidelity_objective", "unknown kind '" + name + "' (expected linear or tanh)");
    }
  }
  if (r.has("output_dir")) {
    cfg.output_dir = r.string("output_dir", r.at("output_dir"));
    if (cfg.output_dir.empty()) r.fail("output_dir", "must not be empty");
  }
  if (r.has("threshold")) {
    cfg.threshold = r.number("threshold", r.at("threshold"));
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) r.fail("threshold", "must lie in (0, 1)");
  }
  if (r.has("test_points")) cfg.test_points = r.integer("test_points", r.at("test_points"), 1);
  if (r.has("oracle_points")) cfg.oracle_points = r.integer("oracle_points", r.at("oracle_points"), 1000);
  if (r.has("histogram_bins")) cfg.histogram_bins = r.integer("histogram_bins", r.at("histogram_bins"), 2);

  for (auto a : cfg.algorithms) {
    try {
      (void)cfg.loop_config(a, 0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), 0);
    }
  }
  return cfg;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace momf::config
