#include "momf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "momf/pareto.hpp"
#include "momf/rng.hpp"

namespace momf::engine {

namespace {

constexpr int kInitGrid = 1000;
constexpr double kMinStep = 1e-3;
constexpr int kMaxRefineEvaluations = 400;
constexpr int kFidelityPool = 128;
constexpr int kFidelityRestarts = 3;

Observation observe(const problems::Problem& problem, Vector x, double s, int iteration) {
  Observation obs;
  obs.y_raw = problem.evaluate(x, s);
  obs.y_normalized = problem.normalization.apply(obs.y_raw);
  obs.x = std::move(x);
  obs.s = s;
  obs.cost = problem.cost_model(s);
  obs.iteration = iteration;
  return obs;
}

std::vector<gp::KernelParams> params_of(const std::vector<gp::GpModel>& models) {
  std::vector<gp::KernelParams> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(m.params());
  return out;
}

// Shared driver: fits the objective GPs, asks `propose` for the next (x, s),
// and applies the strict budget gate before every evaluation.
template <typename Propose>
TrialRecord run_loop(const problems::Problem& problem, const LoopConfig& config, double cheapest_cost,
                     Propose&& propose) {
  config.validate();
  TrialRecord rec;
  rec.algorithm = config.algorithm;
  rec.seed = config.seed;
  rec.data = initialize(problem, config.init_count, config.init_mode, derive_seed(config.seed, {stream::kInit}));

  std::vector<gp::KernelParams> warm;
  for (int it = 1; config.max_iterations == 0 || it <= config.max_iterations; ++it) {
    if (rec.data.total_cost() + cheapest_cost > config.total_budget) break;
    const auto uit = static_cast<std::uint64_t>(it);
    std::vector<gp::GpModel> models;
    try {
      models = fit_objectives(rec.data, config.gp_restarts, derive_seed(config.seed, {stream::kGpFit, uit}),
                              warm.empty() ? nullptr : &warm);
    } catch (const std::exception& e) {
      rec.aborted = true;
      rec.diagnostic = "GP fit failed at iteration " + std::to_string(it) + ": " + e.what();
      break;
    }
    warm = params_of(models);
    rec.fitted_params[rec.data.size()] = warm;

    Candidate next;
    double s = 1.0;
    try {
      std::tie(next, s) = propose(models, rec.data, it);
    } catch (const std::exception& e) {
      rec.aborted = true;
      rec.diagnostic = "acquisition failed at iteration " + std::to_string(it) + ": " + e.what();
      break;
    }
    const double step_cost = problem.cost_model(s);
    if (rec.data.total_cost() + step_cost > config.total_budget) break;
    rec.data.append(observe(problem, std::move(next.point), s, it));
  }
  return rec;
}

// Objective vectors of the front the two-step and single-fidelity loops
// improve on: observed values at s = 1, posterior means at s = 1 otherwise.
pareto::ParetoFront target_fidelity_front(const Dataset& data, const std::vector<gp::GpModel>& models) {
  std::vector<Vector> pts;
  pts.reserve(data.size());
  for (const auto& obs : data.observations) {
    if (obs.s == 1.0) {
      pts.push_back(obs.y_normalized);
      continue;
    }
    const Vector q = gp::joint_point(obs.x, 1.0);
    Vector y(models.size());
    for (std::size_t j = 0; j < models.size(); ++j) y[j] = models[j].posterior_mean(q);
    pts.push_back(std::move(y));
  }
  return pareto::ParetoFront::clipped(pts, Vector(models.size(), 0.0));
}

Candidate maximize_target_ehvi(const std::vector<gp::GpModel>& models, const Dataset& data,
                               const problems::Problem& problem, const LoopConfig& config, std::uint64_t it) {
  const auto front = target_fidelity_front(data, models);
  const auto samples = acq::McSampleSet::generate(config.mc_samples, static_cast<int>(models.size()),
                                                  derive_seed(config.seed, {stream::kMcSamples, it}));
  std::vector<gp::Posterior> post(models.size());
  auto score = [&](std::span<const double> x) {
    const Vector q = gp::joint_point(x, 1.0);
    for (std::size_t j = 0; j < models.size(); ++j) post[j] = models[j].posterior(q);
    return acq::ehvi_mc(post, front, samples);
  };
  return maximize_acquisition(score, Bounds::unit(static_cast<std::size_t>(problem.input_dim)), config.candidate_pool,
                              config.restarts, derive_seed(config.seed, {stream::kAcqPool, it}));
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "momf1") return Algorithm::momf1;
  if (name == "momf2") return Algorithm::momf2;
  if (name == "sf-ehvi") return Algorithm::sf_ehvi;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::momf1: return "momf1";
    case Algorithm::momf2: return "momf2";
    case Algorithm::sf_ehvi: return "sf-ehvi";
  }
  return "?";
}

void LoopConfig::validate() const {
  if (!(total_budget > 0.0)) throw std::invalid_argument("total_budget must be positive");
  if (init_count < 1) throw std::invalid_argument("init_count must be at least 1");
  if (mc_samples < 1) throw std::invalid_argument("mc_samples must be at least 1");
  if (restarts < 1 || candidate_pool < restarts)
    throw std::invalid_argument("need candidate_pool >= restarts >= 1");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be non-negative");
  if (mes_samples < 1) throw std::invalid_argument("mes_samples must be at least 1");
  if (gp_restarts < 1) throw std::invalid_argument("gp_restarts must be at least 1");
}

LoopConfig default_config(Algorithm algorithm) {
  LoopConfig c;
  c.algorithm = algorithm;
  if (algorithm == Algorithm::sf_ehvi) {
    c.init_count = 1;
    c.init_mode = InitMode::fixed_high;
  }
  return c;
}

Bounds Bounds::unit(std::size_t dim) { return {Vector(dim, 0.0), Vector(dim, 1.0)}; }

Dataset initialize(const problems::Problem& problem, int n, InitMode mode, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("initial design needs at least one point");
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Cumulative distribution of p(s) ~ 1 / C(s) on a uniform grid (trapezoid rule).
  std::vector<double> grid(kInitGrid), cdf(kInitGrid, 0.0);
  for (int i = 0; i < kInitGrid; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (kInitGrid - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    cdf[i] = cdf[i - 1] + 0.5 * h * (1.0 / problem.cost_model(grid[i - 1]) + 1.0 / problem.cost_model(grid[i]));
  }
  for (auto& c : cdf) c /= cdf.back();

  Dataset data;
  for (int i = 0; i < n; ++i) {
    Vector x(static_cast<std::size_t>(problem.input_dim));
    for (auto& v : x) v = u01(rng);
    double s = 1.0;
    if (mode == InitMode::cost_aware) {
      const double u = u01(rng);
      const auto hi = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (hi >= cdf.size()) {
        s = 1.0;
      } else {
        const std::size_t lo = hi - 1;
        const double w = (u - cdf[lo]) / (cdf[hi] - cdf[lo]);
        s = std::clamp(grid[lo] + w * (grid[hi] - grid[lo]), 0.0, 1.0);
      }
    }
    data.append(observe(problem, std::move(x), s, 0));
  }
  return data;
}

Candidate maximize_acquisition(const std::function<double(std::span<const double>)>& score, const Bounds& bounds,
                               int pool, int restarts, std::uint64_t seed) {
  if (restarts < 1 || pool < restarts) throw std::invalid_argument("need pool >= restarts >= 1");
  const std::size_t dim = bounds.lower.size();
  if (bounds.upper.size() != dim || dim == 0) throw std::invalid_argument("invalid bounds");

  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Candidate> scored;
  scored.reserve(static_cast<std::size_t>(pool));
  for (int i = 0; i < pool; ++i) {
    Vector x(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = bounds.lower[d] + u01(rng) * (bounds.upper[d] - bounds.lower[d]);
    const double v = score(x);
    if (std::isfinite(v)) scored.push_back({std::move(x), v});
  }
  if (scored.empty()) throw NumericError("acquisition function is non-finite on the entire candidate pool");
  std::stable_sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  Candidate best = scored.front();
  const auto n_refine = std::min(static_cast<std::size_t>(restarts), scored.size());
  for (std::size_t r = 0; r < n_refine; ++r) {
    Candidate cur = scored[r];
    double step = 0.1;
    int evaluations = 0;
    while (step >= kMinStep && evaluations < kMaxRefineEvaluations) {
      bool improved = false;
      for (std::size_t d = 0; d < dim && !improved; ++d) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = cur.point;
          const double range = bounds.upper[d] - bounds.lower[d];
          trial[d] = std::clamp(trial[d] + sign * step * range, bounds.lower[d], bounds.upper[d]);
          if (trial[d] == cur.point[d]) continue;
          const double v = score(trial);
          ++evaluations;
          if (std::isfinite(v) && v > cur.value) {
            cur = {std::move(trial), v};
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur.value > best.value) best = std::move(cur);
  }
  return best;
}

std::vector<gp::GpModel> fit_objectives(const Dataset& data, int gp_restarts, std::uint64_t seed,
                                        const std::vector<gp::KernelParams>* warm) {
  std::vector<gp::GpModel> models;
  const std::size_t k = data.objective_count();
  models.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    gp::FitConfig cfg;
    cfg.restarts = gp_restarts;
    cfg.seed = derive_seed(seed, {j});
    if (warm && j < warm->size()) cfg.warm_start = (*warm)[j];
    models.push_back(gp::fit(data, static_cast<int>(j), cfg));
  }
  return models;
}

std::vector<gp::GpModel> condition_objectives(const Dataset& data, const std::vector<gp::KernelParams>& params) {
  std::vector<gp::GpModel> models;
  const Eigen::MatrixXd x = gp::joint_inputs(data);
  for (std::size_t j = 0; j < params.size(); ++j) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) y[static_cast<Eigen::Index>(i)] = data.observations[i].y_normalized[j];
    const double offset = y.mean();
    const double var = (y.array() - offset).square().mean();
    const double scale = var > 1e-24 ? std::sqrt(var) : 1.0;
    models.push_back(gp::GpModel::condition(x, (y.array() - offset) / scale, params[j], offset, scale));
  }
  return models;
}

TrialRecord run_momf1(const problems::Problem& problem, const LoopConfig& config) {
  if (config.algorithm != Algorithm::momf1) throw std::invalid_argument("run_momf1 needs algorithm momf1");
  const acq::FidelityObjective fid{config.fidelity};
  const auto k = static_cast<std::size_t>(problem.objective_count);
  const auto d = static_cast<std::size_t>(problem.input_dim);

  auto propose = [&](const std::vector<gp::GpModel>& models, const Dataset& data, int it) {
    const auto uit = static_cast<std::uint64_t>(it);
    std::vector<Vector> augmented;
    augmented.reserve(data.size());
    for (const auto& obs : data.observations) {
      Vector p = obs.y_normalized;
      p.push_back(acq::fidelity_value(fid, obs.s));
      augmented.push_back(std::move(p));
    }
    const auto front = pareto::ParetoFront::clipped(augmented, Vector(k + 1, 0.0));
    const auto samples = acq::McSampleSet::generate(config.mc_samples, static_cast<int>(k + 1),
                                                    derive_seed(config.seed, {stream::kMcSamples, uit}));
    auto score = [&](std::span<const double> z) {
      return acq::momf_score(models, z.first(d), z[d], front, fid, problem.cost_model, samples);
    };
    Candidate best = maximize_acquisition(score, Bounds::unit(d + 1), config.candidate_pool, config.restarts,
                                          derive_seed(config.seed, {stream::kAcqPool, uit}));
    const double s = best.point.back();
    best.point.pop_back();
    return std::pair{std::move(best), s};
  };
  return run_loop(problem, config, problem.cost_model(0.0), propose);
}

TrialRecord run_momf2(const problems::Problem& problem, const LoopConfig& config, const FidelitySelector& selector) {
  if (config.algorithm != Algorithm::momf2) throw std::invalid_argument("run_momf2 needs algorithm momf2");
  std::optional<gp::KernelParams> scalar_warm;

  auto propose = [&](const std::vector<gp::GpModel>& models, const Dataset& data, int it) {
    const auto uit = static_cast<std::uint64_t>(it);
    Candidate next = maximize_target_ehvi(models, data, problem, config, uit);
    if (selector) {
      const double s = selector(next.point, data, static_cast<std::size_t>(it));
      return std::pair{std::move(next), s};
    }

    // Equal-weight scalarization of the normalized objectives, modelled by its own GP.
    Eigen::VectorXd target(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& y = data.observations[i].y_normalized;
      target[static_cast<Eigen::Index>(i)] = std::accumulate(y.begin(), y.end(), 0.0);
    }
    gp::FitConfig cfg;
    cfg.restarts = config.gp_restarts;
    cfg.seed = derive_seed(config.seed, {stream::kGpFit, uit, 0xff});
    cfg.warm_start = scalar_warm;
    const gp::GpModel scalar = gp::fit(gp::joint_inputs(data), target, cfg);
    scalar_warm = scalar.params();

    const acq::ScalarizedModel view{{&scalar}, {1.0}};
    const auto y_star = acq::sample_max_values(view, config.mes_samples, derive_seed(config.seed, {stream::kMaxValues, uit}));
    auto score = [&](std::span<const double> s) {
      return acq::mf_mes(view, next.point, s[0], problem.cost_model, y_star);
    };
    const Candidate fid = maximize_acquisition(score, Bounds::unit(1), std::min(config.candidate_pool, kFidelityPool),
                                               std::min(config.restarts, kFidelityRestarts),
                                               derive_seed(config.seed, {stream::kFidelityPool, uit}));
    return std::pair{std::move(next), fid.point[0]};
  };
  return run_loop(problem, config, problem.cost_model(0.0), propose);
}

TrialRecord run_sf_ehvi(const problems::Problem& problem, const LoopConfig& config) {
  if (config.algorithm != Algorithm::sf_ehvi) throw std::invalid_argument("run_sf_ehvi needs algorithm sf-ehvi");
  auto propose = [&](const std::vector<gp::GpModel>& models, const Dataset& data, int it) {
    return std::pair{maximize_target_ehvi(models, data, problem, config, static_cast<std::uint64_t>(it)), 1.0};
  };
  return run_loop(problem, config, problem.cost_model(1.0), propose);
}

TrialRecord run_trial(const problems::Problem& problem, const LoopConfig& config) {
  switch (config.algorithm) {
    case Algorithm::momf1: return run_momf1(problem, config);
    case Algorithm::momf2: return run_momf2(problem, config);
    case Algorithm::sf_ehvi: return run_sf_ehvi(problem, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace momf::engine
