#include "momf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "momf/pareto.hpp"
#include "momf/rng.hpp"

namespace momf::bench {

namespace {

// Order-independent mean: sum in sorted order.
double stable_mean(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

bool trace_less(const HvTrace& a, const HvTrace& b) {
  if (a.trial != b.trial) return a.trial < b.trial;
  return std::lexicographical_compare(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                                      [](const TracePoint& p, const TracePoint& q) {
                                        return p.cost != q.cost ? p.cost < q.cost : p.hv_fraction < q.hv_fraction;
                                      });
}

}  // namespace

HvTrace hv_trace(const engine::TrialRecord& trial, const problems::Problem& problem,
                 const problems::OracleFront& oracle, int test_points, std::uint64_t seed) {
  if (trial.data.empty()) throw std::invalid_argument("cannot trace an empty trial");
  if (!(oracle.hypervolume > 0.0)) throw std::invalid_argument("oracle hypervolume must be positive");

  HvTrace out;
  out.algorithm = std::string(engine::to_string(trial.algorithm));

  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Vector> queries(static_cast<std::size_t>(test_points));
  for (auto& q : queries) {
    q.resize(static_cast<std::size_t>(problem.input_dim) + 1);
    for (std::size_t d = 0; d + 1 < q.size(); ++d) q[d] = u01(rng);
    q.back() = 1.0;
  }

  const std::size_t k = static_cast<std::size_t>(problem.objective_count);
  const Vector reference(k, 0.0);
  std::vector<Vector> predicted(queries.size(), Vector(k));
  for (std::size_t n = kFirstTracedObservation; n <= trial.data.size(); ++n) {
    const Dataset prefix = trial.data.prefix(n);
    std::vector<gp::GpModel> models;
    if (auto it = trial.fitted_params.find(n); it != trial.fitted_params.end()) {
      models = engine::condition_objectives(prefix, it->second);
    } else {
      models = engine::fit_objectives(prefix, gp::FitConfig{}.restarts, derive_seed(seed, {stream::kTrace, n}));
    }
    for (std::size_t i = 0; i < queries.size(); ++i)
      for (std::size_t j = 0; j < k; ++j) predicted[i][j] = models[j].posterior_mean(queries[i]);
    const auto front = pareto::ParetoFront::clipped(predicted, reference);
    const double fraction = pareto::hypervolume(front) / oracle.hypervolume;
    out.points.push_back({prefix.total_cost(), std::clamp(fraction, 0.0, kMaxHvFraction)});
  }
  return out;
}

FidelityStats fidelity_stats(const Dataset& data, int bins) {
  if (bins < 2) throw std::invalid_argument("fidelity histogram needs at least two bins");
  FidelityStats st;
  st.histogram.assign(static_cast<std::size_t>(bins), 0);
  std::vector<double> selected;
  for (const auto& obs : data.observations) {
    if (obs.iteration < 1) continue;
    selected.push_back(obs.s);
    const auto b = std::min(static_cast<int>(obs.s * bins), bins - 1);
    ++st.histogram[static_cast<std::size_t>(std::max(b, 0))];
  }
  st.count = selected.size();
  if (!selected.empty()) {
    st.mean = std::accumulate(selected.begin(), selected.end(), 0.0) / static_cast<double>(selected.size());
    const auto outer = std::count_if(selected.begin(), selected.end(), [](double s) { return s <= 0.1 || s >= 0.9; });
    st.outer_fraction = static_cast<double>(outer) / static_cast<double>(selected.size());
  }
  return st;
}

double value_at(const HvTrace& trace, double cost) {
  auto it = std::upper_bound(trace.points.begin(), trace.points.end(), cost,
                             [](double c, const TracePoint& p) { return c < p.cost; });
  if (it == trace.points.begin()) return 0.0;
  return std::prev(it)->hv_fraction;
}

BenchReport aggregate(const std::map<std::string, std::vector<HvTrace>>& traces, double threshold,
                      const std::string& baseline) {
  if (!(threshold >= 0.0 && threshold <= kMaxHvFraction)) throw std::invalid_argument("threshold out of range");
  BenchReport report;
  report.threshold = threshold;
  report.baseline = baseline;

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [name, list] : traces) {
    if (list.empty()) throw std::invalid_argument("algorithm '" + name + "' has no traces");
    for (const auto& t : list) {
      if (t.points.empty()) continue;
      lo = std::min(lo, t.points.front().cost);
      hi = std::max(hi, t.points.back().cost);
    }
  }
  if (std::isfinite(lo) && lo > 0.0) {
    if (hi <= lo) {
      report.cost_grid = {lo};
    } else {
      report.cost_grid.resize(kCostGridSize);
      const double a = std::log(lo), b = std::log(hi);
      for (int g = 0; g < kCostGridSize; ++g)
        report.cost_grid[static_cast<std::size_t>(g)] = std::exp(a + (b - a) * g / (kCostGridSize - 1));
      report.cost_grid.front() = lo;
      report.cost_grid.back() = hi;
    }
  }

  for (const auto& [name, unsorted] : traces) {
    std::vector<HvTrace> list = unsorted;
    std::sort(list.begin(), list.end(), trace_less);
    AlgorithmSummary sum;

    sum.mean_curve.reserve(report.cost_grid.size());
    for (double c : report.cost_grid) {
      std::vector<double> vals;
      for (const auto& t : list) vals.push_back(value_at(t, c));
      sum.mean_curve.push_back(stable_mean(std::move(vals)));
    }
    for (std::size_t g = 0; g < sum.mean_curve.size(); ++g) {
      if (sum.mean_curve[g] >= threshold) {
        sum.curve_cost_to_threshold = report.cost_grid[g];
        break;
      }
    }

    std::vector<double> reached, finals;
    for (const auto& t : list) {
      std::optional<double> hit;
      for (const auto& p : t.points) {
        if (p.hv_fraction >= threshold) {
          hit = p.cost;
          break;
        }
      }
      sum.trial_cost_to_threshold.push_back(hit);
      if (hit) reached.push_back(*hit);
      if (!t.points.empty()) finals.push_back(t.points.back().hv_fraction);
    }
    sum.trials_reached = static_cast<int>(reached.size());
    if (!reached.empty()) sum.mean_cost_to_threshold = stable_mean(reached);
    if (sum.trials_reached < static_cast<int>(list.size()))
      report.diagnostics.push_back(name + ": " + std::to_string(list.size() - reached.size()) + " of " +
                                   std::to_string(list.size()) + " trials did not reach the threshold");
    sum.final_mean_hv = stable_mean(finals);
    report.algorithms.emplace(name, std::move(sum));
  }

  const auto base = report.algorithms.find(baseline);
  if (base == report.algorithms.end()) {
    report.diagnostics.push_back("baseline '" + baseline + "' not present; no reduction factors");
    return report;
  }
  for (const auto& [name, sum] : report.algorithms) {
    if (base->second.mean_cost_to_threshold && sum.mean_cost_to_threshold) {
      report.reduction_factors[name] = *base->second.mean_cost_to_threshold / *sum.mean_cost_to_threshold;
    } else {
      report.diagnostics.push_back(name + ": cost-to-threshold not reached (" +
                                   (sum.mean_cost_to_threshold ? baseline : name) + "); factor omitted");
    }
    if (base->second.curve_cost_to_threshold && sum.curve_cost_to_threshold)
      report.curve_reduction_factors[name] = *base->second.curve_cost_to_threshold / *sum.curve_cost_to_threshold;
  }
  return report;
}

}  // namespace momf::bench
