#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "momf/cost_model.hpp"
#include "momf/gp.hpp"
#include "momf/pareto.hpp"

namespace momf::acq {

using gp::GpModel;
using gp::Posterior;

/// Closed-form expected improvement over `best`; max(mu - best, 0) when the
/// posterior is degenerate.
double expected_improvement(const Posterior& p, double best);

/// mu + kappa * sigma (maximization convention).
double ucb(const Posterior& p, double kappa);

/// Weighted sum of independent per-objective GPs, viewed as one GP.
struct ScalarizedModel {
  std::vector<const GpModel*> models;
  std::vector<double> weights;

  [[nodiscard]] Posterior posterior(std::span<const double> query) const;
  [[nodiscard]] double covariance(std::span<const double> a, std::span<const double> b) const;
  [[nodiscard]] Eigen::Index dim() const;
};

inline constexpr int kMaxValueGrid = 1000;

/// Samples of the maximum of the scalarized objective at fidelity 1, drawn
/// from a Gumbel fit to prod_i Phi((y - mu_i) / sigma_i) over a random grid of
/// inputs. Samples never fall below the best grid mean.
std::vector<double> sample_max_values(const ScalarizedModel& model, int n_samples, std::uint64_t seed,
                                      int grid_size = kMaxValueGrid);

/// Max-value entropy search: mean over y* of gamma phi(gamma) / (2 Phi(gamma)) - log Phi(gamma).
/// Throws std::invalid_argument on an empty sample list.
double mes(const Posterior& p, std::span<const double> max_samples);

/// MES at (x, s), attenuated by the squared posterior correlation between the
/// latent values at (x, s) and (x, 1), per unit cost of fidelity s.
double mf_mes(const ScalarizedModel& model, std::span<const double> x, double s, const CostModel& cost_model,
              std::span<const double> max_samples);

/// Fixed standard-normal base samples for Monte-Carlo EHVI (rows = samples).
struct McSampleSet {
  Eigen::MatrixXd base;
  std::uint64_t seed = 0;

  static McSampleSet generate(int samples, int dims, std::uint64_t seed);
  [[nodiscard]] Eigen::Index size() const { return base.rows(); }
};

/// Mean HVI over y = mu + sigma * z for every base sample z.
double ehvi_mc(std::span<const Posterior> posteriors, const pareto::ParetoFront& front, const McSampleSet& samples);

/// Exact 2-objective EHVI via strip decomposition of the nondominated region.
double ehvi_exact_2d(std::span<const Posterior> posteriors, const pareto::ParetoFront& front);

enum class FidelityKind { linear, tanh };

struct FidelityObjective {
  FidelityKind kind = FidelityKind::linear;
};

FidelityKind parse_fidelity_kind(std::string_view name);
std::string_view to_string(FidelityKind kind);

/// s or tanh(s). Throws std::invalid_argument for s outside [0, 1].
double fidelity_value(const FidelityObjective& objective, double s);

/// Cost-penalized EHVI over the objectives augmented with the fidelity
/// objective; the fidelity coordinate is deterministic.
double momf_score(std::span<const GpModel> models, std::span<const double> x, double s,
                  const pareto::ParetoFront& augmented_front, const FidelityObjective& objective,
                  const CostModel& cost_model, const McSampleSet& samples);

}  // namespace momf::acq
