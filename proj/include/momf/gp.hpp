#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "momf/types.hpp"

namespace momf::gp {

/// Matern 5/2 kernel hyperparameters. The lengthscale vector covers every
/// input coordinate including the trailing fidelity coordinate.
struct KernelParams {
  Eigen::VectorXd lengthscales;
  double signal_variance = 1.0;
  double noise_variance = 0.0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;

  [[nodiscard]] double stddev() const;
};

inline constexpr double kJitter = 1e-6;
inline constexpr double kFallbackJitter = 1e-4;

/// signal_variance * (1 + sqrt5 r + 5 r^2 / 3) * exp(-sqrt5 r) where r is the
/// lengthscale-scaled Euclidean distance between a and b.
double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& params);

/// Zero-mean GP conditioned on a fixed training set. Immutable once built;
/// concurrent reads are safe.
///
/// Targets may be stored standardized: predictions are mapped back through
/// `target_offset + target_scale * f`. Models built with `condition` default to
/// the identity map.
class GpModel {
 public:
  /// Builds the Cholesky factor of K + (noise + jitter) I, retrying once with
  /// the fallback jitter. Throws NumericError if both attempts fail.
  static GpModel condition(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelParams params,
                           double target_offset = 0.0, double target_scale = 1.0);

  [[nodiscard]] Posterior posterior(std::span<const double> query) const;
  [[nodiscard]] double posterior_mean(std::span<const double> query) const;
  /// Posterior covariance between the latent values at a and b.
  [[nodiscard]] double posterior_covariance(std::span<const double> a, std::span<const double> b) const;

  /// Evidence of the (standardized) training targets under the kernel.
  [[nodiscard]] double log_marginal_likelihood() const;

  [[nodiscard]] const KernelParams& params() const { return params_; }
  [[nodiscard]] const Eigen::MatrixXd& inputs() const { return inputs_; }
  [[nodiscard]] const Eigen::VectorXd& targets() const { return targets_; }
  [[nodiscard]] const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  [[nodiscard]] const Eigen::VectorXd& alpha() const { return alpha_; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] double target_offset() const { return offset_; }
  [[nodiscard]] double target_scale() const { return scale_; }
  [[nodiscard]] Eigen::Index size() const { return inputs_.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return inputs_.cols(); }

 private:
  GpModel() = default;
  Eigen::VectorXd cross_covariance(std::span<const double> query) const;
  void check_query(std::span<const double> query) const;

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  KernelParams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = kJitter;
  double offset_ = 0.0;
  double scale_ = 1.0;
};

struct FitConfig {
  int restarts = 8;
  int max_evaluations = 200;        // per simplex run
  std::uint64_t seed = 0;
  std::optional<KernelParams> warm_start;  // used as the first start when present
  std::optional<double> fixed_noise;       // skip noise fitting
  bool standardize = true;

  // search box (natural units)
  double min_lengthscale = 0.01;
  double max_lengthscale = 10.0;
  double min_signal_variance = 0.01;
  double max_signal_variance = 100.0;
  double min_noise_variance = 1e-8;
  double max_noise_variance = 1e-2;
};

/// Maximizes the log marginal likelihood over kernel hyperparameters with
/// multi-start Nelder-Mead in log space, then conditions on the data.
/// Throws std::invalid_argument for empty data and DataError for non-finite
/// targets.
GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitConfig& config);

/// Fits objective `objective_index` (normalized values) over the joint (x, s) space.
GpModel fit(const Dataset& dataset, int objective_index, const FitConfig& config);

/// Rows of [x, s] for every observation.
Eigen::MatrixXd joint_inputs(const Dataset& dataset);

/// Point (x, s) in the joint input-fidelity space.
Vector joint_point(std::span<const double> x, double s);

}  // namespace momf::gp
