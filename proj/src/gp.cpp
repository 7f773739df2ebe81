#include "momf/gp.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "momf/nelder_mead.hpp"
#include "momf/rng.hpp"

namespace momf::gp {

namespace {

constexpr double kSqrt5 = 2.23606797749979;

inline double matern52_from_sq(double r2, double signal_variance) {
  const double r = std::sqrt(r2);
  return signal_variance * (1.0 + kSqrt5 * r + 5.0 * r2 / 3.0) * std::exp(-kSqrt5 * r);
}

bool try_factor(Eigen::MatrixXd k, double diag, Eigen::LLT<Eigen::MatrixXd>& llt) {
  k.diagonal().array() += diag;
  llt.compute(k);
  return llt.info() == Eigen::Success;
}

// Pairwise squared coordinate differences, reused across every likelihood
// evaluation of a fit.
class Evidence {
 public:
  Evidence(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets)
      : n_(inputs.rows()), dim_(inputs.cols()), targets_(targets), kernel_(n_, n_) {
    diffs_.resize(static_cast<std::size_t>(n_ * (n_ - 1) / 2 * dim_));
    std::size_t p = 0;
    for (Eigen::Index i = 1; i < n_; ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        for (Eigen::Index d = 0; d < dim_; ++d) {
          const double t = inputs(i, d) - inputs(j, d);
          diffs_[p++] = t * t;
        }
  }

  double operator()(const Eigen::VectorXd& lengthscales, double signal_variance, double noise) {
    Eigen::VectorXd inv = lengthscales.array().square().inverse();
    std::size_t p = 0;
    for (Eigen::Index i = 1; i < n_; ++i)
      for (Eigen::Index j = 0; j < i; ++j) {
        double r2 = 0.0;
        for (Eigen::Index d = 0; d < dim_; ++d) r2 += diffs_[p++] * inv[d];
        kernel_(i, j) = matern52_from_sq(r2, signal_variance);
      }
    for (Eigen::Index i = 0; i < n_; ++i) kernel_(i, i) = signal_variance + noise + kJitter;
    llt_.compute(kernel_);
    if (llt_.info() != Eigen::Success) {
      kernel_.diagonal().array() += kFallbackJitter - kJitter;
      llt_.compute(kernel_);
      if (llt_.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    }
    const Eigen::VectorXd alpha = llt_.solve(targets_);
    const auto& l = llt_.matrixLLT();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) logdet += std::log(l(i, i));
    return -0.5 * targets_.dot(alpha) - logdet - 0.5 * static_cast<double>(n_) * std::log(2.0 * std::numbers::pi);
  }

 private:
  Eigen::Index n_, dim_;
  Eigen::VectorXd targets_;
  std::vector<double> diffs_;
  Eigen::MatrixXd kernel_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace

void KernelParams::validate() const {
  if (lengthscales.size() == 0) throw std::invalid_argument("kernel needs at least one lengthscale");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
    if (!(lengthscales[i] > 0.0)) throw std::invalid_argument("lengthscales must be positive");
  if (!(signal_variance > 0.0)) throw std::invalid_argument("signal_variance must be positive");
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise_variance must be non-negative");
}

double Posterior::stddev() const { return variance > 0.0 ? std::sqrt(variance) : 0.0; }

double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& params) {
  const auto d = static_cast<std::size_t>(params.lengthscales.size());
  if (a.size() != d || b.size() != d)
    throw std::invalid_argument("matern52: point dimension does not match lengthscales");
  double r2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = (a[i] - b[i]) / params.lengthscales[static_cast<Eigen::Index>(i)];
    r2 += t * t;
  }
  return matern52_from_sq(r2, params.signal_variance);
}

GpModel GpModel::condition(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelParams params,
                           double target_offset, double target_scale) {
  params.validate();
  if (inputs.rows() == 0) throw std::invalid_argument("GP needs at least one training point");
  if (inputs.rows() != targets.size()) throw std::invalid_argument("inputs and targets differ in length");
  if (inputs.cols() != params.lengthscales.size())
    throw std::invalid_argument("input dimension does not match lengthscales");
  if (!(target_scale > 0.0)) throw std::invalid_argument("target_scale must be positive");

  GpModel m;
  m.inputs_ = std::move(inputs);
  m.targets_ = std::move(targets);
  m.params_ = std::move(params);
  m.offset_ = target_offset;
  m.scale_ = target_scale;

  const Eigen::Index n = m.inputs_.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Eigen::VectorXd a = m.inputs_.row(i), b = m.inputs_.row(j);
      k(i, j) = k(j, i) = matern52(std::span(a.data(), a.size()), std::span(b.data(), b.size()), m.params_);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt;
  m.jitter_ = kJitter;
  if (!try_factor(k, m.params_.noise_variance + m.jitter_, llt)) {
    m.jitter_ = kFallbackJitter;
    if (!try_factor(k, m.params_.noise_variance + m.jitter_, llt))
      throw NumericError("kernel matrix is not positive definite even with fallback jitter");
  }
  m.chol_ = llt.matrixL();
  m.alpha_ = llt.solve(m.targets_);
  // Noiseless data: refine alpha toward K alpha = y so the jitter does not bias interpolation.
  if (m.params_.noise_variance == 0.0)
    for (int step = 0; step < 3; ++step) m.alpha_ += llt.solve(m.targets_ - k * m.alpha_);
  return m;
}

void GpModel::check_query(std::span<const double> query) const {
  if (static_cast<Eigen::Index>(query.size()) != dim())
    throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                " does not match model dimension " + std::to_string(dim()));
}

Eigen::VectorXd GpModel::cross_covariance(std::span<const double> query) const {
  const Eigen::Index n = size(), d = dim();
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double t = (inputs_(i, j) - query[static_cast<std::size_t>(j)]) / params_.lengthscales[j];
      r2 += t * t;
    }
    ks[i] = matern52_from_sq(r2, params_.signal_variance);
  }
  return ks;
}

Posterior GpModel::posterior(std::span<const double> query) const {
  check_query(query);
  const Eigen::VectorXd ks = cross_covariance(query);
  const double mean = ks.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(ks);
  const double var = std::max(params_.signal_variance - v.squaredNorm(), 0.0);
  return {offset_ + scale_ * mean, scale_ * scale_ * var};
}

double GpModel::posterior_mean(std::span<const double> query) const {
  check_query(query);
  return offset_ + scale_ * cross_covariance(query).dot(alpha_);
}

double GpModel::posterior_covariance(std::span<const double> a, std::span<const double> b) const {
  check_query(a);
  check_query(b);
  const Eigen::VectorXd va = chol_.triangularView<Eigen::Lower>().solve(cross_covariance(a));
  const Eigen::VectorXd vb = chol_.triangularView<Eigen::Lower>().solve(cross_covariance(b));
  return scale_ * scale_ * (matern52(a, b, params_) - va.dot(vb));
}

double GpModel::log_marginal_likelihood() const {
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double lii = chol_(i, i);
    if (!(lii > 0.0) || !std::isfinite(lii)) throw NumericError("singular Cholesky factor");
    logdet += std::log(lii);
  }
  return -0.5 * targets_.dot(alpha_) - logdet -
         0.5 * static_cast<double>(size()) * std::log(2.0 * std::numbers::pi);
}

GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitConfig& config) {
  if (inputs.rows() == 0 || targets.size() == 0) throw std::invalid_argument("cannot fit a GP to an empty dataset");
  if (inputs.rows() != targets.size()) throw std::invalid_argument("inputs and targets differ in length");
  for (Eigen::Index i = 0; i < targets.size(); ++i)
    if (!std::isfinite(targets[i])) throw DataError("non-finite training target at row " + std::to_string(i));
  if (!inputs.allFinite()) throw DataError("non-finite training input");

  double offset = 0.0, scale = 1.0;
  Eigen::VectorXd y = targets;
  if (config.standardize) {
    offset = targets.mean();
    const double var = (targets.array() - offset).square().mean();
    scale = var > 1e-24 ? std::sqrt(var) : 1.0;
    y = (targets.array() - offset) / scale;
  }

  const Eigen::Index dim = inputs.cols();
  const bool fit_noise = !config.fixed_noise.has_value();
  const auto nparams = static_cast<std::size_t>(dim + 1 + (fit_noise ? 1 : 0));
  const double lo_l = std::log(config.min_lengthscale), hi_l = std::log(config.max_lengthscale);
  const double lo_sv = std::log(config.min_signal_variance), hi_sv = std::log(config.max_signal_variance);
  const double lo_nv = std::log(config.min_noise_variance), hi_nv = std::log(config.max_noise_variance);

  auto unpack = [&](const std::vector<double>& theta) {
    KernelParams p;
    p.lengthscales.resize(dim);
    for (Eigen::Index d = 0; d < dim; ++d)
      p.lengthscales[d] = std::exp(std::clamp(theta[static_cast<std::size_t>(d)], lo_l, hi_l));
    p.signal_variance = std::exp(std::clamp(theta[static_cast<std::size_t>(dim)], lo_sv, hi_sv));
    p.noise_variance = fit_noise ? std::exp(std::clamp(theta[static_cast<std::size_t>(dim) + 1], lo_nv, hi_nv))
                                 : *config.fixed_noise;
    return p;
  };

  Evidence evidence(inputs, y);
  auto objective = [&](const std::vector<double>& theta) {
    // Penalize leaving the box so the simplex does not stall on a flat clamp.
    double excess = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const bool is_l = i < static_cast<std::size_t>(dim);
      const bool is_sv = i == static_cast<std::size_t>(dim);
      const double lo = is_l ? lo_l : (is_sv ? lo_sv : lo_nv);
      const double hi = is_l ? hi_l : (is_sv ? hi_sv : hi_nv);
      excess += std::max(0.0, lo - theta[i]) + std::max(0.0, theta[i] - hi);
    }
    const KernelParams p = unpack(theta);
    return -evidence(p.lengthscales, p.signal_variance, p.noise_variance) + excess;
  };

  Rng rng(config.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto start_point = [&](int restart) {
    std::vector<double> theta(nparams);
    if (restart == 0) {
      if (config.warm_start && config.warm_start->lengthscales.size() == dim) {
        for (Eigen::Index d = 0; d < dim; ++d) theta[static_cast<std::size_t>(d)] = std::log(config.warm_start->lengthscales[d]);
        theta[static_cast<std::size_t>(dim)] = std::log(config.warm_start->signal_variance);
        if (fit_noise) theta[static_cast<std::size_t>(dim) + 1] = std::log(std::max(config.warm_start->noise_variance, config.min_noise_variance));
      } else {
        for (Eigen::Index d = 0; d < dim; ++d) theta[static_cast<std::size_t>(d)] = std::log(0.3);
        theta[static_cast<std::size_t>(dim)] = 0.0;
        if (fit_noise) theta[static_cast<std::size_t>(dim) + 1] = std::log(1e-4);
      }
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const bool is_l = i < static_cast<std::size_t>(dim);
        const bool is_sv = i == static_cast<std::size_t>(dim);
        theta[i] = std::clamp(theta[i], is_l ? lo_l : (is_sv ? lo_sv : lo_nv), is_l ? hi_l : (is_sv ? hi_sv : hi_nv));
      }
      return theta;
    }
    // random starts: lengthscales in [0.05, 2], signal variance in [0.1, 10]
    for (Eigen::Index d = 0; d < dim; ++d)
      theta[static_cast<std::size_t>(d)] = std::log(0.05) + u01(rng) * (std::log(2.0) - std::log(0.05));
    theta[static_cast<std::size_t>(dim)] = std::log(0.1) + u01(rng) * (std::log(10.0) - std::log(0.1));
    if (fit_noise) theta[static_cast<std::size_t>(dim) + 1] = lo_nv + u01(rng) * (hi_nv - lo_nv);
    return theta;
  };

  std::vector<double> best_theta;
  double best_value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(config.restarts, 1); ++r) {
    auto res = detail::nelder_mead(objective, start_point(r), 1.0, config.max_evaluations);
    if (best_theta.empty() || res.value < best_value) {
      best_value = res.value;
      best_theta = std::move(res.x);
    }
  }
  return GpModel::condition(inputs, std::move(y), unpack(best_theta), offset, scale);
}

Eigen::MatrixXd joint_inputs(const Dataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  const auto d = static_cast<Eigen::Index>(dataset.input_dim());
  Eigen::MatrixXd x(n, d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = dataset.observations[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = obs.x[static_cast<std::size_t>(j)];
    x(i, d) = obs.s;
  }
  return x;
}

Vector joint_point(std::span<const double> x, double s) {
  Vector p(x.begin(), x.end());
  p.push_back(s);
  return p;
}

GpModel fit(const Dataset& dataset, int objective_index, const FitConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("cannot fit a GP to an empty dataset");
  if (objective_index < 0 || static_cast<std::size_t>(objective_index) >= dataset.objective_count())
    throw std::invalid_argument("objective index out of range");
  Eigen::MatrixXd x = joint_inputs(dataset);
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any())
    throw std::invalid_argument("training inputs must lie in the unit cube");
  Eigen::VectorXd y(static_cast<Eigen::Index>(dataset.size()));
  for (std::size_t i = 0; i < dataset.size(); ++i)
    y[static_cast<Eigen::Index>(i)] = dataset.observations[i].y_normalized[static_cast<std::size_t>(objective_index)];
  return fit(x, y, config);
}

}  // namespace momf::gp
