#include "momf/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/sobol.hpp>

#include "momf/normal.hpp"
#include "momf/rng.hpp"

namespace momf::acq {

double expected_improvement(const Posterior& p, double best) {
  return normal::expected_excess(p.mean, p.stddev(), best);
}

double ucb(const Posterior& p, double kappa) { return p.mean + kappa * p.stddev(); }

Posterior ScalarizedModel::posterior(std::span<const double> query) const {
  Posterior out;
  for (std::size_t j = 0; j < models.size(); ++j) {
    const Posterior p = models[j]->posterior(query);
    out.mean += weights[j] * p.mean;
    out.variance += weights[j] * weights[j] * p.variance;
  }
  return out;
}

double ScalarizedModel::covariance(std::span<const double> a, std::span<const double> b) const {
  double c = 0.0;
  for (std::size_t j = 0; j < models.size(); ++j) c += weights[j] * weights[j] * models[j]->posterior_covariance(a, b);
  return c;
}

Eigen::Index ScalarizedModel::dim() const { return models.empty() ? 0 : models.front()->dim(); }

std::vector<double> sample_max_values(const ScalarizedModel& model, int n_samples, std::uint64_t seed, int grid_size) {
  if (n_samples < 1) throw std::invalid_argument("need at least one max-value sample");
  if (model.models.empty() || model.models.size() != model.weights.size())
    throw std::invalid_argument("scalarized model needs one weight per model");

  const auto dim = static_cast<std::size_t>(model.dim());
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<double> mu(static_cast<std::size_t>(grid_size)), sd(mu.size());
  Vector q(dim, 1.0);  // last coordinate is the fidelity, pinned to 1
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t d = 0; d + 1 < dim; ++d) q[d] = u01(rng);
    const Posterior p = model.posterior(q);
    mu[i] = p.mean;
    sd[i] = p.stddev();
  }
  const double best_mean = *std::max_element(mu.begin(), mu.end());
  const double max_sd = *std::max_element(sd.begin(), sd.end());
  if (!(max_sd > 1e-12)) return std::vector<double>(static_cast<std::size_t>(n_samples), best_mean);

  auto log_cdf_max = [&](double y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (sd[i] > 1e-12) {
        acc += normal::log_cdf((y - mu[i]) / sd[i]);
      } else if (y < mu[i]) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    return acc;
  };
  auto quantile = [&](double prob) {
    const double target = std::log(prob);
    double lo = best_mean - 6.0 * max_sd, hi = best_mean + 10.0 * max_sd;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_cdf_max(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  const double y25 = quantile(0.25), y50 = quantile(0.5), y75 = quantile(0.75);
  const double scale = (y75 - y25) / (std::log(-std::log(0.25)) - std::log(-std::log(0.75)));
  const double location = y50 + scale * std::log(-std::log(0.5));

  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (auto& v : out) {
    if (!(scale > 1e-12)) {
      v = std::max(location, best_mean);
      continue;
    }
    double u = u01(rng);
    u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    v = std::max(location - scale * std::log(-std::log(u)), best_mean);
  }
  return out;
}

double mes(const Posterior& p, std::span<const double> max_samples) {
  if (max_samples.empty()) throw std::invalid_argument("mes needs at least one max-value sample");
  const double sigma = std::max(p.stddev(), 1e-6);
  double acc = 0.0;
  for (double y_star : max_samples) {
    const double gamma = (y_star - p.mean) / sigma;
    const double v = 0.5 * gamma * normal::pdf_over_cdf(gamma) - normal::log_cdf(gamma);
    acc += std::max(v, 0.0);
  }
  return acc / static_cast<double>(max_samples.size());
}

double mf_mes(const ScalarizedModel& model, std::span<const double> x, double s, const CostModel& cost_model,
              std::span<const double> max_samples) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
  const double c = cost_model(s);
  if (!(c > 0.0)) throw NumericError("evaluation cost must be positive");

  const Vector at_s = gp::joint_point(x, s);
  const Posterior p = model.posterior(at_s);
  double rho2 = 1.0;
  if (s < 1.0) {
    const Vector at_target = gp::joint_point(x, 1.0);
    const double var_target = model.posterior(at_target).variance;
    if (p.variance > 1e-14 && var_target > 1e-14) {
      const double cov = model.covariance(at_s, at_target);
      rho2 = std::clamp(cov * cov / (p.variance * var_target), 0.0, 1.0);
    } else {
      rho2 = 0.0;
    }
  }
  return mes(p, max_samples) * rho2 / c;
}

McSampleSet McSampleSet::generate(int samples, int dims, std::uint64_t seed) {
  if (samples < 0 || dims < 1) throw std::invalid_argument("invalid Monte-Carlo sample shape");
  McSampleSet set;
  set.seed = seed;
  set.base.resize(samples, dims);
  // Sobol points under a random shift modulo 1, mapped through the normal quantile.
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(dims));
  for (auto& v : shift) v = u(rng);
  boost::random::sobol_engine<std::uint32_t, 32> sobol(static_cast<std::size_t>(dims));
  const boost::math::normal_distribution<double> standard;
  constexpr double scale = 1.0 / 4294967296.0;
  constexpr double edge = 1e-12;
  for (Eigen::Index i = 0; i < set.base.rows(); ++i) {
    for (Eigen::Index j = 0; j < set.base.cols(); ++j) {
      double p = static_cast<double>(sobol()) * scale + shift[static_cast<std::size_t>(j)];
      p = std::clamp(p - std::floor(p), edge, 1.0 - edge);
      set.base(i, j) = boost::math::quantile(standard, p);
    }
  }
  return set;
}

double ehvi_mc(std::span<const Posterior> posteriors, const pareto::ParetoFront& front, const McSampleSet& samples) {
  if (samples.size() == 0) throw std::invalid_argument("ehvi_mc needs at least one base sample");
  const std::size_t k = posteriors.size();
  if (k != front.dim()) throw std::invalid_argument("posterior count does not match front dimension");
  if (static_cast<std::size_t>(samples.base.cols()) < k) throw std::invalid_argument("too few sample columns");

  Vector mu(k), sd(k), y(k);
  for (std::size_t j = 0; j < k; ++j) {
    mu[j] = posteriors[j].mean;
    sd[j] = posteriors[j].stddev();
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) y[j] = mu[j] + sd[j] * samples.base(i, static_cast<Eigen::Index>(j));
    acc += pareto::hvi(front, y);
  }
  return acc / static_cast<double>(samples.size());
}

double ehvi_exact_2d(std::span<const Posterior> posteriors, const pareto::ParetoFront& front) {
  if (posteriors.size() != 2 || front.dim() != 2) throw std::invalid_argument("ehvi_exact_2d requires two objectives");
  const double m1 = posteriors[0].mean, s1 = posteriors[0].stddev();
  const double m2 = posteriors[1].mean, s2 = posteriors[1].stddev();
  const auto& q = front.points();  // ascending in the first objective
  const auto& r = front.reference();
  const std::size_t n = q.size();

  // Strip i spans [L, U) in objective 1 and lies above level l in objective 2.
  double total = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double lower = i == 0 ? r[0] : q[i - 1][0];
    const double level = i < n ? q[i][1] : r[1];
    double e1 = normal::expected_excess(m1, s1, lower);
    if (i < n) e1 -= normal::expected_excess(m1, s1, q[i][0]);
    total += std::max(e1, 0.0) * normal::expected_excess(m2, s2, level);
  }
  return total;
}

FidelityKind parse_fidelity_kind(std::string_view name) {
  if (name == "linear") return FidelityKind::linear;
  if (name == "tanh") return FidelityKind::tanh;
  throw std::invalid_argument("unknown fidelity objective '" + std::string(name) + "'");
}

std::string_view to_string(FidelityKind kind) { return kind == FidelityKind::linear ? "linear" : "tanh"; }

double fidelity_value(const FidelityObjective& objective, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
  return objective.kind == FidelityKind::linear ? s : std::tanh(s);
}

double momf_score(std::span<const GpModel> models, std::span<const double> x, double s,
                  const pareto::ParetoFront& augmented_front, const FidelityObjective& objective,
                  const CostModel& cost_model, const McSampleSet& samples) {
  if (augmented_front.dim() != models.size() + 1)
    throw std::invalid_argument("augmented front must have one more coordinate than there are models");
  const double c = cost_model(s);
  if (!(c > 0.0)) throw NumericError("evaluation cost must be positive");
  const Vector q = gp::joint_point(x, s);
  std::vector<Posterior> post;
  post.reserve(models.size() + 1);
  for (const auto& m : models) post.push_back(m.posterior(q));
  post.push_back({fidelity_value(objective, s), 0.0});
  return ehvi_mc(post, augmented_front, samples) / c;
}

}  // namespace momf::acq
