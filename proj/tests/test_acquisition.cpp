#include <random>

#include "doctest.h"
#include "momf/acquisition.hpp"
#include "oracles.hpp"

using namespace momf;
using namespace momf::acq;

namespace {

gp::GpModel toy_model(double fidelity_lengthscale, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(8, 2);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = u(rng);
    x(i, 1) = 1.0;
    y[i] = std::sin(4 * x(i, 0));
  }
  gp::KernelParams p;
  p.lengthscales = Eigen::Vector2d(0.3, fidelity_lengthscale);
  p.signal_variance = 1.0;
  return gp::GpModel::condition(x, y, p);
}

struct Instance {
  pareto::ParetoFront front{Vector{0, 0}};
  std::vector<Posterior> posteriors;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> pts;
  for (int i = 0; i < 4; ++i) {
    const double a = u(rng) * 1.5;
    pts.push_back({0.1 + std::cos(a), 0.1 + std::sin(a)});
  }
  Instance in;
  in.front = pareto::ParetoFront(pts, Vector{0, 0});
  const auto& anchor = in.front.points()[static_cast<std::size_t>(u(rng) * static_cast<double>(in.front.size()))];
  for (int j = 0; j < 2; ++j) in.posteriors.push_back({anchor[j] * (0.8 + 0.4 * u(rng)), std::pow(0.1 + 0.4 * u(rng), 2)});
  return in;
}

}  // namespace

TEST_CASE("expected improvement examples") {
  CHECK(expected_improvement({0.0, 1.0}, 0.0) == doctest::Approx(0.39894).epsilon(1e-4));
  CHECK(expected_improvement({1.5, 0.0}, 1.0) == doctest::Approx(0.5));
  CHECK(expected_improvement({-10.0, 0.01}, 0.0) < 1e-12);
}

TEST_CASE("expected improvement matches quadrature") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> mu(-2, 2), sd(0.05, 2), best(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const double m = mu(rng), s = sd(rng), b = best(rng);
    CHECK(std::abs(expected_improvement({m, s * s}, b) - oracle::ei_quadrature(m, s, b)) < 1e-6);
  }
}

TEST_CASE("ucb") {
  CHECK(ucb({1.0, 0.25}, 2.0) == doctest::Approx(2.0));
  CHECK(ucb({1.0, 0.25}, 0.0) == doctest::Approx(1.0));
  CHECK(ucb({1.0, 0.0}, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("mes") {
  CHECK(mes({1.0, 1.0}, std::vector<double>{1.0}) == doctest::Approx(0.6931).epsilon(1e-3));
  CHECK(mes({1.0, 0.25}, std::vector<double>{1.0 + 10 * 0.5}) < 1e-3);
  CHECK_THROWS_AS(mes({0, 1}, std::vector<double>{}), std::invalid_argument);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-5, 5), v(1e-4, 4);
  for (int i = 0; i < 10000; ++i) {
    const double val = mes({u(rng), v(rng)}, std::vector<double>{u(rng)});
    REQUIRE(std::isfinite(val));
    REQUIRE(val >= 0.0);
  }
  double prev = 1e300;
  for (double ystar = -3; ystar <= 6; ystar += 0.1) {
    const double val = mes({0.0, 1.0}, std::vector<double>{ystar});
    CHECK(val <= prev + 1e-12);
    prev = val;
  }
}

TEST_CASE("max-value samples") {
  const auto m = toy_model(0.5);
  ScalarizedModel s{{&m}, {1.0}};
  const auto a = sample_max_values(s, 10, 7);
  CHECK(a == sample_max_values(s, 10, 7));
  CHECK(a.size() == 10);

  Eigen::MatrixXd x(1, 2);
  x << 0.5, 1.0;
  Eigen::VectorXd y(1);
  y << 0.0;
  gp::KernelParams p;
  p.lengthscales = Eigen::Vector2d(1e6, 1e6);
  p.signal_variance = 1e-12;
  const auto flat = gp::GpModel::condition(x, y, p);
  ScalarizedModel zero{{&flat}, {1.0}};
  for (double v : sample_max_values(zero, 5, 1)) CHECK(std::abs(v) < 1e-4);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    double best = -1e300, max_sd = 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int g = 0; g < 1000; ++g) {
      const auto post = s.posterior(Vector{u(rng), 1.0});
      best = std::max(best, post.mean);
      max_sd = std::max(max_sd, post.stddev());
    }
    for (double v : sample_max_values(s, 10, seed)) CHECK(v >= best - 3 * max_sd);
  }
}

TEST_CASE("mf-mes") {
  const CostModel cost{4.8};
  const auto m = toy_model(2.0);
  ScalarizedModel s{{&m}, {1.0}};
  const auto ystar = sample_max_values(s, 10, 3);
  const Vector x{0.37};
  CHECK(mf_mes(s, x, 1.0, cost, ystar) == doctest::Approx(mes(s.posterior(Vector{0.37, 1.0}), ystar) / cost(1.0)));

  // Long fidelity lengthscale: s = 0 is strongly correlated with s = 1 and 120x cheaper.
  Eigen::MatrixXd far(1, 2);
  far << 0.95, 1.0;
  gp::KernelParams pc;
  pc.lengthscales = Eigen::Vector2d(0.3, 20.0);
  const auto corr = gp::GpModel::condition(far, Eigen::VectorXd::Constant(1, 0.5), pc);
  ScalarizedModel sc{{&corr}, {1.0}};
  const Vector x0{0.37, 0.0}, x1{0.37, 1.0};
  const double rho = sc.covariance(x0, x1) / std::sqrt(sc.posterior(x0).variance * sc.posterior(x1).variance);
  CHECK(rho >= 0.9);
  const auto ys = sample_max_values(sc, 10, 3);
  CHECK(mf_mes(sc, x, 0.0, cost, ys) > mf_mes(sc, x, 1.0, cost, ys));

  // Independent fidelities: tiny fidelity lengthscale decorrelates the levels.
  const auto indep = toy_model(1e-3);
  ScalarizedModel si{{&indep}, {1.0}};
  CHECK(mf_mes(si, x, 0.3, cost, ys) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("mc sample sets are reproducible") {
  const auto a = McSampleSet::generate(64, 3, 5);
  const auto b = McSampleSet::generate(64, 3, 5);
  CHECK(a.base == b.base);
  CHECK(a.size() == 64);
}

TEST_CASE("ehvi degenerate cases") {
  const auto samples = McSampleSet::generate(128, 2, 1);
  const pareto::ParetoFront empty(Vector{0, 0});
  const std::vector<Posterior> point{{1.0, 0.0}, {1.0, 0.0}};
  CHECK(ehvi_mc(point, empty, samples) == doctest::Approx(1.0));
  const pareto::ParetoFront front(std::vector<Vector>{{0.5, 1.5}, {1.2, 0.4}}, Vector{0, 0});
  const std::vector<Posterior> det{{0.9, 0.0}, {0.9, 0.0}};
  CHECK(ehvi_mc(det, front, samples) == doctest::Approx(pareto::hvi(front, Vector{0.9, 0.9})));
  CHECK(ehvi_exact_2d(det, front) == doctest::Approx(pareto::hvi(front, Vector{0.9, 0.9})));
  const std::vector<Posterior> unit{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(ehvi_exact_2d(unit, empty) == doctest::Approx(0.15915).epsilon(1e-4));
  CHECK_THROWS_AS(ehvi_exact_2d(std::vector<Posterior>(3), pareto::ParetoFront(Vector{0, 0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ehvi_mc(det, front, McSampleSet{}), std::invalid_argument);
}

TEST_CASE("ehvi: MC versus exact versus fresh-sample oracle") {
  std::mt19937_64 rng(47);
  const auto samples = McSampleSet::generate(4096, 2, 9);
  for (int i = 0; i < 20; ++i) {
    const auto in = random_instance(rng);
    const double exact = ehvi_exact_2d(in.posteriors, in.front);
    CHECK(std::abs(ehvi_mc(in.posteriors, in.front, samples) - exact) <= 0.02 * exact);
    std::vector<oracle::Point> pts(in.front.points().begin(), in.front.points().end());
    const auto mc = oracle::mc_ehvi_2d(pts, {0, 0}, {in.posteriors[0].mean, in.posteriors[1].mean},
                                       {in.posteriors[0].stddev(), in.posteriors[1].stddev()}, 100000,
                                       static_cast<std::uint64_t>(i));
    CHECK(std::abs(mc.value - exact) <= 3 * mc.standard_error + 1e-12);
  }
}

TEST_CASE("acquisition values are finite and non-negative") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1, 2), v(0, 1);
  const auto samples = McSampleSet::generate(32, 2, 2);
  const pareto::ParetoFront front(std::vector<Vector>{{0.5, 1.0}, {1.0, 0.5}}, Vector{0, 0});
  for (int i = 0; i < 10000; ++i) {
    const std::vector<Posterior> p{{u(rng), v(rng)}, {u(rng), v(rng)}};
    REQUIRE(expected_improvement(p[0], u(rng)) >= 0.0);
    const double e = ehvi_mc(p, front, samples);
    REQUIRE(std::isfinite(e));
    REQUIRE(e >= 0.0);
  }
}

TEST_CASE("fidelity objective") {
  CHECK(fidelity_value({FidelityKind::linear}, 0.0) == 0.0);
  CHECK(fidelity_value({FidelityKind::linear}, 1.0) == 1.0);
  CHECK(fidelity_value({FidelityKind::tanh}, 1.0) == doctest::Approx(0.76159).epsilon(1e-5));
  CHECK_THROWS_AS(fidelity_value({FidelityKind::linear}, 1.5), std::invalid_argument);
  CHECK(parse_fidelity_kind("tanh") == FidelityKind::tanh);
  CHECK_THROWS_AS(parse_fidelity_kind("cubic"), std::invalid_argument);
}

TEST_CASE("momf score") {
  const CostModel cost{4.8};
  const FidelityObjective fid{FidelityKind::linear};
  const std::vector<gp::GpModel> models{toy_model(0.5, 1), toy_model(0.5, 2)};
  const auto samples = McSampleSet::generate(256, 3, 4);
  const pareto::ParetoFront front(std::vector<Vector>{{0.2, 0.3, 0.5}}, Vector{-3, -3, 0});
  const Vector x{0.4};

  auto raw_ehvi = [&](double s) {
    std::vector<Posterior> p;
    for (const auto& m : models) p.push_back(m.posterior(Vector{0.4, s}));
    p.push_back({s, 0.0});
    return ehvi_mc(p, front, samples);
  };
  CHECK(momf_score(models, x, 0.0, front, fid, cost, samples) == doctest::Approx(raw_ehvi(0.0)));
  const double r = momf_score(models, x, 0.7, front, fid, cost, samples) /
                   momf_score(models, x, 0.3, front, fid, cost, samples);
  CHECK(r == doctest::Approx(raw_ehvi(0.7) / raw_ehvi(0.3) * cost(0.3) / cost(0.7)));

  // A saturated fidelity coordinate far above anything reachable: no gain.
  const pareto::ParetoFront dominating(std::vector<Vector>{{50, 50, 1}}, Vector{-3, -3, 0});
  CHECK(momf_score(models, x, 0.5, dominating, fid, cost, samples) == 0.0);

  // At s = 1 with a saturated fidelity coordinate the score is plain EHVI / C(1).
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 10; ++i) {
    std::vector<Vector> objs{{u(rng), u(rng)}, {u(rng), u(rng)}};
    std::vector<Vector> aug;
    for (auto o : objs) {
      o.push_back(1.0);
      aug.push_back(o);
    }
    const Vector ref3{-3, -3, 0};
    const auto f3 = pareto::ParetoFront::clipped(aug, ref3);
    const auto f2 = pareto::ParetoFront::clipped(objs, Vector{-3, -3});
    const Vector xi{(u(rng) + 1.5) / 3};
    std::vector<Posterior> p;
    for (const auto& m : models) p.push_back(m.posterior(Vector{xi[0], 1.0}));
    const auto s2 = McSampleSet{samples.base.leftCols(2), samples.seed};
    CHECK(momf_score(models, xi, 1.0, f3, fid, cost, samples) ==
          doctest::Approx(ehvi_mc(p, f2, s2) / cost(1.0)).epsilon(1e-9));
  }
}
