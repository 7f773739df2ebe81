#include <cmath>
#include <random>

#include "doctest.h"
#include "momf/engine.hpp"
#include "momf/pareto.hpp"
#include "momf/rng.hpp"

using namespace momf;
using namespace momf::engine;

namespace {

LoopConfig small(Algorithm alg, double budget, int iterations, std::uint64_t seed = 3) {
  auto c = default_config(alg);
  c.total_budget = budget;
  c.max_iterations = iterations;
  c.candidate_pool = 128;
  c.restarts = 3;
  c.mc_samples = 64;
  c.gp_restarts = 3;
  c.seed = seed;
  return c;
}

void check_bookkeeping(const TrialRecord& rec, const problems::Problem& p) {
  double running = 0.0;
  for (const auto& obs : rec.data.observations) {
    running += p.cost_model(obs.s);
    CHECK(obs.cost == p.cost_model(obs.s));
    CHECK(obs.cumulative_cost == running);
    CHECK(obs.s >= 0.0);
    CHECK(obs.s <= 1.0);
    for (double v : obs.x) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  for (std::size_t i = 1; i < rec.data.size(); ++i)
    CHECK(rec.data.observations[i].cumulative_cost > rec.data.observations[i - 1].cumulative_cost);
}

}  // namespace

TEST_CASE("initialize: fixed high") {
  const auto p = problems::make_problem("branin-currin");
  const auto d = initialize(p, 1, InitMode::fixed_high, 1);
  REQUIRE(d.size() == 1);
  CHECK(d.observations[0].s == 1.0);
  CHECK(d.total_cost() == doctest::Approx(121.51).epsilon(1e-4));
  CHECK_THROWS_AS(initialize(p, 0, InitMode::fixed_high, 1), std::invalid_argument);
}

TEST_CASE("initialize: cost-aware fidelity distribution") {
  const auto flat = problems::make_problem("forrester", CostModel{0.0});
  const auto d = initialize(flat, 10000, InitMode::cost_aware, 5);
  // Kolmogorov-Smirnov distance against the uniform CDF; 1.63/sqrt(n) is the 1% critical value.
  std::vector<double> s;
  for (const auto& o : d.observations) s.push_back(o.s);
  std::sort(s.begin(), s.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double n = static_cast<double>(s.size());
    ks = std::max({ks, std::abs((i + 1) / n - s[i]), std::abs(s[i] - i / n)});
  }
  CHECK(ks < 1.63 / std::sqrt(10000.0));

  const auto steep = problems::make_problem("forrester", CostModel{4.8});
  const auto e = initialize(steep, 10000, InitMode::cost_aware, 6);
  double mean = 0.0;
  for (const auto& o : e.observations) mean += o.s / 10000.0;
  // Mean of p(s) ~ exp(-a s) on [0, 1] by direct integration.
  const double a = 4.8;
  const double expected = 1.0 / a - std::exp(-a) / (1.0 - std::exp(-a));
  CHECK(mean < 0.35);
  CHECK(mean == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("maximize_acquisition") {
  auto bowl = [](std::span<const double> x) { return -std::pow(x[0] - 0.3, 2) - std::pow(x[1] - 0.3, 2); };
  const auto best = maximize_acquisition(bowl, Bounds::unit(2), 1024, 10, 1);
  CHECK(std::abs(best.point[0] - 0.3) < 5e-3);
  CHECK(std::abs(best.point[1] - 0.3) < 5e-3);

  auto flat = [](std::span<const double>) { return 1.0; };
  CHECK_NOTHROW(maximize_acquisition(flat, Bounds::unit(3), 64, 4, 2));

  auto partial = [](std::span<const double> x) { return x[0] < 0.5 ? std::nan("") : x[0]; };
  CHECK(maximize_acquisition(partial, Bounds::unit(1), 64, 4, 3).point[0] == doctest::Approx(1.0));
  auto never = [](std::span<const double>) { return std::nan(""); };
  CHECK_THROWS_AS(maximize_acquisition(never, Bounds::unit(1), 16, 2, 3), NumericError);
  CHECK_THROWS_AS(maximize_acquisition(flat, Bounds::unit(1), 2, 3, 3), std::invalid_argument);
}

TEST_CASE("maximize_acquisition on EHVI is deterministic") {
  const auto p = problems::make_problem("branin-currin");
  const auto data = initialize(p, 6, InitMode::cost_aware, 4);
  const auto models = fit_objectives(data, 3, 1);
  const pareto::ParetoFront front = pareto::ParetoFront::clipped(
      std::vector<Vector>{data.observations[0].y_normalized, data.observations[1].y_normalized}, Vector{0, 0});
  const auto samples = acq::McSampleSet::generate(64, 2, 1);
  auto score = [&](std::span<const double> x) {
    std::vector<gp::Posterior> post;
    for (const auto& m : models) post.push_back(m.posterior(gp::joint_point(x, 1.0)));
    return acq::ehvi_mc(post, front, samples);
  };
  const auto a = maximize_acquisition(score, Bounds::unit(2), 256, 4, 9);
  const auto b = maximize_acquisition(score, Bounds::unit(2), 256, 4, 9);
  CHECK(a.point == b.point);
  CHECK(a.value == b.value);
}

TEST_CASE("loop config validation") {
  auto c = default_config(Algorithm::momf1);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // zero budget
  c.total_budget = 10;
  CHECK_NOTHROW(c.validate());
  c.init_count = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_algorithm("sf-ehvi") == Algorithm::sf_ehvi);
  CHECK_THROWS_AS(parse_algorithm("ehvi"), std::invalid_argument);
  CHECK_THROWS_AS(run_momf1(problems::make_problem("forrester"), small(Algorithm::momf2, 10, 1)),
                  std::invalid_argument);
}

TEST_CASE("momf1: budget below one evaluation keeps the initial design") {
  const auto p = problems::make_problem("branin-currin");
  auto c = small(Algorithm::momf1, 1.0, 0);
  const auto init = initialize(p, c.init_count, c.init_mode, derive_seed(c.seed, {stream::kInit}));
  c.total_budget = init.total_cost() + 0.5;
  const auto rec = run_momf1(p, c);
  CHECK(rec.data.size() == init.size());
}

TEST_CASE("momf1: bookkeeping, budget gate, monotone augmented front") {
  const auto p = problems::make_problem("branin-currin");
  const auto c = small(Algorithm::momf1, 150.0, 12);
  const auto rec = run_momf1(p, c);
  CHECK_FALSE(rec.aborted);
  CHECK(rec.data.size() > 5);
  CHECK(rec.data.total_cost() <= c.total_budget);
  check_bookkeeping(rec, p);
  double prev = 0.0;
  std::vector<Vector> aug;
  for (const auto& obs : rec.data.observations) {
    Vector v = obs.y_normalized;
    v.push_back(obs.s);
    aug.push_back(v);
    const double hv = pareto::hypervolume(pareto::ParetoFront::clipped(aug, Vector{0, 0, 0}));
    CHECK(hv >= prev);
    prev = hv;
  }
  CHECK(run_momf1(p, c).data.observations.size() == rec.data.size());
}

TEST_CASE("sf-ehvi: every point at s = 1 with fixed steps") {
  const auto p = problems::make_problem("branin-currin");
  const auto rec = run_sf_ehvi(p, small(Algorithm::sf_ehvi, 1e6, 6));
  REQUIRE(rec.data.size() == 7);
  const double c1 = p.cost_model(1.0);
  for (std::size_t i = 0; i < rec.data.size(); ++i) {
    CHECK(rec.data.observations[i].s == 1.0);
    CHECK(rec.data.observations[i].cumulative_cost == doctest::Approx((i + 1) * c1).epsilon(1e-12));
  }
  check_bookkeeping(rec, p);
  // Budget gate: 3.5 evaluations' worth of budget buys three.
  const auto gated = run_sf_ehvi(p, small(Algorithm::sf_ehvi, 3.5 * c1, 0));
  CHECK(gated.data.size() == 3);
}

TEST_CASE("sf-ehvi: 80 evaluations cost about 9600") {
  const double c1 = CostModel{4.8}(1.0);
  CHECK(80 * c1 == doctest::Approx(9720.8).epsilon(1e-4));
}

TEST_CASE("momf2 with a top-fidelity selector reproduces sf-ehvi") {
  const auto p = problems::make_problem("branin-currin");
  auto c2 = small(Algorithm::momf2, 1e6, 4);
  c2.init_count = 1;
  c2.init_mode = InitMode::fixed_high;
  const auto stub = [](std::span<const double>, const Dataset&, std::size_t) { return 1.0; };
  const auto two = run_momf2(p, c2, stub);
  const auto one = run_sf_ehvi(p, small(Algorithm::sf_ehvi, 1e6, 4));
  REQUIRE(two.data.size() == one.data.size());
  for (std::size_t i = 0; i < one.data.size(); ++i) {
    CHECK(two.data.observations[i].x == one.data.observations[i].x);
    CHECK(two.data.observations[i].s == one.data.observations[i].s);
  }
}

TEST_CASE("momf2: budget semantics and determinism") {
  const auto p = problems::make_problem("branin-currin");
  const auto c = small(Algorithm::momf2, 200.0, 6);
  const auto a = run_momf2(p, c);
  check_bookkeeping(a, p);
  CHECK(a.data.total_cost() <= c.total_budget);
  const auto b = run_momf2(p, c);
  REQUIRE(a.data.size() == b.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    CHECK(a.data.observations[i].x == b.data.observations[i].x);
    CHECK(a.data.observations[i].s == b.data.observations[i].s);
  }
}

TEST_CASE("fitted hyperparameters are recorded per dataset size") {
  const auto p = problems::make_problem("branin-currin");
  const auto rec = run_momf1(p, small(Algorithm::momf1, 1e6, 3));
  CHECK(rec.fitted_params.size() == 3);
  for (const auto& [n, params] : rec.fitted_params) {
    CHECK(n < rec.data.size());
    CHECK(params.size() == 2);
  }
}
