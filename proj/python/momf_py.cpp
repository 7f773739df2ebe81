#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momf/acquisition.hpp"
#include "momf/bench.hpp"
#include "momf/engine.hpp"
#include "momf/gp.hpp"
#include "momf/pareto.hpp"
#include "momf/problems.hpp"

namespace py = pybind11;
using namespace momf;

namespace {

Eigen::MatrixXd to_matrix(const std::vector<Vector>& rows) {
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw std::invalid_argument("ragged input rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::vector<gp::Posterior> posteriors(const Vector& means, const Vector& variances) {
  if (means.size() != variances.size()) throw std::invalid_argument("means and variances differ in length");
  std::vector<gp::Posterior> out;
  for (std::size_t i = 0; i < means.size(); ++i) out.push_back({means[i], variances[i]});
  return out;
}

py::dict trial_dict(const engine::TrialRecord& rec) {
  py::list x, s, y_raw, y, cost, cum, iteration;
  for (const auto& o : rec.data.observations) {
    x.append(o.x);
    s.append(o.s);
    y_raw.append(o.y_raw);
    y.append(o.y_normalized);
    cost.append(o.cost);
    cum.append(o.cumulative_cost);
    iteration.append(o.iteration);
  }
  py::dict d;
  d["algorithm"] = std::string(engine::to_string(rec.algorithm));
  d["seed"] = rec.seed;
  d["x"] = x;
  d["s"] = s;
  d["y_raw"] = y_raw;
  d["y"] = y;
  d["cost"] = cost;
  d["cumulative_cost"] = cum;
  d["iteration"] = iteration;
  d["aborted"] = rec.aborted;
  d["diagnostic"] = rec.diagnostic;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-objective multi-fidelity Bayesian optimization core";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<CostModel>(m, "CostModel")
      .def(py::init<double, double>(), py::arg("coefficient") = 4.8, py::arg("fixed_cost") = 0.0)
      .def_readwrite("coefficient", &CostModel::coefficient)
      .def_readwrite("fixed_cost", &CostModel::fixed_cost)
      .def("__call__", &CostModel::operator());
  m.def("cost", [](double s, double coefficient, double fixed) { return cost(CostModel{coefficient, fixed}, s); },
        py::arg("s"), py::arg("coefficient") = 4.8, py::arg("fixed_cost") = 0.0);

  py::class_<problems::Problem>(m, "Problem")
      .def_readonly("name", &problems::Problem::name)
      .def_readonly("input_dim", &problems::Problem::input_dim)
      .def_readonly("objective_count", &problems::Problem::objective_count)
      .def_readonly("cost_model", &problems::Problem::cost_model)
      .def("evaluate", [](const problems::Problem& p, const Vector& x, double s) { return p.evaluate(x, s); },
           py::arg("x"), py::arg("s"))
      .def("evaluate_normalized",
           [](const problems::Problem& p, const Vector& x, double s) { return p.evaluate_normalized(x, s); },
           py::arg("x"), py::arg("s"));
  m.def("problem_names", [] { return std::vector<std::string>(problems::kProblemNames.begin(), problems::kProblemNames.end()); });
  m.def("make_problem",
        [](const std::string& name, double coefficient, double fixed) {
          return problems::make_problem(name, CostModel{coefficient, fixed});
        },
        py::arg("name"), py::arg("cost_coefficient") = 4.8, py::arg("fixed_cost") = 0.0);
  m.def("oracle_front",
        [](const problems::Problem& p, int n, std::uint64_t seed) {
          const auto o = problems::oracle_front(p, n, seed);
          py::dict d;
          d["front"] = o.front;
          d["hypervolume"] = o.hypervolume;
          return d;
        },
        py::arg("problem"), py::arg("n") = 10000, py::arg("seed") = 0);

  m.def("nondominated", [](const std::vector<Vector>& pts) { return pareto::nondominated(pts); });
  m.def("hypervolume", [](const std::vector<Vector>& pts, const Vector& ref) { return pareto::hypervolume(pts, ref); },
        py::arg("points"), py::arg("reference"));
  m.def("hvi",
        [](const std::vector<Vector>& front, const Vector& y, const Vector& ref) {
          return pareto::hvi(pareto::ParetoFront::clipped(front, ref), y);
        },
        py::arg("front"), py::arg("y"), py::arg("reference"));

  m.def("expected_improvement",
        [](double mean, double variance, double best) { return acq::expected_improvement({mean, variance}, best); },
        py::arg("mean"), py::arg("variance"), py::arg("best"));
  m.def("ehvi_exact_2d",
        [](const Vector& means, const Vector& variances, const std::vector<Vector>& front, const Vector& ref) {
          return acq::ehvi_exact_2d(posteriors(means, variances), pareto::ParetoFront::clipped(front, ref));
        },
        py::arg("means"), py::arg("variances"), py::arg("front"), py::arg("reference"));
  m.def("ehvi_mc",
        [](const Vector& means, const Vector& variances, const std::vector<Vector>& front, const Vector& ref,
           int samples, std::uint64_t seed) {
          const auto set = acq::McSampleSet::generate(samples, static_cast<int>(means.size()), seed);
          return acq::ehvi_mc(posteriors(means, variances), pareto::ParetoFront::clipped(front, ref), set);
        },
        py::arg("means"), py::arg("variances"), py::arg("front"), py::arg("reference"), py::arg("samples") = 128,
        py::arg("seed") = 0);

  py::class_<gp::GpModel>(m, "GpModel")
      .def("posterior",
           [](const gp::GpModel& g, const Vector& q) {
             const auto p = g.posterior(q);
             return py::make_tuple(p.mean, p.variance);
           })
      .def("log_marginal_likelihood", &gp::GpModel::log_marginal_likelihood)
      .def_property_readonly("lengthscales",
                             [](const gp::GpModel& g) {
                               const auto& l = g.params().lengthscales;
                               return Vector(l.data(), l.data() + l.size());
                             })
      .def_property_readonly("signal_variance", [](const gp::GpModel& g) { return g.params().signal_variance; })
      .def_property_readonly("noise_variance", [](const gp::GpModel& g) { return g.params().noise_variance; });
  m.def("fit_gp",
        [](const std::vector<Vector>& x, const Vector& y, int restarts, std::uint64_t seed) {
          gp::FitConfig cfg;
          cfg.restarts = restarts;
          cfg.seed = seed;
          const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
          return gp::fit(to_matrix(x), t, cfg);
        },
        py::arg("x"), py::arg("y"), py::arg("restarts") = 8, py::arg("seed") = 0);

  m.def("run_trial",
        [](const problems::Problem& p, const std::string& algorithm, double budget, std::uint64_t seed,
           int max_iterations, int candidate_pool, int restarts, int mc_samples) {
          auto cfg = engine::default_config(engine::parse_algorithm(algorithm));
          cfg.total_budget = budget;
          cfg.seed = seed;
          cfg.max_iterations = max_iterations;
          cfg.candidate_pool = candidate_pool;
          cfg.restarts = restarts;
          cfg.mc_samples = mc_samples;
          engine::TrialRecord rec;
          {
            py::gil_scoped_release release;
            rec = engine::run_trial(p, cfg);
          }
          return trial_dict(rec);
        },
        py::arg("problem"), py::arg("algorithm"), py::arg("budget"), py::arg("seed") = 0,
        py::arg("max_iterations") = 0, py::arg("candidate_pool") = 1024, py::arg("restarts") = 10,
        py::arg("mc_samples") = 128);

  m.def("aggregate",
        [](const std::map<std::string, std::vector<std::vector<std::pair<double, double>>>>& traces, double threshold,
           const std::string& baseline) {
          std::map<std::string, std::vector<bench::HvTrace>> in;
          for (const auto& [name, list] : traces) {
            int trial = 0;
            for (const auto& pts : list) {
              bench::HvTrace t{name, trial++, {}};
              for (const auto& [c, h] : pts) t.points.push_back({c, h});
              in[name].push_back(std::move(t));
            }
          }
          const auto r = bench::aggregate(in, threshold, baseline);
          py::dict out, cost_to;
          for (const auto& [name, sum] : r.algorithms)
            cost_to[py::str(name)] = sum.mean_cost_to_threshold ? py::cast(*sum.mean_cost_to_threshold) : py::none();
          out["cost_to_threshold"] = cost_to;
          out["reduction_factors"] = r.reduction_factors;
          out["diagnostics"] = r.diagnostics;
          return out;
        },
        py::arg("traces"), py::arg("threshold") = 0.9, py::arg("baseline") = "sf-ehvi");
}
