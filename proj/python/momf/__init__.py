"""Multi-objective multi-fidelity Bayesian optimization."""

from ._core import (
    CostModel,
    GpModel,
    Problem,
    aggregate,
    cost,
    ehvi_exact_2d,
    ehvi_mc,
    expected_improvement,
    fit_gp,
    hvi,
    hypervolume,
    make_problem,
    nondominated,
    oracle_front,
    problem_names,
    run_trial,
)

__all__ = [
    "CostModel",
    "GpModel",
    "Problem",
    "aggregate",
    "cost",
    "ehvi_exact_2d",
    "ehvi_mc",
    "expected_improvement",
    "fit_gp",
    "hvi",
    "hypervolume",
    "make_problem",
    "nondominated",
    "oracle_front",
    "problem_names",
    "run_trial",
]
