"""Simulated annealing under noisy objectives.

A local-search toolkit where the objective is estimated by simulation and
the per-iteration simulation budget is decided by pluggable comparison
policies: fixed budgets, variance-proportional allocation, sequential
indifference-zone screening, and paired t-tests aware of the iteration's
allowed difference.  Ships two benchmark problems (stochastic parallel
machine scheduling and a brute-forceable total-tardiness toy) plus an
experiment runner that emits analysis-ready CSVs.
"""

from .engine import RunTrace, SaParams, accept, allowed_difference, run
from .policies import (
    ComparisonOutcome,
    PolicyConfig,
    Variant,
    Verdict,
    compare,
    ocba_split,
)
from .scenarios import (
    Direction,
    PairedSample,
    ScenarioId,
    StochasticProblem,
    evaluate_paired,
    scenario_batch,
)
from .stats import (
    IntegralSolverConfig,
    SampleStats,
    chi2_pdf,
    normal_cdf,
    rinott_h,
    student_t_cdf,
    yoon_h1,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonOutcome",
    "Direction",
    "IntegralSolverConfig",
    "PairedSample",
    "PolicyConfig",
    "RunTrace",
    "SaParams",
    "SampleStats",
    "ScenarioId",
    "StochasticProblem",
    "Variant",
    "Verdict",
    "accept",
    "allowed_difference",
    "chi2_pdf",
    "compare",
    "evaluate_paired",
    "normal_cdf",
    "ocba_split",
    "rinott_h",
    "run",
    "scenario_batch",
    "student_t_cdf",
    "yoon_h1",
]
