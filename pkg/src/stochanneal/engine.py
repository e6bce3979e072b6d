"""Simulated annealing with simulation-estimated costs.

The annealer follows the classic loop — exponential cooling every ``q``
iterations, Boltzmann acceptance — but rephrases the acceptance draw: the
uniform ``u`` is sampled *before* any simulation and converted into the
allowed difference ``D = T ln(u) <= 0``, the worst estimated gap the rule
tolerates this iteration.  Accepting when ``mean_neighbor + D <= mean_current``
is equivalent in expectation to the textbook acceptance probability, and
exposing ``D`` up front lets difference-aware budget policies use it.

Every iteration invokes the configured budget policy once for the
neighbor-vs-current comparison; on acceptance a second invocation (with
``D = 0`` and fresh scenarios) compares the new incumbent against the best
solution found so far, since under common random numbers a previous estimate
of the best solution cannot be reused.  Each best update is re-simulated with
``audit_sims`` fresh scenarios and the average logged, giving an audit trail
of best-score estimates over the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Protocol

import numpy as np

from .policies import IntegralSolverConfig, PolicyConfig, Verdict, compare
from .scenarios import Direction, sample_costs, scenario_batch
from .stats import DEFAULT_SOLVER_CONFIG

__all__ = [
    "SaParams",
    "RunTrace",
    "TraceRecord",
    "Neighborhood",
    "allowed_difference",
    "accept",
    "run",
]

# Scenario ordinal ranges are partitioned by purpose within an iteration so
# the three evaluation kinds can never share realizations.
_PHASE_STRIDE = 1 << 40
PHASE_COMPARISON = 0
PHASE_BEST_CHECK = 1
PHASE_AUDIT = 2

_ENGINE_RNG_TAG = 0x53414E47


class Neighborhood(Protocol):
    """Proposal generator; proposed solutions must satisfy problem feasibility."""

    def propose(self, solution, rng: np.random.Generator): ...


@dataclass(frozen=True)
class SaParams:
    """Cooling schedule: T starts at ``t_init``, multiplies by ``alpha_cool``
    every ``q`` iterations, and the run stops once T reaches ``t_stop``."""

    t_init: float
    alpha_cool: float
    q: int
    t_stop: float

    def __post_init__(self) -> None:
        if not self.t_init > self.t_stop > 0:
            raise ValueError("need t_init > t_stop > 0")
        if not 0.0 < self.alpha_cool < 1.0:
            raise ValueError("alpha_cool must lie in (0, 1)")
        if self.q < 1:
            raise ValueError("q must be >= 1")


class TraceRecord(NamedTuple):
    iteration: int
    temperature: float
    allowed_diff: float
    sims_comparison: int
    sims_best: int
    accepted: bool
    best_updated: bool
    direct_accept: bool
    mean_current: float
    mean_neighbor: float


@dataclass
class RunTrace:
    """Columnar per-iteration log plus the best-update audit records."""

    temperature: list[float] = field(default_factory=list)
    allowed_diff: list[float] = field(default_factory=list)
    sims_comparison: list[int] = field(default_factory=list)
    sims_best: list[int] = field(default_factory=list)
    accepted: list[bool] = field(default_factory=list)
    best_updated: list[bool] = field(default_factory=list)
    direct_accept: list[bool] = field(default_factory=list)
    mean_current: list[float] = field(default_factory=list)
    mean_neighbor: list[float] = field(default_factory=list)
    best_updates: list[tuple[int, float]] = field(default_factory=list)
    unchanged_proposals: int = 0
    total_sims: int = 0

    def __len__(self) -> int:
        return len(self.temperature)

    def records(self) -> Iterator[TraceRecord]:
        for i in range(len(self)):
            yield TraceRecord(
                i,
                self.temperature[i],
                self.allowed_diff[i],
                self.sims_comparison[i],
                self.sims_best[i],
                self.accepted[i],
                self.best_updated[i],
                self.direct_accept[i],
                self.mean_current[i],
                self.mean_neighbor[i],
            )


def allowed_difference(temperature: float, u: float) -> float:
    """``T ln(u)`` for ``u`` in (0, 1]: the tolerated cost gap, always <= 0."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if not 0.0 < u <= 1.0:
        raise ValueError("u must lie in (0, 1]")
    return temperature * math.log(u)


def accept(mean_current: float, mean_neighbor: float, D: float, direction: Direction) -> bool:
    """The annealing acceptance rule on estimated means.

    Minimization accepts when ``mean_neighbor + D <= mean_current``;
    maximization is the exact mirror, ``mean_neighbor - D >= mean_current``.
    """
    sign = direction.sign
    return sign * mean_neighbor + D <= sign * mean_current


def _audit_mean(problem, solution, master_seed: int, iteration: int, sims: int) -> float:
    batch = scenario_batch(
        master_seed, iteration, PHASE_AUDIT * _PHASE_STRIDE, sims
    )
    audit = getattr(problem, "audit_costs", None)
    if audit is not None:
        costs = np.asarray(audit(solution, batch), dtype=float)
    else:
        costs = sample_costs(problem, solution, batch)
    return float(costs.mean())


def run(
    problem,
    neighborhood: Neighborhood,
    policy_cfg: PolicyConfig,
    sa_params: SaParams,
    master_seed: int,
    audit_sims: int = 1000,
    initial=None,
    solver_cfg: IntegralSolverConfig = DEFAULT_SOLVER_CONFIG,
):
    """Run the annealer; returns ``(best_solution, trace)``.

    All randomness is derived from ``master_seed``: proposal and acceptance
    draws come from one generator, simulation scenarios are named by
    (master_seed, iteration, ordinal), so identical inputs replay the run
    exactly.  ``initial`` defaults to ``problem.initial_solution()``.
    """
    if audit_sims < 1:
        raise ValueError("audit_sims must be >= 1")
    rng = np.random.default_rng((master_seed, _ENGINE_RNG_TAG))
    current = problem.initial_solution() if initial is None else initial
    best = current
    trace = RunTrace()
    begin_hook = getattr(problem, "begin_iteration", None)
    propose = neighborhood.propose

    temperature = sa_params.t_init
    iteration = 0
    while True:
        if iteration > 0 and iteration % sa_params.q == 0:
            temperature *= sa_params.alpha_cool
        if temperature <= sa_params.t_stop:
            break
        if begin_hook is not None:
            begin_hook(current)

        neighbor = propose(current, rng)
        if neighbor is current:
            trace.unchanged_proposals += 1
        u = 1.0 - rng.random()  # open at 0 so ln(u) is finite
        D = allowed_difference(temperature, u)

        outcome = compare(
            problem,
            current,
            neighbor,
            D,
            policy_cfg,
            master_seed=master_seed,
            iteration=iteration,
            base_ordinal=PHASE_COMPARISON * _PHASE_STRIDE,
            solver_cfg=solver_cfg,
        )
        direct = outcome.verdict is Verdict.DIRECT_ACCEPT
        accepted = direct or accept(
            outcome.stats_current.mean, outcome.stats_neighbor.mean, D, problem.direction
        )

        sims_best = 0
        best_updated = False
        if accepted:
            current = neighbor
            # Fresh scenarios; the best-solution check allows no slack (D = 0)
            # and the direct-accept shortcut does not apply to it.
            best_outcome = compare(
                problem,
                best,
                current,
                0.0,
                policy_cfg,
                master_seed=master_seed,
                iteration=iteration,
                base_ordinal=PHASE_BEST_CHECK * _PHASE_STRIDE,
                solver_cfg=solver_cfg,
            )
            sims_best = best_outcome.sims_total
            if accept(
                best_outcome.stats_current.mean,
                best_outcome.stats_neighbor.mean,
                0.0,
                problem.direction,
            ):
                best = current
                best_updated = True
                audited = _audit_mean(problem, best, master_seed, iteration, audit_sims)
                trace.best_updates.append((iteration, audited))
                trace.total_sims += audit_sims

        trace.temperature.append(temperature)
        trace.allowed_diff.append(D)
        trace.sims_comparison.append(outcome.sims_total)
        trace.sims_best.append(sims_best)
        trace.accepted.append(accepted)
        trace.best_updated.append(best_updated)
        trace.direct_accept.append(direct)
        trace.mean_current.append(outcome.stats_current.mean)
        trace.mean_neighbor.append(outcome.stats_neighbor.mean)
        trace.total_sims += outcome.sims_total + sims_best
        iteration += 1

    return best, trace
