"""Simulation budget policies for pairwise solution comparison.

Each policy decides how many simulations to spend before the annealer rules
on a (current, neighbor) pair, given the allowed difference ``D`` for the
iteration.  Policies only control *when to stop simulating*; except for the
double t-test's direct-accept shortcut, the accept decision itself is made
by the caller from the returned sample means.

Variants
--------
* ``Const`` / ``ConstNoCrn`` — a fixed ``n_max / 2`` simulations per
  solution, with or without common random numbers.
* ``Ocba`` — split an incremental budget across the two solutions in
  proportion to their sample standard deviations.  Needs independent
  streams, so CRN is off by construction.
* ``Iz`` / ``IzD`` — the sequential indifference-zone procedure for two
  alternatives, run with equal per-round extensions on shared scenarios so
  CRN stays intact, capped at ``n_max`` total simulations.  The ``D``
  variant ranks the neighbor as if it were ``D`` better.
* ``TTest0`` / ``TTestD`` / ``DoubleTTest`` — paired t-tests on the
  per-scenario cost differences (CRN mandatory): test the difference against
  0, against ``D``, or run the 0-test plus a one-sided test that the
  difference exceeds ``D`` which, when significant, accepts the neighbor
  outright.

All decision logic operates on sign-oriented costs (raw for minimization,
negated for maximization), so the two orientations are exact mirrors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .scenarios import (
    NONCRN_STRIDE,
    Direction,
    ScenarioId,
    sample_costs,
    scenario_batch,
)
from .stats import (
    DEFAULT_SOLVER_CONFIG,
    IntegralSolverConfig,
    SampleStats,
    student_t_cdf,
    yoon_h1,
)

__all__ = [
    "Variant",
    "Verdict",
    "PolicyConfig",
    "ComparisonOutcome",
    "ocba_split",
    "compare",
    "compare_const",
    "compare_ocba",
    "compare_iz",
    "compare_ttest",
    "t_statistic",
    "two_sided_p",
    "one_sided_p",
]


class Variant(str, Enum):
    CONST = "Const"
    CONST_NO_CRN = "ConstNoCrn"
    OCBA = "Ocba"
    IZ = "Iz"
    IZ_D = "IzD"
    TTEST0 = "TTest0"
    TTEST_D = "TTestD"
    DOUBLE_TTEST = "DoubleTTest"


_USES_ALPHA = {Variant.IZ, Variant.IZ_D, Variant.TTEST0, Variant.TTEST_D, Variant.DOUBLE_TTEST}
_USES_ROUNDS = _USES_ALPHA | {Variant.OCBA}
CRN_VARIANTS = {
    Variant.CONST,
    Variant.IZ,
    Variant.IZ_D,
    Variant.TTEST0,
    Variant.TTEST_D,
    Variant.DOUBLE_TTEST,
}


class Verdict(Enum):
    BY_MEANS = "ByMeans"
    DIRECT_ACCEPT = "DirectAccept"


@dataclass(frozen=True)
class PolicyConfig:
    """Parameters of one comparison policy.

    ``n_max`` caps the *total* simulations of a comparison (both solutions
    together), so equal-allocation variants simulate each solution at most
    ``n_max / 2`` times.  ``delta_star`` is the indifference-zone width and
    only meaningful for the IZ variants.
    """

    variant: Variant
    n_max: int
    n0: int = 0
    delta: int = 1
    alpha_conf: float = 0.2
    delta_star: float = 1.0

    def __post_init__(self) -> None:
        if self.n_max < 2 or self.n_max % 2 != 0:
            raise ValueError("n_max must be a positive even total")
        if self.variant in _USES_ROUNDS:
            if self.n0 < 2:
                raise ValueError(f"{self.variant.value} needs n0 >= 2")
            if self.delta < 1:
                raise ValueError("delta must be >= 1")
            if 2 * self.n0 > self.n_max:
                raise ValueError("initial stage 2*n0 exceeds n_max")
        if self.variant in _USES_ALPHA and not 0.0 < self.alpha_conf < 1.0:
            raise ValueError("alpha_conf must lie in (0, 1)")
        if self.variant in (Variant.IZ, Variant.IZ_D) and self.delta_star <= 0:
            raise ValueError("delta_star must be positive")

    @property
    def uses_crn(self) -> bool:
        return self.variant in CRN_VARIANTS


@dataclass
class ComparisonOutcome:
    """What a policy spent and what it concluded."""

    stats_current: SampleStats
    stats_neighbor: SampleStats
    sims_total: int
    verdict: Verdict
    rounds: int


# ---------------------------------------------------------------------------
# t-statistic helpers (exposed for direct verification)
# ---------------------------------------------------------------------------


def t_statistic(xbar: float, s2: float, n: int, shift: float = 0.0) -> float:
    """``(xbar - shift) / sqrt(s2 / n)``; infinite when the variance is zero."""
    if s2 <= 0.0:
        diff = xbar - shift
        if diff == 0.0:
            return 0.0
        return math.copysign(math.inf, diff)
    return (xbar - shift) / math.sqrt(s2 / n)


def two_sided_p(t: float, dof: int) -> float:
    if math.isinf(t):
        return 0.0
    return 2.0 * student_t_cdf(-abs(t), dof)


def one_sided_p(t: float, dof: int) -> float:
    """p-value for the alternative "greater": P(T >= t)."""
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    return student_t_cdf(-t, dof)


# ---------------------------------------------------------------------------
# Scenario bookkeeping
# ---------------------------------------------------------------------------


@dataclass
class _Cursor:
    """Hands out consecutive scenario ordinals for one comparison."""

    master_seed: int
    iteration: int
    next_ordinal: int

    def take(self, count: int):
        batch = scenario_batch(self.master_seed, self.iteration, self.next_ordinal, count)
        self.next_ordinal += count
        return batch


def _paired_costs(problem, sol_a, sol_b, batch, crn: bool):
    """Cost arrays for both solutions; array-level twin of ``evaluate_paired``."""
    costs_a = sample_costs(problem, sol_a, batch)
    if crn:
        costs_b = sample_costs(problem, sol_b, batch)
    else:
        shifted = [
            ScenarioId(s.master_seed, s.iteration, s.ordinal + NONCRN_STRIDE)
            for s in batch
        ]
        costs_b = sample_costs(problem, sol_b, shifted)
    return costs_a, costs_b


@dataclass
class _PairedState:
    """Accumulators for CRN policies: per-solution stats plus difference stats."""

    sign: float
    stats_cur: SampleStats = field(default_factory=SampleStats)
    stats_nbr: SampleStats = field(default_factory=SampleStats)
    diffs: SampleStats = field(default_factory=SampleStats)

    def absorb(self, problem, sol_cur, sol_nbr, batch) -> None:
        costs_cur, costs_nbr = _paired_costs(problem, sol_cur, sol_nbr, batch, True)
        self.stats_cur.extend(costs_cur)
        self.stats_nbr.extend(costs_nbr)
        self.diffs.extend(self.sign * (costs_cur - costs_nbr))

    @property
    def n(self) -> int:
        return self.stats_cur.n

    def outcome(self, verdict: Verdict, rounds: int) -> ComparisonOutcome:
        return ComparisonOutcome(
            stats_current=self.stats_cur,
            stats_neighbor=self.stats_nbr,
            sims_total=self.stats_cur.n + self.stats_nbr.n,
            verdict=verdict,
            rounds=rounds,
        )


# ---------------------------------------------------------------------------
# Policies
# ---------------------------------------------------------------------------


def compare_const(
    problem,
    sol_s,
    sol_n,
    cfg: PolicyConfig,
    crn: bool,
    *,
    master_seed: int,
    iteration: int,
    base_ordinal: int = 0,
) -> ComparisonOutcome:
    """Fixed budget: each solution is simulated exactly ``n_max / 2`` times."""
    cursor = _Cursor(master_seed, iteration, base_ordinal)
    batch = cursor.take(cfg.n_max // 2)
    costs_s, costs_n = _paired_costs(problem, sol_s, sol_n, batch, crn)
    stats_s, stats_n = SampleStats(), SampleStats()
    stats_s.extend(costs_s)
    stats_n.extend(costs_n)
    return ComparisonOutcome(stats_s, stats_n, stats_s.n + stats_n.n, Verdict.BY_MEANS, 1)


def ocba_split(
    n1: int,
    n2: int,
    s1: float,
    s2: float,
    delta: int,
    better_is_first: bool = True,
) -> tuple[int, int]:
    """Distribute ``delta`` extra simulations so N1/N2 approaches s1/s2.

    Scans the integer split ``i`` in [0, delta] that minimizes
    ``|(Nb + delta - i) / (No + i) - sb/so|`` with the currently-better
    solution in the ``b`` slot.  Zero-deviation sides degenerate: if both
    deviations vanish the budget is split evenly (odd remainder to the first
    argument); if exactly one vanishes, that side needs nothing and the whole
    budget goes to the other.
    """
    if n1 < 1 or n2 < 1 or delta < 0:
        raise ValueError("counts must be positive and delta nonnegative")
    if s1 < 0 or s2 < 0:
        raise ValueError("standard deviations must be nonnegative")
    if s1 == 0.0 and s2 == 0.0:
        half = delta // 2
        return n1 + (delta - half), n2 + half
    if s1 == 0.0:
        return n1, n2 + delta
    if s2 == 0.0:
        return n1 + delta, n2
    if better_is_first:
        nb, no, ratio = n1, n2, s1 / s2
    else:
        nb, no, ratio = n2, n1, s2 / s1
    best_i, best_err = 0, math.inf
    for i in range(delta + 1):
        err = abs((nb + delta - i) / (no + i) - ratio)
        if err < best_err:
            best_i, best_err = i, err
    if better_is_first:
        return n1 + delta - best_i, n2 + best_i
    return n1 + best_i, n2 + delta - best_i


def compare_ocba(
    problem,
    sol_s,
    sol_n,
    cfg: PolicyConfig,
    *,
    master_seed: int,
    iteration: int,
    base_ordinal: int = 0,
) -> ComparisonOutcome:
    """Incremental budget allocation by sample-deviation ratio (no CRN)."""
    if cfg.variant is not Variant.OCBA:
        raise ValueError(f"expected Ocba config, got {cfg.variant}")
    sign = problem.direction.sign
    cur_s = _Cursor(master_seed, iteration, base_ordinal)
    cur_n = _Cursor(master_seed, iteration, base_ordinal + NONCRN_STRIDE)

    stats_s, stats_n = SampleStats(), SampleStats()

    def extend(which_stats: SampleStats, cursor: _Cursor, solution, count: int) -> None:
        if count > 0:
            which_stats.extend(sample_costs(problem, solution, cursor.take(count)))

    extend(stats_s, cur_s, sol_s, cfg.n0)
    extend(stats_n, cur_n, sol_n, cfg.n0)
    rounds = 1
    while stats_s.n + stats_n.n < cfg.n_max:
        rounds += 1
        budget = min(cfg.delta, cfg.n_max - stats_s.n - stats_n.n)
        better_is_first = sign * stats_s.mean <= sign * stats_n.mean
        target_s, target_n = ocba_split(
            stats_s.n, stats_n.n, stats_s.std(), stats_n.std(), budget, better_is_first
        )
        extend(stats_s, cur_s, sol_s, target_s - stats_s.n)
        extend(stats_n, cur_n, sol_n, target_n - stats_n.n)
    return ComparisonOutcome(
        stats_s, stats_n, stats_s.n + stats_n.n, Verdict.BY_MEANS, rounds
    )


def compare_iz(
    problem,
    sol_s,
    sol_n,
    D: float,
    cfg: PolicyConfig,
    use_allowed_difference: bool,
    *,
    master_seed: int,
    iteration: int,
    base_ordinal: int = 0,
    solver_cfg: IntegralSolverConfig = DEFAULT_SOLVER_CONFIG,
) -> ComparisonOutcome:
    """Sequential indifference-zone screening of the pair, CRN preserved.

    Both solutions get ``delta`` additional simulations every round (keeping
    their sample sizes equal so scenarios stay shared), the per-round
    screening constant is looked up for the sample sizes actually attained,
    and the whole comparison is capped at ``n_max`` total simulations.  With
    ``use_allowed_difference`` the neighbor is ranked as if it were ``D``
    better than observed.
    """
    if cfg.variant not in (Variant.IZ, Variant.IZ_D):
        raise ValueError(f"expected Iz/IzD config, got {cfg.variant}")
    sign = problem.direction.sign
    shift = D if use_allowed_difference else 0.0
    cursor = _Cursor(master_seed, iteration, base_ordinal)
    state = _PairedState(sign)
    state.absorb(problem, sol_s, sol_n, cursor.take(cfg.n0))
    rounds = 1
    per_solution_cap = cfg.n_max // 2
    while True:
        n = state.n
        # Oriented means; the neighbor is credited the allowed difference.
        mean_s = sign * state.stats_cur.mean
        mean_n = sign * state.stats_nbr.mean + shift
        sd_s = state.stats_cur.std()
        sd_n = state.stats_nbr.std()
        if mean_s <= mean_n:
            sd_b, sd_i, gap = sd_s, sd_n, mean_n - mean_s
        else:
            sd_b, sd_i, gap = sd_n, sd_s, mean_s - mean_n
        delta_i = max(cfg.delta_star, gap)
        h1 = yoon_h1(n, n, cfg.alpha_conf, solver_cfg)
        need_i = math.ceil((h1 * sd_i / delta_i) ** 2)
        need_b = math.ceil((h1 * sd_b / delta_i) ** 2)
        if n >= need_i and n >= need_b:
            break
        if n >= per_solution_cap:
            break
        rounds += 1
        extra = min(cfg.delta, per_solution_cap - n)
        state.absorb(problem, sol_s, sol_n, cursor.take(extra))
    return state.outcome(Verdict.BY_MEANS, rounds)


def compare_ttest(
    problem,
    sol_s,
    sol_n,
    D: float,
    cfg: PolicyConfig,
    *,
    master_seed: int,
    iteration: int,
    base_ordinal: int = 0,
) -> ComparisonOutcome:
    """Paired t-tests on the per-scenario cost differences (CRN mandatory).

    The difference is oriented so that positive favors the neighbor:
    ``cost(s) - cost(neighbor)`` when minimizing and the reverse when
    maximizing.  ``TTest0`` tests the difference against zero, ``TTestD``
    against the allowed difference, and ``DoubleTTest`` adds a one-sided
    test of "difference exceeds D" whose rejection accepts the neighbor
    without further simulation.

    A zero sample variance means the t statistic is infinite unless the
    observed mean equals the tested shift exactly; in the exact-tie case the
    test is uninformative and simulation continues (up to the budget cap).
    """
    if cfg.variant not in (Variant.TTEST0, Variant.TTEST_D, Variant.DOUBLE_TTEST):
        raise ValueError(f"expected a t-test config, got {cfg.variant}")
    cursor = _Cursor(master_seed, iteration, base_ordinal)
    state = _PairedState(problem.direction.sign)
    state.absorb(problem, sol_s, sol_n, cursor.take(cfg.n0))
    rounds = 1
    per_solution_cap = cfg.n_max // 2
    primary_shift = D if cfg.variant is Variant.TTEST_D else 0.0
    while True:
        n = state.n
        xbar = state.diffs.mean
        s2 = state.diffs.variance()
        if s2 > 0.0 or xbar != primary_shift:
            t = t_statistic(xbar, s2, n, primary_shift)
            if two_sided_p(t, n - 1) < cfg.alpha_conf:
                return state.outcome(Verdict.BY_MEANS, rounds)
        if 2 * n >= cfg.n_max:
            return state.outcome(Verdict.BY_MEANS, rounds)
        if cfg.variant is Variant.DOUBLE_TTEST and (s2 > 0.0 or xbar != D):
            t2 = t_statistic(xbar, s2, n, D)
            if one_sided_p(t2, n - 1) < cfg.alpha_conf:
                return state.outcome(Verdict.DIRECT_ACCEPT, rounds)
        rounds += 1
        extra = min(cfg.delta, per_solution_cap - n)
        state.absorb(problem, sol_s, sol_n, cursor.take(extra))


def compare(
    problem,
    sol_s,
    sol_n,
    D: float,
    cfg: PolicyConfig,
    *,
    master_seed: int,
    iteration: int,
    base_ordinal: int = 0,
    solver_cfg: IntegralSolverConfig = DEFAULT_SOLVER_CONFIG,
) -> ComparisonOutcome:
    """Dispatch one (current, neighbor) comparison to the configured policy."""
    ctx = dict(master_seed=master_seed, iteration=iteration, base_ordinal=base_ordinal)
    if cfg.variant is Variant.CONST:
        return compare_const(problem, sol_s, sol_n, cfg, True, **ctx)
    if cfg.variant is Variant.CONST_NO_CRN:
        return compare_const(problem, sol_s, sol_n, cfg, False, **ctx)
    if cfg.variant is Variant.OCBA:
        return compare_ocba(problem, sol_s, sol_n, cfg, **ctx)
    if cfg.variant in (Variant.IZ, Variant.IZ_D):
        return compare_iz(
            problem,
            sol_s,
            sol_n,
            D,
            cfg,
            cfg.variant is Variant.IZ_D,
            solver_cfg=solver_cfg,
            **ctx,
        )
    return compare_ttest(problem, sol_s, sol_n, D, cfg, **ctx)
