"""Scenario identity and common-random-numbers (CRN) plumbing.

A scenario is one realization of all random inputs of a stochastic problem.
Scenarios are named, not stored: the triple ``(master_seed, iteration,
ordinal)`` is hashed with a splitmix64-style mixer into a key, and the i-th
variate of a scenario is derived from ``key + i * GOLDEN`` through the same
finalizer.  This gives O(1) random access to any scenario, exact replay of a
run from its master seed, and no shared generator state to mutate — which is
what makes it safe to evaluate two solutions on *identical* realizations
(common random numbers) or on guaranteed-disjoint streams.

Problems must derive their randomness only from the scenario (never from the
solution), otherwise paired evaluation on shared scenarios is meaningless.
Problems whose stochastic inputs depend on solution structure cannot use CRN
and should be run with the non-CRN policy variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Protocol, Sequence, runtime_checkable

import numpy as np
from scipy.special import ndtri

__all__ = [
    "ScenarioId",
    "Direction",
    "StochasticProblem",
    "PairedSample",
    "NONCRN_STRIDE",
    "scenario_batch",
    "scenario_uniforms",
    "scenario_normals",
    "scenario_normal_matrix",
    "sample_costs",
    "evaluate_paired",
]

from .stats import SampleStats

_MASK = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

# Ordinal offset separating the second solution's stream when CRN is off.
NONCRN_STRIDE = 1 << 32


@dataclass(frozen=True, order=True)
class ScenarioId:
    """Name of one random realization: (master_seed, iteration, ordinal)."""

    master_seed: int
    iteration: int
    ordinal: int


class Direction(Enum):
    MINIMIZE = "Minimize"
    MAXIMIZE = "Maximize"

    @property
    def sign(self) -> float:
        """Multiplier mapping raw costs into to-be-minimized space."""
        return 1.0 if self is Direction.MINIMIZE else -1.0


@runtime_checkable
class StochasticProblem(Protocol):
    """Contract a problem must satisfy to be driven by the annealer.

    ``sample_cost`` must be a deterministic function of (solution, scenario);
    for a fixed solution, costs across distinct scenarios are i.i.d. draws of
    the solution's cost distribution.  ``exact_cost`` returns the closed-form
    (or otherwise exactly computable) objective when one exists, else None.

    Optional methods recognized by the engine and policies:

    * ``sample_costs(solution, scenarios)`` — vectorized batch evaluation,
      must agree elementwise with ``sample_cost``.
    * ``initial_solution()`` — default starting point for the annealer.
    * ``begin_iteration(solution)`` — hook invoked with the incumbent at the
      top of every annealing iteration (e.g. for adaptive objectives).
    * ``audit_costs(solution, scenarios)`` — evaluation used for best-score
      audit logging when it should differ from the search objective.
    """

    direction: Direction

    def sample_cost(self, solution, scenario: ScenarioId) -> float: ...

    def exact_cost(self, solution) -> float | None: ...


@dataclass(frozen=True)
class PairedSample:
    """Costs of two solutions evaluated on the same realization."""

    scenario: ScenarioId
    cost_current: float
    cost_neighbor: float


def scenario_batch(
    master_seed: int, iteration: int, start_ordinal: int, count: int
) -> list[ScenarioId]:
    """``count`` consecutive scenarios of one iteration, starting at an ordinal."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return [
        ScenarioId(master_seed, iteration, start_ordinal + i) for i in range(count)
    ]


def _mix(x: np.ndarray) -> np.ndarray:
    x ^= x >> np.uint64(30)
    x *= _MIX1
    x ^= x >> np.uint64(27)
    x *= _MIX2
    x ^= x >> np.uint64(31)
    return x


def _keys_from_arrays(
    seeds: np.ndarray, iters: np.ndarray, ords: np.ndarray
) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = _mix(seeds + _GOLDEN)
        h = _mix(h + iters * _GOLDEN)
        h = _mix(h + ords * _GOLDEN)
    return h


def _keys(sids: Sequence[ScenarioId]) -> np.ndarray:
    seeds = np.array([s.master_seed & _MASK for s in sids], dtype=np.uint64)
    iters = np.array([s.iteration & _MASK for s in sids], dtype=np.uint64)
    ords = np.array([s.ordinal & _MASK for s in sids], dtype=np.uint64)
    return _keys_from_arrays(seeds, iters, ords)


def _range_of(sids: Sequence[ScenarioId]) -> tuple[int, int, int, int] | None:
    """(master_seed, iteration, start, count) when the batch is one ordinal run."""
    first = sids[0]
    for i, s in enumerate(sids):
        if (
            s.master_seed != first.master_seed
            or s.iteration != first.iteration
            or s.ordinal != first.ordinal + i
        ):
            return None
    return first.master_seed, first.iteration, first.ordinal, len(sids)


def _uniform_matrix(keys: np.ndarray, count: int, offset: int) -> np.ndarray:
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        bits = _mix(keys[:, None] + idx[None, :] * _GOLDEN)
    # 53 explicit mantissa bits, nudged off 0 so the open interval holds
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54


def scenario_uniforms(sid: ScenarioId, count: int, offset: int = 0) -> np.ndarray:
    """The scenario's variates ``offset .. offset+count`` as uniforms in (0, 1)."""
    return _uniform_matrix(_keys([sid]), count, offset)[0]


def scenario_normals(sid: ScenarioId, count: int, offset: int = 0) -> np.ndarray:
    """Standard normal variates of one scenario (inverse-CDF of the uniforms)."""
    return ndtri(scenario_uniforms(sid, count, offset))


def scenario_normal_matrix(
    sids: Sequence[ScenarioId], count: int, offset: int = 0
) -> np.ndarray:
    """Standard normals for a batch of scenarios, shape (len(sids), count).

    Batches that form one consecutive ordinal run (the common case for policy
    rounds) skip per-scenario key assembly; the values are identical either
    way.
    """
    rng_range = _range_of(sids)
    if rng_range is not None:
        master_seed, iteration, start, n = rng_range
        keys = _keys_from_arrays(
            np.full(n, master_seed & _MASK, dtype=np.uint64),
            np.full(n, iteration & _MASK, dtype=np.uint64),
            np.arange(start, start + n, dtype=np.uint64),
        )
    else:
        keys = _keys(sids)
    return ndtri(_uniform_matrix(keys, count, offset))


def sample_costs(problem, solution, scenarios: Sequence[ScenarioId]) -> np.ndarray:
    """Evaluate a solution on many scenarios, batched when the problem can."""
    batch = getattr(problem, "sample_costs", None)
    if batch is not None:
        return np.asarray(batch(solution, scenarios), dtype=float)
    return np.array(
        [problem.sample_cost(solution, s) for s in scenarios], dtype=float
    )


def evaluate_paired(
    problem,
    sol_a,
    sol_b,
    scenarios: Sequence[ScenarioId],
    crn_enabled: bool = True,
) -> tuple[SampleStats, SampleStats, list[PairedSample]]:
    """Evaluate two solutions over a scenario batch.

    With CRN, sample ``i`` of both solutions uses ``scenarios[i]`` and the
    per-scenario pairing is returned.  Without CRN, the second solution
    consumes a stream offset by ``NONCRN_STRIDE`` ordinals, so the two sides
    are evaluated on disjoint realizations and no pairing exists.
    """
    if len(scenarios) == 0:
        raise ValueError("scenarios must be nonempty")
    costs_a = sample_costs(problem, sol_a, scenarios)
    if crn_enabled:
        costs_b = sample_costs(problem, sol_b, scenarios)
        pairs = [
            PairedSample(sid, float(ca), float(cb))
            for sid, ca, cb in zip(scenarios, costs_a, costs_b)
        ]
    else:
        shifted = [
            ScenarioId(s.master_seed, s.iteration, s.ordinal + NONCRN_STRIDE)
            for s in scenarios
        ]
        costs_b = sample_costs(problem, sol_b, shifted)
        pairs = []
    stats_a, stats_b = SampleStats(), SampleStats()
    stats_a.extend(costs_a)
    stats_b.extend(costs_b)
    return stats_a, stats_b, pairs
