"""Single-machine stochastic total-tardiness sequencing.

A deliberately small minimization benchmark: jobs with normally distributed
processing times (truncated at zero) run back to back in permutation order on
one machine, and the cost is total tardiness against per-job due dates.  With
at most nine jobs the optimum is exhaustively checkable, which makes this the
ground-truth problem for exercising the minimization-oriented comparison
policies end to end.

Solutions are permutations represented as tuples of job indices.  Processing
times are drawn per *job index* from the scenario, never per position, so two
permutations evaluated on the same scenario see identical realizations — the
property common random numbers relies on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scenarios import (
    Direction,
    ScenarioId,
    _range_of,
    scenario_normal_matrix,
    scenario_normals,
)

__all__ = [
    "ToyInstance",
    "TotalTardinessProblem",
    "ToyNeighborhood",
    "brute_force_optimum",
]

_BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class ToyInstance:
    """Jobs as (mean processing time, stdev, due date) triples."""

    means: tuple[float, ...]
    stdevs: tuple[float, ...]
    dues: tuple[float, ...]

    def __post_init__(self) -> None:
        if not len(self.means) == len(self.stdevs) == len(self.dues):
            raise ValueError("means, stdevs and dues must have equal length")
        if any(s < 0 for s in self.stdevs):
            raise ValueError("stdevs must be nonnegative")
        if any(d <= 0 for d in self.dues):
            raise ValueError("due dates must be positive")

    @classmethod
    def from_jobs(cls, jobs: Sequence[Sequence[float]]) -> "ToyInstance":
        means, stdevs, dues = zip(*jobs)
        return cls(tuple(means), tuple(stdevs), tuple(dues))

    @property
    def n_jobs(self) -> int:
        return len(self.means)

    def is_deterministic(self) -> bool:
        return all(s == 0.0 for s in self.stdevs)


def _tardiness(durations: np.ndarray, perm, dues: np.ndarray) -> np.ndarray:
    """Total tardiness per scenario row for one permutation."""
    order = list(perm)
    completions = np.cumsum(durations[:, order], axis=1)
    late = completions - dues[order]
    return np.maximum(late, 0.0).sum(axis=1)


class TotalTardinessProblem:
    """Stochastic-problem adapter for a :class:`ToyInstance`."""

    direction = Direction.MINIMIZE

    def __init__(self, instance: ToyInstance):
        self.instance = instance
        self._means = np.asarray(instance.means)
        self._stdevs = np.asarray(instance.stdevs)
        self._dues = np.asarray(instance.dues)
        self._dur_cache: dict[tuple, np.ndarray] = {}

    def initial_solution(self) -> tuple[int, ...]:
        return tuple(range(self.instance.n_jobs))

    def _durations(self, scenarios: Sequence[ScenarioId]) -> np.ndarray:
        # Batch-level cache: CRN evaluation requests the identical batch once
        # per solution, and regeneration is pure, so eviction is always safe.
        key = _range_of(scenarios)
        if key is not None:
            cached = self._dur_cache.get(key)
            if cached is not None:
                return cached
        z = scenario_normal_matrix(scenarios, self.instance.n_jobs)
        draws = np.maximum(self._means + self._stdevs * z, 0.0)
        if key is not None:
            self._dur_cache[key] = draws
            if len(self._dur_cache) > 256:
                self._dur_cache.clear()
        return draws

    def sample_cost(self, solution, scenario: ScenarioId) -> float:
        z = scenario_normals(scenario, self.instance.n_jobs)
        durations = np.maximum(self._means + self._stdevs * z, 0.0)
        return float(_tardiness(durations[None, :], solution, self._dues)[0])

    def sample_costs(self, solution, scenarios: Sequence[ScenarioId]) -> np.ndarray:
        return _tardiness(self._durations(scenarios), solution, self._dues)

    def exact_cost(self, solution) -> float | None:
        if not self.instance.is_deterministic():
            return None
        return float(_tardiness(self._means[None, :], solution, self._dues)[0])


class ToyNeighborhood:
    """Adjacent transposition or uniform random transposition, 50/50."""

    def propose(self, solution, rng: np.random.Generator):
        perm = list(solution)
        n = len(perm)
        if n < 2:
            return solution
        if rng.random() < 0.5:
            i = int(rng.integers(n - 1))
            j = i + 1
        else:
            i, j = rng.choice(n, size=2, replace=False)
        perm[i], perm[j] = perm[j], perm[i]
        return tuple(perm)


def brute_force_optimum(
    instance: ToyInstance, sims_per_perm: int = 2000, seed: int = 0
) -> tuple[tuple[int, ...], float]:
    """Exhaustively find the permutation with the lowest estimated cost.

    Every permutation is evaluated on one *common* scenario set (so the
    comparison between permutations is paired) and the argmin of the mean
    cost is returned together with that mean.
    """
    n = instance.n_jobs
    if n > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports at most {_BRUTE_FORCE_LIMIT} jobs, got {n}")
    if sims_per_perm < 1:
        raise ValueError("sims_per_perm must be >= 1")
    problem = TotalTardinessProblem(instance)
    scenarios = [ScenarioId(seed, 0, i) for i in range(sims_per_perm)]
    durations = problem._durations(scenarios)
    dues = np.asarray(instance.dues)
    best_perm: tuple[int, ...] | None = None
    best_cost = math.inf
    for perm in itertools.permutations(range(n)):
        cost = float(_tardiness(durations, perm, dues).mean())
        if cost < best_cost:
            best_perm, best_cost = perm, cost
    assert best_perm is not None
    return best_perm, best_cost
