"""Synthetic normal problems with known means, for calibration and tests.

Solutions are integer labels into a vector of (mean, sigma) pairs.  Each
scenario yields one independent standard normal per label, so two labels
evaluated on the same scenario see *independent* noise — exactly the setting
the selection guarantees are stated for — while the evaluation machinery can
still run in CRN mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scenarios import Direction, ScenarioId, scenario_normal_matrix

__all__ = ["SyntheticNormalProblem"]


@dataclass
class SyntheticNormalProblem:
    means: tuple[float, ...]
    sigmas: tuple[float, ...]
    direction: Direction = Direction.MINIMIZE

    def __post_init__(self) -> None:
        if len(self.means) != len(self.sigmas):
            raise ValueError("means and sigmas must have equal length")
        if any(s < 0 for s in self.sigmas):
            raise ValueError("sigmas must be nonnegative")

    def initial_solution(self) -> int:
        return 0

    def sample_cost(self, solution: int, scenario: ScenarioId) -> float:
        return float(self.sample_costs(solution, [scenario])[0])

    def sample_costs(self, solution: int, scenarios: Sequence[ScenarioId]) -> np.ndarray:
        z = scenario_normal_matrix(scenarios, len(self.means))[:, solution]
        return self.means[solution] + self.sigmas[solution] * z

    def exact_cost(self, solution: int) -> float:
        return self.means[solution]
