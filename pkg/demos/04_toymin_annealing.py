"""Annealing under noise on a brute-forceable problem.

A seven-job stochastic sequencing instance is small enough to enumerate, so
we can watch the annealer (with two different budget policies) recover the
true optimum while spending very different simulation budgets.
"""

import numpy as np

from stochanneal.engine import SaParams, run
from stochanneal.policies import PolicyConfig, Variant
from stochanneal.toymin import (
    ToyInstance,
    ToyNeighborhood,
    TotalTardinessProblem,
    brute_force_optimum,
)

instance = ToyInstance.from_jobs(
    [
        (8.0, 2.8, 15.0),
        (12.0, 4.2, 50.0),
        (6.0, 2.1, 10.0),
        (10.0, 3.5, 38.0),
        (9.0, 3.1, 25.0),
        (5.0, 1.7, 6.0),
        (11.0, 3.8, 60.0),
    ]
)

optimum, optimum_cost = brute_force_optimum(instance, sims_per_perm=4000, seed=100)
print(f"brute-force optimum: {optimum}  expected cost {optimum_cost:.3f}\n")

sa = SaParams(t_init=8.0, alpha_cool=0.9, q=120, t_stop=0.05)
policies = {
    "Const (200 sims/iter)": PolicyConfig(Variant.CONST, n_max=200),
    "DoubleTTest": PolicyConfig(
        Variant.DOUBLE_TTEST, n_max=200, n0=10, delta=10, alpha_conf=0.2
    ),
}

for name, cfg in policies.items():
    found = 0
    total_sims = []
    for seed in range(5):
        best, trace = run(
            TotalTardinessProblem(instance),
            ToyNeighborhood(),
            cfg,
            sa,
            master_seed=1000 + seed,
            audit_sims=200,
        )
        found += best == optimum
        total_sims.append(trace.total_sims)
    print(
        f"{name:<22} optimum found {found}/5,  "
        f"simulations per run ~{np.mean(total_sims):,.0f} "
        f"(mean per iteration {np.mean(total_sims) / len(trace):.0f})"
    )
