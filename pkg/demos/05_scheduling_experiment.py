"""A miniature scheduling sweep, end to end.

Generates a small machine-scheduling instance, runs a few policies for two
short annealing runs each through the experiment runner, and leaves behind
the three CSVs the plotting frontend consumes.  Scaled down to finish in
about a minute; raise the instance size, runs, and cooling length for real
experiments.
"""

import tempfile
from pathlib import Path

from stochanneal.cli import ExperimentConfig, read_csv_checked, run_experiment
from stochanneal.cli import SUMMARY_COLUMNS, spmsp_presets
from stochanneal.engine import SaParams
from stochanneal.spmsp import generate_instance, save_instance

workdir = Path(tempfile.mkdtemp(prefix="scheduling-demo-"))
instance = generate_instance(j=12, r=15, m=3, seed=21)
instance_path = workdir / "12j-15r-3m.inst"
save_instance(instance, instance_path)
print(f"instance written to {instance_path}")

presets = spmsp_presets()
config = ExperimentConfig(
    problem_kind="spmsp",
    instance_path=str(instance_path),
    toymin_jobs=None,
    policies=tuple(
        (name, presets[name]) for name in ("Const400", "TTest0", "DoubleTTest")
    ),
    sa=SaParams(t_init=0.02, alpha_cool=0.9, q=150, t_stop=0.0005),
    runs=2,
    base_seed=11,
    audit_sims=100,
    final_eval_sims=2000,
)
out = workdir / "results"
run_experiment(config, out, jobs=2)

print(f"\nresults in {out}:")
for row in read_csv_checked(out / "summary.csv", SUMMARY_COLUMNS):
    print(
        f"  {row['method']:<12} run {row['run']}  score {float(row['final_score']):.4f}"
        f"  sims {int(row['total_sims']):>9,}  {float(row['wall_time_s']):.1f}s"
    )

print(
    "\nrender figures with the frontend, e.g.:\n"
    f"  plotkit scatter --in {out}/summary.csv --out scatter.svg\n"
    f"  plotkit histogram --in {out}/sim_histogram.csv --out hist.svg\n"
    f"  plotkit convergence --in {out}/convergence.csv --out conv.svg --max-iteration 5000"
)
