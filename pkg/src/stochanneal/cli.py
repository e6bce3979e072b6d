"""Experiment runner: instance generation, policy sweeps and CSV emission.

Subcommands
-----------
* ``generate J R M [--seed S] [--out PATH]`` — write a random scheduling
  instance file (named ``<J>j-<R>r-<M>m.inst`` by default).
* ``run --config CFG --out DIR [--jobs N] [--seed S]`` — run every configured
  policy for the configured number of independent annealing runs and emit
  three CSVs: a per-run summary, a histogram of simulations per iteration,
  and the best-score convergence records.
* ``evaluate --instance PATH --schedule PATH [--sims N] [--seed S]`` — score
  one schedule with fresh simulations and print a single JSON line.

Exit codes: 0 on success, 2 for configuration/usage errors, 3 for runtime
failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import engine, spmsp, toymin
from .policies import PolicyConfig, Variant
from .scenarios import ScenarioId, sample_costs

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SUMMARY_COLUMNS",
    "HISTOGRAM_COLUMNS",
    "CONVERGENCE_COLUMNS",
    "spmsp_presets",
    "minimization_presets",
    "read_csv_checked",
    "run_experiment",
    "main",
]

SUMMARY_COLUMNS = ["method", "run", "seed", "wall_time_s", "final_score", "total_sims"]
HISTOGRAM_COLUMNS = ["method", "sims_per_iteration", "frequency"]
CONVERGENCE_COLUMNS = ["method", "run", "iteration", "audited_best_score"]


class ConfigError(ValueError):
    """Invalid configuration or command-line input."""


# ---------------------------------------------------------------------------
# Method presets
# ---------------------------------------------------------------------------


def spmsp_presets() -> dict[str, PolicyConfig]:
    """Tuned parameter set for the scheduling case study."""
    dstar = 0.001  # robustness scores live in [0, 1]; not a published value
    return {
        "Const100": PolicyConfig(Variant.CONST, n_max=100),
        "Const200": PolicyConfig(Variant.CONST, n_max=200),
        "Const400": PolicyConfig(Variant.CONST, n_max=400),
        "ConstNoCrn400": PolicyConfig(Variant.CONST_NO_CRN, n_max=400),
        "OCBA": PolicyConfig(Variant.OCBA, n_max=400, n0=80, delta=10),
        "IZ0": PolicyConfig(Variant.IZ, n_max=400, n0=80, delta=10, alpha_conf=0.2, delta_star=dstar),
        "IZD": PolicyConfig(Variant.IZ_D, n_max=400, n0=80, delta=10, alpha_conf=0.2, delta_star=dstar),
        "TTest0": PolicyConfig(Variant.TTEST0, n_max=400, n0=80, delta=20, alpha_conf=0.2),
        "TTestD": PolicyConfig(Variant.TTEST_D, n_max=400, n0=80, delta=20, alpha_conf=0.2),
        "DoubleTTest": PolicyConfig(Variant.DOUBLE_TTEST, n_max=400, n0=80, delta=20, alpha_conf=0.2),
    }


def minimization_presets() -> dict[str, PolicyConfig]:
    """Smaller-budget parameter set for minimization benchmarks."""
    dstar = 1.0  # one cost unit; not a published value
    return {
        "Const20": PolicyConfig(Variant.CONST, n_max=20),
        "Const50": PolicyConfig(Variant.CONST, n_max=50),
        "Const200": PolicyConfig(Variant.CONST, n_max=200),
        "ConstNoCrn200": PolicyConfig(Variant.CONST_NO_CRN, n_max=200),
        "OCBA": PolicyConfig(Variant.OCBA, n_max=200, n0=20, delta=5),
        "IZ0": PolicyConfig(Variant.IZ, n_max=200, n0=10, delta=10, alpha_conf=0.1, delta_star=dstar),
        "IZD": PolicyConfig(Variant.IZ_D, n_max=200, n0=10, delta=10, alpha_conf=0.1, delta_star=dstar),
        "TTest0": PolicyConfig(Variant.TTEST0, n_max=200, n0=10, delta=10, alpha_conf=0.2),
        "TTestD": PolicyConfig(Variant.TTEST_D, n_max=200, n0=10, delta=10, alpha_conf=0.2),
        "DoubleTTest": PolicyConfig(Variant.DOUBLE_TTEST, n_max=200, n0=10, delta=10, alpha_conf=0.2),
    }


_PRESET_TABLES = {"spmsp": spmsp_presets, "minimization": minimization_presets}

_DEFAULT_SA = {
    "spmsp": engine.SaParams(t_init=0.05, alpha_cool=0.97, q=2000, t_stop=0.0005),
    "toymin": engine.SaParams(t_init=10.0, alpha_cool=0.95, q=500, t_stop=0.01),
}


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    problem_kind: str  # "spmsp" | "toymin"
    instance_path: str | None
    toymin_jobs: tuple[tuple[float, float, float], ...] | None
    policies: tuple[tuple[str, PolicyConfig], ...]
    sa: engine.SaParams
    runs: int = 25
    base_seed: int = 1
    audit_sims: int = 1000
    final_eval_sims: int = 10000

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        names = [name for name, _ in self.policies]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate policy names: {names}")
        if not self.policies:
            raise ConfigError("at least one policy is required")


def _policy_from_dict(entry: dict) -> tuple[str, PolicyConfig]:
    try:
        variant = Variant(entry["variant"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad policy entry {entry!r}: {exc}") from exc
    fields = {
        key: entry[key]
        for key in ("n0", "delta", "n_max", "alpha_conf", "delta_star")
        if key in entry
    }
    try:
        cfg = PolicyConfig(variant=variant, **fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad policy entry {entry!r}: {exc}") from exc
    return entry.get("name", variant.value), cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc

    problem = raw.get("problem")
    if not isinstance(problem, dict) or "kind" not in problem:
        raise ConfigError("config needs a problem object with a 'kind'")
    kind = problem["kind"]
    instance_path = None
    jobs = None
    if kind == "spmsp":
        instance_path = problem.get("instance")
        if not instance_path:
            raise ConfigError("spmsp problem needs an 'instance' path")
    elif kind == "toymin":
        jobs = problem.get("jobs")
        if not jobs:
            raise ConfigError("toymin problem needs a 'jobs' list of [mean, stdev, due]")
        jobs = tuple(tuple(float(x) for x in job) for job in jobs)
    else:
        raise ConfigError(f"unknown problem kind {kind!r}")

    preset_table = raw.get("presets", "spmsp" if kind == "spmsp" else "minimization")
    if preset_table not in _PRESET_TABLES:
        raise ConfigError(f"unknown preset table {preset_table!r}")
    presets = _PRESET_TABLES[preset_table]()

    policies: list[tuple[str, PolicyConfig]] = []
    for entry in raw.get("policies", []):
        if isinstance(entry, str):
            if entry not in presets:
                raise ConfigError(
                    f"unknown preset {entry!r}; {preset_table} presets: {sorted(presets)}"
                )
            policies.append((entry, presets[entry]))
        else:
            policies.append(_policy_from_dict(entry))

    sa_raw = raw.get("sa")
    if sa_raw is None:
        sa = _DEFAULT_SA[kind]
    else:
        try:
            sa = engine.SaParams(**sa_raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad sa parameters: {exc}") from exc

    return ExperimentConfig(
        problem_kind=kind,
        instance_path=instance_path,
        toymin_jobs=jobs,
        policies=tuple(policies),
        sa=sa,
        runs=int(raw.get("runs", 25)),
        base_seed=int(raw.get("base_seed", 1)),
        audit_sims=int(raw.get("audit_sims", 1000)),
        final_eval_sims=int(raw.get("final_eval_sims", 10000)),
    )


def _echo_config(cfg: ExperimentConfig, out_dir: Path) -> None:
    payload = {
        "problem": (
            {"kind": "spmsp", "instance": cfg.instance_path}
            if cfg.problem_kind == "spmsp"
            else {"kind": "toymin", "jobs": [list(j) for j in cfg.toymin_jobs]}
        ),
        "policies": [
            {
                "name": name,
                "variant": p.variant.value,
                "n0": p.n0,
                "delta": p.delta,
                "n_max": p.n_max,
                "alpha_conf": p.alpha_conf,
                "delta_star": p.delta_star,
            }
            for name, p in cfg.policies
        ],
        "sa": {
            "t_init": cfg.sa.t_init,
            "alpha_cool": cfg.sa.alpha_cool,
            "q": cfg.sa.q,
            "t_stop": cfg.sa.t_stop,
        },
        "runs": cfg.runs,
        "base_seed": cfg.base_seed,
        "audit_sims": cfg.audit_sims,
        "final_eval_sims": cfg.final_eval_sims,
    }
    with open(out_dir / "config.json", "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Single run worker
# ---------------------------------------------------------------------------

_FINAL_EVAL_SEED_TAG = 0x46494E

def _build_problem(cfg: ExperimentConfig):
    if cfg.problem_kind == "spmsp":
        instance = spmsp.load_instance(cfg.instance_path)
        problem = spmsp.RobustSchedulingProblem(instance)
        neighborhood = spmsp.SpmspNeighborhood(instance)
    else:
        instance = toymin.ToyInstance.from_jobs(cfg.toymin_jobs)
        problem = toymin.TotalTardinessProblem(instance)
        neighborhood = toymin.ToyNeighborhood()
    return instance, problem, neighborhood


@dataclass
class RunResult:
    method: str
    run: int
    seed: int
    wall_time_s: float
    final_score: float
    total_sims: int
    sims_histogram: Counter
    convergence: list[tuple[int, float]]
    best_solution: object


def _execute_run(args: tuple) -> RunResult:
    cfg, method, policy, run_idx = args
    master_seed = cfg.base_seed + run_idx
    instance, problem, neighborhood = _build_problem(cfg)
    t0 = time.perf_counter()
    best, trace = engine.run(
        problem,
        neighborhood,
        policy,
        cfg.sa,
        master_seed,
        audit_sims=cfg.audit_sims,
    )
    wall = time.perf_counter() - t0
    if cfg.problem_kind == "spmsp":
        _, _, final_score = spmsp.final_evaluate(
            instance, best, cfg.final_eval_sims, seed=master_seed ^ _FINAL_EVAL_SEED_TAG
        )
    else:
        sids = [
            ScenarioId(master_seed ^ _FINAL_EVAL_SEED_TAG, 0, i)
            for i in range(cfg.final_eval_sims)
        ]
        final_score = float(sample_costs(problem, best, sids).mean())
    return RunResult(
        method=method,
        run=run_idx,
        seed=master_seed,
        wall_time_s=wall,
        final_score=final_score,
        total_sims=trace.total_sims,
        sims_histogram=Counter(trace.sims_comparison),
        convergence=list(trace.best_updates),
        best_solution=best,
    )


def run_experiment(cfg: ExperimentConfig, out_dir, jobs: int = 1) -> None:
    """Run the full sweep and write CSVs (flushed as each run completes)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _echo_config(cfg, out_dir)
    if cfg.problem_kind == "spmsp":
        (out_dir / "schedules").mkdir(exist_ok=True)

    tasks = [
        (cfg, name, policy, run_idx)
        for name, policy in cfg.policies
        for run_idx in range(cfg.runs)
    ]
    histogram: Counter = Counter()  # keyed by (method, sims)

    with open(out_dir / "summary.csv", "w", newline="") as sf, open(
        out_dir / "convergence.csv", "w", newline=""
    ) as cf:
        summary = csv.writer(sf)
        summary.writerow(SUMMARY_COLUMNS)
        convergence = csv.writer(cf)
        convergence.writerow(CONVERGENCE_COLUMNS)

        def consume(result: RunResult) -> None:
            summary.writerow(
                [
                    result.method,
                    result.run,
                    result.seed,
                    f"{result.wall_time_s:.6f}",
                    repr(result.final_score),
                    result.total_sims,
                ]
            )
            for sims, freq in result.sims_histogram.items():
                histogram[(result.method, sims)] += freq
            for iteration, score in result.convergence:
                convergence.writerow(
                    [result.method, result.run, iteration, repr(score)]
                )
            sf.flush()
            cf.flush()
            if cfg.problem_kind == "spmsp":
                spmsp.save_schedule(
                    result.best_solution,
                    out_dir / "schedules" / f"{result.method}-run{result.run}.json",
                )

        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for result in pool.map(_execute_run, tasks, chunksize=1):
                    consume(result)
        else:
            for task in tasks:
                consume(_execute_run(task))

    with open(out_dir / "sim_histogram.csv", "w", newline="") as hf:
        writer = csv.writer(hf)
        writer.writerow(HISTOGRAM_COLUMNS)
        for (method, sims), freq in sorted(histogram.items()):
            writer.writerow([method, sims, freq])


def read_csv_checked(path, expected_columns: list[str]) -> list[dict]:
    """Load a results CSV, asserting the documented schema."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != expected_columns:
            raise ValueError(
                f"{path}: expected columns {expected_columns}, found {reader.fieldnames}"
            )
        return list(reader)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    try:
        instance = spmsp.generate_instance(args.j, args.r, args.m, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = args.out or f"{spmsp.instance_name(args.j, args.r, args.m)}.inst"
    spmsp.save_instance(instance, out)
    print(out)
    return 0


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig(
            problem_kind=cfg.problem_kind,
            instance_path=cfg.instance_path,
            toymin_jobs=cfg.toymin_jobs,
            policies=cfg.policies,
            sa=cfg.sa,
            runs=cfg.runs,
            base_seed=args.seed,
            audit_sims=cfg.audit_sims,
            final_eval_sims=cfg.final_eval_sims,
        )
    if cfg.problem_kind == "spmsp" and not Path(cfg.instance_path).exists():
        raise ConfigError(f"instance file not found: {cfg.instance_path}")
    run_experiment(cfg, args.out, jobs=args.jobs)
    return 0


def cmd_evaluate(args) -> int:
    try:
        instance = spmsp.load_instance(args.instance)
        schedule = spmsp.load_schedule(args.schedule)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot load inputs: {exc}") from exc
    if len(schedule.machine_of) != instance.n_jobs:
        raise ConfigError(
            f"schedule covers {len(schedule.machine_of)} jobs, "
            f"instance has {instance.n_jobs}"
        )
    if any(m < 0 or m >= instance.machines for m in schedule.machine_of):
        raise ConfigError("schedule references a machine the instance lacks")
    try:
        deadline_prob, on_time, robustness = spmsp.final_evaluate(
            instance, schedule, args.sims, args.seed
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(
        json.dumps(
            {
                "deadline_prob": deadline_prob,
                "on_time_expectation": on_time,
                "robustness": robustness,
            }
        )
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochanneal",
        description="Simulation-budget annealing experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a scheduling instance file")
    gen.add_argument("j", type=int, help="number of jobs")
    gen.add_argument("r", type=int, help="number of precedence relations")
    gen.add_argument("m", type=int, help="number of machines")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="output path (default <name>.inst)")
    gen.set_defaults(func=cmd_generate)

    runp = sub.add_parser("run", help="run a configured experiment sweep")
    runp.add_argument("--config", required=True)
    runp.add_argument("--out", required=True, help="output directory")
    runp.add_argument("--jobs", type=int, default=1, help="worker processes")
    runp.add_argument("--seed", type=int, default=None, help="override base seed")
    runp.set_defaults(func=cmd_run)

    ev = sub.add_parser("evaluate", help="evaluate a schedule with fresh simulations")
    ev.add_argument("--instance", required=True)
    ev.add_argument("--schedule", required=True)
    ev.add_argument("--sims", type=int, default=10000)
    ev.add_argument("--seed", type=int, default=0)
    ev.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary: report and signal failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
