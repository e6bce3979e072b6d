"""Stochastic parallel machine scheduling with a robustness objective.

Jobs with release dates, precedence constraints and normally distributed
processing times (stdev = ``sigma_factor`` times the mean, truncated at zero)
must be placed on ``m`` identical machines.  A solution is a *baseline
schedule*: a machine and planned start time per job.  When processing times
are realized, the schedule is executed under the policy "start as early as
possible, but never before the planned start", keeping the planned machine
orders.

Robustness is scored on two axes per realization:

* quality robustness — did every job finish by the deadline;
* solution robustness — the fraction of jobs that started exactly at their
  planned time.

The search objective blends the two with an adaptive weight steered toward
whichever axis is currently lagging; the reported final score is always the
plain average of the two, estimated over fresh scenarios.

Schedules are generated from (machine assignment, machine order, buffer after
each job): planned starts are the earliest times consistent with release
dates, predecessor planned completions and machine order, where a job's
planned completion reserves its mean duration plus its buffer.  Buffers exist
only in the plan — execution never waits for them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .scenarios import Direction, ScenarioId, _range_of, scenario_normal_matrix

__all__ = [
    "SpmspInstance",
    "SpmspSchedule",
    "RobustnessSample",
    "generate_instance",
    "instance_name",
    "parse_instance_name",
    "simulate_schedule",
    "robustness_objective",
    "greedy_schedule",
    "build_schedule",
    "SpmspNeighborhood",
    "RobustSchedulingProblem",
    "final_evaluate",
    "save_instance",
    "load_instance",
    "save_schedule",
    "load_schedule",
]

GENERATOR_VERSION = "spmsp-gen-1"
_GEN_RNG_TAG = 0x53504D47

# Bounds of the adaptive objective weight; 0.5 is the neutral (reporting) value.
_WEIGHT_LO, _WEIGHT_HI = 0.2, 0.8


@dataclass(frozen=True)
class SpmspInstance:
    """Problem data; precedence edges are (predecessor, successor) pairs."""

    means: tuple[float, ...]
    release: tuple[float, ...]
    precedence: tuple[tuple[int, int], ...]
    machines: int
    deadline: float
    sigma_factor: float = 0.4
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        j = len(self.means)
        if len(self.release) != j:
            raise ValueError("release dates and means must have equal length")
        if self.machines < 1:
            raise ValueError("need at least one machine")
        if any(r < 0 for r in self.release):
            raise ValueError("release dates must be nonnegative")
        if self.deadline <= max(self.release, default=0.0):
            raise ValueError("deadline must exceed every release date")
        if self.sigma_factor < 0:
            raise ValueError("sigma_factor must be nonnegative")
        for u, v in self.precedence:
            if not (0 <= u < j and 0 <= v < j and u != v):
                raise ValueError(f"bad precedence edge ({u}, {v})")
        if _topological_order(j, self.precedence) is None:
            raise ValueError("precedence graph contains a cycle")

    @property
    def n_jobs(self) -> int:
        return len(self.means)

    def predecessors(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in range(self.n_jobs)]
        for u, v in self.precedence:
            preds[v].append(u)
        return preds

    def successors(self) -> list[list[int]]:
        succs: list[list[int]] = [[] for _ in range(self.n_jobs)]
        for u, v in self.precedence:
            succs[u].append(v)
        return succs


@dataclass(frozen=True)
class SpmspSchedule:
    """Baseline schedule: per-job machine, planned start and plan buffer."""

    machine_of: tuple[int, ...]
    planned_start: tuple[float, ...]
    buffer_after: tuple[float, ...]

    def machine_orders(self, machines: int) -> list[list[int]]:
        """Per-machine job order, derived from the planned starts."""
        orders: list[list[int]] = [[] for _ in range(machines)]
        for job in sorted(
            range(len(self.machine_of)),
            key=lambda i: (self.planned_start[i], i),
        ):
            orders[self.machine_of[job]].append(job)
        return orders


@dataclass(frozen=True)
class RobustnessSample:
    """One realization's outcome: deadline met (0/1) and on-time fraction."""

    deadline_met: int
    on_time_fraction: float


def robustness_objective(sample: RobustnessSample, weight: float) -> float:
    """Convex blend of the two robustness axes; ``weight`` favors the deadline."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    return weight * sample.deadline_met + (1.0 - weight) * sample.on_time_fraction


def instance_name(j: int, r: int, m: int) -> str:
    return f"{j}j-{r}r-{m}m"


def parse_instance_name(name: str) -> tuple[int, int, int]:
    parts = name.split("-")
    if len(parts) != 3 or not (
        parts[0].endswith("j") and parts[1].endswith("r") and parts[2].endswith("m")
    ):
        raise ValueError(f"instance name not of the form '<j>j-<r>r-<m>m': {name!r}")
    return int(parts[0][:-1]), int(parts[1][:-1]), int(parts[2][:-1])


def _topological_order(
    n: int, edges: Sequence[tuple[int, int]]
) -> list[int] | None:
    """Kahn's algorithm; None when the edge set is cyclic."""
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        indeg[v] += 1
        succs[u].append(v)
    ready = [i for i in range(n) if indeg[i] == 0]
    order: list[int] = []
    while ready:
        node = ready.pop()
        order.append(node)
        for nxt in succs[node]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    return order if len(order) == n else None


# ---------------------------------------------------------------------------
# Instance generation
# ---------------------------------------------------------------------------


def generate_instance(j: int, r: int, m: int, seed: int) -> SpmspInstance:
    """Random instance: ``j`` jobs, ``r`` precedence edges, ``m`` machines.

    Means are uniform on [10, 50], release dates uniform on the first quarter
    of the mean machine load, precedence edges are sampled uniformly among
    pairs consistent with a random topological order, and the deadline gives
    a greedy mean-value schedule 15% slack.
    """
    if j < 1 or m < 1:
        raise ValueError("need j >= 1 and m >= 1")
    max_edges = j * (j - 1) // 2
    if r < 0 or r > max_edges:
        raise ValueError(f"r must lie in [0, {max_edges}] for {j} jobs, got {r}")
    rng = np.random.default_rng((seed, _GEN_RNG_TAG))
    means = rng.uniform(10.0, 50.0, size=j)
    horizon = means.sum() / m
    release = rng.uniform(0.0, 0.25 * horizon, size=j)
    topo = rng.permutation(j)
    pairs = [
        (int(topo[a]), int(topo[b])) for a in range(j) for b in range(a + 1, j)
    ]
    chosen = rng.choice(len(pairs), size=r, replace=False) if r else []
    edges = tuple(sorted(pairs[int(i)] for i in chosen))

    probe = SpmspInstance(
        means=tuple(float(x) for x in means),
        release=tuple(float(x) for x in release),
        precedence=edges,
        machines=m,
        deadline=float("inf"),
        sigma_factor=0.4,
    )
    makespan = _greedy_makespan(probe)
    meta = {
        "generator": GENERATOR_VERSION,
        "seed": int(seed),
        "name": instance_name(j, r, m),
    }
    return SpmspInstance(
        means=probe.means,
        release=probe.release,
        precedence=edges,
        machines=m,
        deadline=1.15 * makespan,
        sigma_factor=0.4,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Baseline schedule construction
# ---------------------------------------------------------------------------


def build_schedule(
    instance: SpmspInstance,
    machine_of: Sequence[int],
    machine_orders: Sequence[Sequence[int]],
    buffer_after: Sequence[float],
) -> SpmspSchedule | None:
    """Planned starts from assignment, order and buffers; None when cyclic.

    A job's planned start is the earliest time at or after its release date,
    after every predecessor's planned completion and after its machine
    predecessor's planned completion, where planned completion = start +
    mean + buffer.  The pass fails exactly when precedence and machine order
    together contain a cycle.
    """
    j = instance.n_jobs
    combined = list(instance.precedence)
    for order in machine_orders:
        combined.extend(zip(order, order[1:]))
    topo = _topological_order(j, combined)
    if topo is None:
        return None
    preds = instance.predecessors()
    machine_pred: dict[int, int] = {}
    for order in machine_orders:
        for a, b in zip(order, order[1:]):
            machine_pred[b] = a
    start = [0.0] * j
    for job in topo:
        t = instance.release[job]
        for p in preds[job]:
            t = max(t, start[p] + instance.means[p] + buffer_after[p])
        mp = machine_pred.get(job)
        if mp is not None:
            t = max(t, start[mp] + instance.means[mp] + buffer_after[mp])
        start[job] = t
    return SpmspSchedule(
        machine_of=tuple(int(x) for x in machine_of),
        planned_start=tuple(start),
        buffer_after=tuple(float(b) for b in buffer_after),
    )


def greedy_schedule(instance: SpmspInstance) -> SpmspSchedule:
    """Earliest-completion list schedule on mean durations, zero buffers."""
    j = instance.n_jobs
    preds = instance.predecessors()
    remaining_preds = [len(p) for p in preds]
    completion = [0.0] * j
    machine_free = [0.0] * instance.machines
    machine_of = [-1] * j
    orders: list[list[int]] = [[] for _ in range(instance.machines)]
    ready = sorted(i for i in range(j) if remaining_preds[i] == 0)
    scheduled = 0
    succs = instance.successors()
    while scheduled < j:
        best = None  # (completion, start, job, machine)
        for job in ready:
            earliest = max(
                instance.release[job],
                max((completion[p] for p in preds[job]), default=0.0),
            )
            for mach in range(instance.machines):
                s = max(earliest, machine_free[mach])
                c = s + instance.means[job]
                cand = (c, s, job, mach)
                if best is None or cand < best:
                    best = cand
        assert best is not None
        c, s, job, mach = best
        machine_of[job] = mach
        orders[mach].append(job)
        completion[job] = c
        machine_free[mach] = c
        ready.remove(job)
        scheduled += 1
        for nxt in succs[job]:
            remaining_preds[nxt] -= 1
            if remaining_preds[nxt] == 0:
                ready.append(nxt)
        ready.sort()
    schedule = build_schedule(instance, machine_of, orders, [0.0] * j)
    assert schedule is not None
    return schedule


def _greedy_makespan(instance: SpmspInstance) -> float:
    schedule = greedy_schedule(instance)
    return max(
        s + m for s, m in zip(schedule.planned_start, instance.means)
    )


# ---------------------------------------------------------------------------
# Execution-policy simulation
# ---------------------------------------------------------------------------


class _CompiledSchedule:
    """Topological evaluation order and lookups reused across scenarios."""

    def __init__(self, instance: SpmspInstance, schedule: SpmspSchedule):
        orders = schedule.machine_orders(instance.machines)
        combined = list(instance.precedence)
        for order in orders:
            combined.extend(zip(order, order[1:]))
        topo = _topological_order(instance.n_jobs, combined)
        if topo is None:
            raise ValueError("schedule's machine orders conflict with precedence")
        self.topo = np.asarray(topo, dtype=np.int64)
        self.preds = instance.predecessors()
        self.machine_pred = {}
        for order in orders:
            for a, b in zip(order, order[1:]):
                self.machine_pred[b] = a
        self.planned = np.asarray(schedule.planned_start)
        # CSR predecessor lists for the compiled kernel
        counts = [len(p) for p in self.preds]
        self.preds_indptr = np.zeros(instance.n_jobs + 1, dtype=np.int64)
        np.cumsum(counts, out=self.preds_indptr[1:])
        self.preds_flat = np.fromiter(
            (p for plist in self.preds for p in plist), dtype=np.int64
        )
        self.machine_pred_arr = np.array(
            [self.machine_pred.get(job, -1) for job in range(instance.n_jobs)],
            dtype=np.int64,
        )


@njit(cache=True)
def _execute_kernel(topo, preds_indptr, preds_flat, machine_pred, planned, durations, deadline):
    n_scen, j = durations.shape
    completion = np.empty((n_scen, j))
    on_time = np.zeros(n_scen)
    for idx in range(j):
        job = topo[idx]
        p_lo, p_hi = preds_indptr[job], preds_indptr[job + 1]
        mp = machine_pred[job]
        planned_start = planned[job]
        for s in range(n_scen):
            t = planned_start
            for k in range(p_lo, p_hi):
                c = completion[s, preds_flat[k]]
                if c > t:
                    t = c
            if mp >= 0:
                c = completion[s, mp]
                if c > t:
                    t = c
            completion[s, job] = t + durations[s, job]
            if t == planned_start:
                on_time[s] += 1.0
    met = np.empty(n_scen, dtype=np.bool_)
    for s in range(n_scen):
        worst = completion[s, 0]
        for k in range(1, j):
            if completion[s, k] > worst:
                worst = completion[s, k]
        met[s] = worst <= deadline
    return met, on_time / j


def _execute_reference(
    compiled: _CompiledSchedule, durations: np.ndarray, deadline: float
) -> tuple[np.ndarray, np.ndarray]:
    """Plain-numpy twin of the kernel, kept as the readable reference."""
    n_scen, j = durations.shape
    completion = np.empty((n_scen, j))
    on_time = np.zeros(n_scen)
    planned = compiled.planned
    for job in compiled.topo:
        t = np.full(n_scen, planned[job])
        for p in compiled.preds[job]:
            np.maximum(t, completion[:, p], out=t)
        mp = compiled.machine_pred.get(job)
        if mp is not None:
            np.maximum(t, completion[:, mp], out=t)
        completion[:, job] = t + durations[:, job]
        on_time += t == planned[job]
    deadline_met = completion.max(axis=1) <= deadline
    return deadline_met, on_time / j


def _execute(
    compiled: _CompiledSchedule, durations: np.ndarray, deadline: float
) -> tuple[np.ndarray, np.ndarray]:
    """Run the execution policy for a batch of realizations.

    Returns (deadline_met, on_time_fraction) arrays over scenarios.  Jobs
    start at the max of planned start, machine availability and predecessor
    completions, so a job is on time exactly when the other terms do not
    exceed its planned start.
    """
    return _execute_kernel(
        compiled.topo,
        compiled.preds_indptr,
        compiled.preds_flat,
        compiled.machine_pred_arr,
        compiled.planned,
        np.ascontiguousarray(durations),
        deadline,
    )


def simulate_schedule(
    instance: SpmspInstance, schedule: SpmspSchedule, scenario: ScenarioId
) -> RobustnessSample:
    """Execute one realization of the processing times."""
    z = scenario_normal_matrix([scenario], instance.n_jobs)
    means = np.asarray(instance.means)
    durations = np.maximum(means + instance.sigma_factor * means * z, 0.0)
    compiled = _CompiledSchedule(instance, schedule)
    met, otf = _execute(compiled, durations, instance.deadline)
    return RobustnessSample(int(met[0]), float(otf[0]))


# ---------------------------------------------------------------------------
# Problem adapter for the annealer
# ---------------------------------------------------------------------------


class RobustSchedulingProblem:
    """Maximization problem over baseline schedules with the adaptive blend.

    The objective weight is refreshed at the top of every annealing iteration
    from the incumbent's latest component estimates: the weight of the
    deadline axis grows when deadline performance lags the on-time fraction
    and vice versa, clamped to [0.2, 0.8].  Component estimates are collected
    as a side effect of cost sampling and kept for one iteration.
    """

    direction = Direction.MAXIMIZE

    def __init__(self, instance: SpmspInstance):
        self.instance = instance
        self.weight = 0.5
        self._means = np.asarray(instance.means)
        self._sigma = instance.sigma_factor * self._means
        self._dur_cache: dict[tuple, np.ndarray] = {}
        self._compiled: dict[SpmspSchedule, _CompiledSchedule] = {}
        self._components: dict[SpmspSchedule, list[float]] = {}

    def initial_solution(self) -> SpmspSchedule:
        return greedy_schedule(self.instance)

    def begin_iteration(self, current: SpmspSchedule) -> None:
        comp = self._components.get(current)
        if comp is not None:
            sum_met, sum_otf, n = comp
            if n > 0 and sum_met + sum_otf > 0:
                self.weight = min(
                    _WEIGHT_HI, max(_WEIGHT_LO, sum_otf / (sum_met + sum_otf))
                )
        self._components.clear()
        self._dur_cache.clear()
        if len(self._compiled) > 64:
            self._compiled.clear()

    def _compile(self, schedule: SpmspSchedule) -> _CompiledSchedule:
        compiled = self._compiled.get(schedule)
        if compiled is None:
            compiled = _CompiledSchedule(self.instance, schedule)
            self._compiled[schedule] = compiled
        return compiled

    def _durations(self, scenarios: Sequence[ScenarioId]) -> np.ndarray:
        # Cache whole batches: CRN evaluation asks for the identical batch
        # once per solution, so batch-level reuse is exact.
        key = _range_of(scenarios)
        if key is not None:
            cached = self._dur_cache.get(key)
            if cached is not None:
                return cached
        z = scenario_normal_matrix(scenarios, self.instance.n_jobs)
        draws = np.maximum(self._means + self._sigma * z, 0.0)
        if key is not None:
            self._dur_cache[key] = draws
            if len(self._dur_cache) > 256:
                self._dur_cache.clear()
        return draws

    def _scores(
        self, schedule: SpmspSchedule, durations: np.ndarray, weight: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        met, otf = _execute(self._compile(schedule), durations, self.instance.deadline)
        return weight * met + (1.0 - weight) * otf, met, otf

    def sample_cost(self, solution: SpmspSchedule, scenario: ScenarioId) -> float:
        return float(self.sample_costs(solution, [scenario])[0])

    def sample_costs(
        self, solution: SpmspSchedule, scenarios: Sequence[ScenarioId]
    ) -> np.ndarray:
        scores, met, otf = self._scores(solution, self._durations(scenarios), self.weight)
        comp = self._components.setdefault(solution, [0.0, 0.0, 0])
        comp[0] += float(met.sum())
        comp[1] += float(otf.sum())
        comp[2] += len(scenarios)
        return scores

    def audit_costs(
        self, solution: SpmspSchedule, scenarios: Sequence[ScenarioId]
    ) -> np.ndarray:
        """Best-score audit always uses the neutral 0.5/0.5 blend."""
        scores, _, _ = self._scores(solution, self._durations(scenarios), 0.5)
        return scores

    def exact_cost(self, solution: SpmspSchedule) -> float | None:
        if self.instance.sigma_factor != 0.0:
            return None
        scores, _, _ = self._scores(solution, self._means[None, :], self.weight)
        return float(scores[0])


def final_evaluate(
    instance: SpmspInstance,
    schedule: SpmspSchedule,
    sims: int = 10000,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Estimate (deadline probability, on-time expectation, robustness).

    Fresh scenarios derived from ``seed``; robustness is the plain average of
    the two fractions.
    """
    if sims < 1:
        raise ValueError("sims must be >= 1")
    means = np.asarray(instance.means)
    sigma = instance.sigma_factor * means
    compiled = _CompiledSchedule(instance, schedule)
    met_total, otf_total = 0.0, 0.0
    done = 0
    while done < sims:  # chunked so 10^4+ evaluations stay memory-friendly
        count = min(4096, sims - done)
        sids = [ScenarioId(seed, 0, done + i) for i in range(count)]
        z = scenario_normal_matrix(sids, instance.n_jobs)
        durations = np.maximum(means + sigma * z, 0.0)
        met, otf = _execute(compiled, durations, instance.deadline)
        met_total += float(met.sum())
        otf_total += float(otf.sum())
        done += count
    deadline_prob = met_total / sims
    on_time = otf_total / sims
    return deadline_prob, on_time, 0.5 * (deadline_prob + on_time)


# ---------------------------------------------------------------------------
# Neighborhood moves
# ---------------------------------------------------------------------------


class SpmspNeighborhood:
    """One of four moves, uniformly: relocate a job, swap two jobs, resize a
    buffer, or shift part of a buffer to a plan-adjacent job.  Proposals that
    break feasibility (machine order cycling against precedence) are redrawn
    up to ``max_retries`` times; after that the schedule is returned
    unchanged."""

    def __init__(self, instance: SpmspInstance, max_retries: int = 100):
        self.instance = instance
        self.max_retries = max_retries
        self.failed_proposals = 0
        self._preds = instance.predecessors()
        self._succs = instance.successors()

    def propose(self, schedule: SpmspSchedule, rng: np.random.Generator):
        for _ in range(self.max_retries):
            move = int(rng.integers(4))
            candidate = self._apply(schedule, move, rng)
            if candidate is not None:
                return candidate
        self.failed_proposals += 1
        return schedule

    def _apply(self, schedule: SpmspSchedule, move: int, rng) -> SpmspSchedule | None:
        inst = self.instance
        j = inst.n_jobs
        orders = schedule.machine_orders(inst.machines)
        machine_of = list(schedule.machine_of)
        buffers = list(schedule.buffer_after)
        if move == 0:  # relocate one job
            job = int(rng.integers(j))
            target = int(rng.integers(inst.machines))
            orders[machine_of[job]].remove(job)
            pos = int(rng.integers(len(orders[target]) + 1))
            orders[target].insert(pos, job)
            machine_of[job] = target
        elif move == 1:  # swap two jobs across the whole plan
            if j < 2:
                return None
            a, b = (int(x) for x in rng.choice(j, size=2, replace=False))
            ma, mb = machine_of[a], machine_of[b]
            ia, ib = orders[ma].index(a), orders[mb].index(b)
            orders[ma][ia], orders[mb][ib] = b, a
            machine_of[a], machine_of[b] = mb, ma
        elif move == 2:  # perturb one buffer
            job = int(rng.integers(j))
            delta = rng.uniform(-0.5, 0.5) * inst.means[job]
            buffers[job] = max(0.0, buffers[job] + delta)
        else:  # shift part of a buffer to a plan neighbor
            holders = [i for i in range(j) if buffers[i] > 0.0]
            if not holders:
                return None
            job = int(holders[int(rng.integers(len(holders)))])
            targets = set(self._preds[job]) | set(self._succs[job])
            order = orders[machine_of[job]]
            pos = order.index(job)
            if pos > 0:
                targets.add(order[pos - 1])
            if pos + 1 < len(order):
                targets.add(order[pos + 1])
            targets.discard(job)
            if not targets:
                return None
            target = sorted(targets)[int(rng.integers(len(targets)))]
            amount = rng.uniform(0.0, 1.0) * buffers[job]
            buffers[job] -= amount
            buffers[target] += amount
        return build_schedule(inst, machine_of, orders, buffers)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def save_instance(instance: SpmspInstance, path) -> None:
    payload = {
        "format": "spmsp-instance",
        "jobs": [
            {"mean": m, "release": r}
            for m, r in zip(instance.means, instance.release)
        ],
        "precedence": [list(e) for e in instance.precedence],
        "machines": instance.machines,
        "deadline": instance.deadline,
        "sigma_factor": instance.sigma_factor,
        "generator": instance.meta,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_instance(path) -> SpmspInstance:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != "spmsp-instance":
        raise ValueError(f"{path}: not an spmsp instance file")
    return SpmspInstance(
        means=tuple(job["mean"] for job in payload["jobs"]),
        release=tuple(job["release"] for job in payload["jobs"]),
        precedence=tuple((int(u), int(v)) for u, v in payload["precedence"]),
        machines=int(payload["machines"]),
        deadline=float(payload["deadline"]),
        sigma_factor=float(payload["sigma_factor"]),
        meta=dict(payload.get("generator", {})),
    )


def save_schedule(schedule: SpmspSchedule, path) -> None:
    payload = {
        "format": "spmsp-schedule",
        "jobs": [
            {"machine": m, "planned_start": s}
            for m, s in zip(schedule.machine_of, schedule.planned_start)
        ],
        "buffer_after": list(schedule.buffer_after),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_schedule(path) -> SpmspSchedule:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != "spmsp-schedule":
        raise ValueError(f"{path}: not an spmsp schedule file")
    machine_of = tuple(int(job["machine"]) for job in payload["jobs"])
    planned = tuple(float(job["planned_start"]) for job in payload["jobs"])
    buffers = payload.get("buffer_after")
    if buffers is None:
        buffers = [0.0] * len(machine_of)
    return SpmspSchedule(machine_of, planned, tuple(float(b) for b in buffers))
