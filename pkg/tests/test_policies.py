"""Budget policies: allocation arithmetic, stopping rules, and properties."""

import math

import numpy as np
import pytest

from stochanneal.policies import (
    ComparisonOutcome,
    PolicyConfig,
    Variant,
    Verdict,
    compare,
    compare_const,
    compare_iz,
    compare_ocba,
    compare_ttest,
    ocba_split,
    one_sided_p,
    t_statistic,
    two_sided_p,
)
from stochanneal.scenarios import Direction
from stochanneal.synthetic import SyntheticNormalProblem


def _mk(variant, n_max=400, n0=80, delta=10, alpha=0.2, dstar=1.0):
    return PolicyConfig(
        variant=variant,
        n_max=n_max,
        n0=n0,
        delta=delta,
        alpha_conf=alpha,
        delta_star=dstar,
    )


class _Negated:
    """Mirror of a problem: costs negated, direction flipped."""

    def __init__(self, inner):
        self._inner = inner
        self.direction = (
            Direction.MAXIMIZE
            if inner.direction is Direction.MINIMIZE
            else Direction.MINIMIZE
        )

    def sample_cost(self, solution, scenario):
        return -self._inner.sample_cost(solution, scenario)

    def sample_costs(self, solution, scenarios):
        return -self._inner.sample_costs(solution, scenarios)

    def exact_cost(self, solution):
        inner = self._inner.exact_cost(solution)
        return None if inner is None else -inner


# ---------------------------------------------------------------------------
# t-statistic arithmetic
# ---------------------------------------------------------------------------


def test_t_statistic_reference_case():
    assert t_statistic(1.0, 4.0, 16) == 2.0
    # mpmath oracle: 2*F_15(-2) = 0.06394500728472021...
    assert two_sided_p(2.0, 15) == pytest.approx(0.06394500728472021, abs=1e-6)
    assert two_sided_p(2.0, 15) < 0.2  # stops at alpha_conf = 0.2


def test_t_statistic_degenerate_variance():
    assert t_statistic(1.0, 0.0, 16) == float("inf")
    assert t_statistic(-1.0, 0.0, 16) == float("-inf")
    assert t_statistic(0.5, 0.0, 16, shift=0.5) == 0.0
    assert two_sided_p(float("inf"), 15) == 0.0
    assert one_sided_p(float("inf"), 15) == 0.0
    assert one_sided_p(float("-inf"), 15) == 1.0


def test_two_sided_p_of_zero_is_one():
    assert two_sided_p(0.0, 15) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# OCBA split
# ---------------------------------------------------------------------------


def test_ocba_split_symmetric():
    assert ocba_split(80, 80, 1.5, 1.5, 10) == (85, 85)


def test_ocba_split_ratio_two():
    # scan over i of |(90 - i)/(80 + i) - 2| is minimized at i = 0
    assert ocba_split(80, 80, 2.0, 1.0, 10) == (90, 80)


def test_ocba_split_degenerate_deviations():
    assert ocba_split(80, 80, 0.0, 1.0, 10) == (80, 90)
    assert ocba_split(80, 80, 1.0, 0.0, 10) == (90, 80)
    assert ocba_split(80, 80, 0.0, 0.0, 10) == (85, 85)
    assert ocba_split(80, 80, 0.0, 0.0, 11) == (86, 85)  # odd remainder to first


def test_ocba_split_preserves_total():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n1, n2 = rng.integers(1, 300, size=2)
        delta = int(rng.integers(0, 40))
        s1, s2 = rng.uniform(0.0, 5.0, size=2)
        better = bool(rng.integers(2))
        a, b = ocba_split(int(n1), int(n2), s1, s2, delta, better)
        assert a + b == n1 + n2 + delta
        assert a >= n1 and b >= n2


def test_ocba_split_matches_exhaustive_scan():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        n1 = int(rng.integers(1, 500))
        n2 = int(rng.integers(1, 500))
        s1 = float(rng.uniform(0.01, 10.0))
        s2 = float(rng.uniform(0.01, 10.0))
        delta = int(rng.integers(0, 60))
        better = bool(rng.integers(2))
        got = ocba_split(n1, n2, s1, s2, delta, better)
        if better:
            errs = [
                abs((n1 + delta - i) / (n2 + i) - s1 / s2) for i in range(delta + 1)
            ]
            i = int(np.argmin(errs))
            expected = (n1 + delta - i, n2 + i)
        else:
            errs = [
                abs((n2 + delta - i) / (n1 + i) - s2 / s1) for i in range(delta + 1)
            ]
            i = int(np.argmin(errs))
            expected = (n1 + i, n2 + delta - i)
        assert got == expected


# ---------------------------------------------------------------------------
# Const
# ---------------------------------------------------------------------------


def test_const_budget_exact():
    problem = SyntheticNormalProblem((1.0, 2.0), (1.0, 1.0))
    out = compare_const(
        problem, 0, 1, _mk(Variant.CONST, 400), True, master_seed=1, iteration=0
    )
    assert out.stats_current.n == 200 and out.stats_neighbor.n == 200
    assert out.sims_total == 400
    assert out.verdict is Verdict.BY_MEANS

    small = compare_const(
        problem, 0, 1, _mk(Variant.CONST, 20), True, master_seed=1, iteration=0
    )
    assert small.stats_current.n == 10 and small.sims_total == 20


def test_const_identical_solutions_crn_tie():
    problem = SyntheticNormalProblem((3.0,), (2.0,))
    out = compare_const(
        problem, 0, 0, _mk(Variant.CONST, 100), True, master_seed=4, iteration=2
    )
    assert out.stats_current.mean == out.stats_neighbor.mean


def test_const_no_crn_differs():
    problem = SyntheticNormalProblem((3.0,), (2.0,))
    out = compare_const(
        problem, 0, 0, _mk(Variant.CONST_NO_CRN, 100), False, master_seed=4, iteration=2
    )
    assert out.stats_current.mean != out.stats_neighbor.mean


# ---------------------------------------------------------------------------
# OCBA comparison
# ---------------------------------------------------------------------------


def test_ocba_spends_full_budget():
    problem = SyntheticNormalProblem((1.0, 1.5), (1.0, 1.0))
    cfg = _mk(Variant.OCBA, n_max=400, n0=80, delta=10)
    out = compare_ocba(problem, 0, 1, cfg, master_seed=2, iteration=0)
    assert out.sims_total == 400
    assert out.verdict is Verdict.BY_MEANS


def test_ocba_zero_variance_even_split():
    problem = SyntheticNormalProblem((1.0, 2.0), (0.0, 0.0))
    cfg = _mk(Variant.OCBA, n_max=400, n0=80, delta=10)
    out = compare_ocba(problem, 0, 1, cfg, master_seed=2, iteration=0)
    assert out.stats_current.n == 200 and out.stats_neighbor.n == 200
    assert out.stats_current.mean == 1.0 and out.stats_neighbor.mean == 2.0


def test_ocba_allocates_to_noisy_solution():
    problem = SyntheticNormalProblem((0.0, 0.0), (5.0, 1.0))
    cfg = _mk(Variant.OCBA, n_max=400, n0=80, delta=10)
    out = compare_ocba(problem, 0, 1, cfg, master_seed=3, iteration=1)
    assert out.stats_current.n > out.stats_neighbor.n
    assert out.sims_total == 400


# ---------------------------------------------------------------------------
# Indifference zones
# ---------------------------------------------------------------------------


def test_iz_zero_variance_stops_after_first_stage():
    problem = SyntheticNormalProblem((1.0, 2.0), (0.0, 0.0))
    cfg = _mk(Variant.IZ, n_max=400, n0=80, delta=10, dstar=0.5)
    out = compare_iz(problem, 0, 1, 0.0, cfg, False, master_seed=5, iteration=0)
    assert out.sims_total == 160
    assert out.rounds == 1


def test_iz_identical_solutions_run_to_cap():
    problem = SyntheticNormalProblem((1.0,), (1.0,))
    cfg = _mk(Variant.IZ, n_max=400, n0=80, delta=10, dstar=0.001)
    out = compare_iz(problem, 0, 0, 0.0, cfg, False, master_seed=5, iteration=1)
    assert out.sims_total == 400
    assert out.stats_current.mean == out.stats_neighbor.mean


def test_iz_wide_gap_stops_early_and_selects_correctly():
    # true means one and eleven indifference widths apart, sigma = delta*
    dstar = 0.5
    problem = SyntheticNormalProblem((100.0, 100.0 + 10 * dstar), (dstar, dstar))
    cfg = _mk(Variant.IZ, n_max=400, n0=20, delta=10, dstar=dstar)
    correct = 0
    capped = 0
    for trial in range(1000):
        out = compare_iz(problem, 0, 1, 0.0, cfg, False, master_seed=11, iteration=trial)
        if out.sims_total < 400:
            capped += 1
        if out.stats_current.mean < out.stats_neighbor.mean:
            correct += 1
    assert capped >= 990  # stops before the cap with high probability
    assert correct >= 1000 * (1 - cfg.alpha_conf)


def test_iz_shift_makes_neighbor_look_better():
    # With a strongly negative D the shifted neighbor mean ties the current
    # one, so the D-aware variant needs more simulations than the plain one.
    problem = SyntheticNormalProblem((10.0, 12.0), (1.0, 1.0))
    base = _mk(Variant.IZ, n_max=400, n0=20, delta=10, dstar=0.1)
    shifted = _mk(Variant.IZ_D, n_max=400, n0=20, delta=10, dstar=0.1)
    sims_plain = []
    sims_shifted = []
    for it in range(50):
        out0 = compare_iz(problem, 0, 1, -2.0, base, False, master_seed=6, iteration=it)
        outd = compare_iz(problem, 0, 1, -2.0, shifted, True, master_seed=6, iteration=it)
        sims_plain.append(out0.sims_total)
        sims_shifted.append(outd.sims_total)
    assert np.mean(sims_shifted) > np.mean(sims_plain)


# ---------------------------------------------------------------------------
# t-tests
# ---------------------------------------------------------------------------


def test_ttest_zero_variance_distinct_stops_at_n0():
    problem = SyntheticNormalProblem((1.0, 3.0), (0.0, 0.0))
    for variant in (Variant.TTEST0, Variant.TTEST_D):
        cfg = _mk(variant, n_max=400, n0=80, delta=20)
        out = compare_ttest(problem, 0, 1, -0.7, cfg, master_seed=7, iteration=0)
        assert out.sims_total == 160
        assert out.verdict is Verdict.BY_MEANS
        assert out.stats_current.mean == 1.0
        assert out.stats_neighbor.mean == 3.0


def test_ttest_exact_tie_runs_to_cap():
    problem = SyntheticNormalProblem((2.0,), (1.0,))
    cfg = _mk(Variant.TTEST0, n_max=400, n0=80, delta=20)
    out = compare_ttest(problem, 0, 0, -0.1, cfg, master_seed=7, iteration=1)
    assert out.sims_total == 400  # all differences identically zero


def test_double_ttest_direct_accept_on_strong_allowed_difference():
    problem = SyntheticNormalProblem((5.0, 5.0), (1.0, 1.0))
    cfg = _mk(Variant.DOUBLE_TTEST, n_max=400, n0=20, delta=20)
    out = compare_ttest(problem, 0, 1, -3.0, cfg, master_seed=8, iteration=0)
    assert out.verdict is Verdict.DIRECT_ACCEPT
    assert out.sims_total == 40  # decided on the first stage


def test_double_ttest_zero_variance_tie_direct_accepts():
    # identical deterministic solutions: test 1 ties forever, test 2 fires
    problem = SyntheticNormalProblem((5.0,), (0.0,))
    cfg = _mk(Variant.DOUBLE_TTEST, n_max=400, n0=20, delta=20)
    out = compare_ttest(problem, 0, 0, -1.0, cfg, master_seed=8, iteration=1)
    assert out.verdict is Verdict.DIRECT_ACCEPT
    assert out.sims_total == 40


def test_ttest_dispatcher_routes_variants():
    problem = SyntheticNormalProblem((1.0, 5.0), (0.5, 0.5))
    for variant in Variant:
        cfg = _mk(variant, n_max=200, n0=20, delta=10, dstar=0.5)
        out = compare(problem, 0, 1, -0.2, cfg, master_seed=9, iteration=0)
        assert isinstance(out, ComparisonOutcome)
        assert out.sims_total <= cfg.n_max


# ---------------------------------------------------------------------------
# Cross-variant properties
# ---------------------------------------------------------------------------


def test_budget_cap_never_exceeded():
    rng = np.random.default_rng(23)
    problem = SyntheticNormalProblem((1.0, 1.2), (1.0, 2.0))
    for _ in range(60):
        variant = list(Variant)[int(rng.integers(len(Variant)))]
        n0 = int(rng.integers(2, 30))
        delta = int(rng.integers(1, 25))
        n_max = 2 * int(rng.integers(n0, 120))
        cfg = _mk(variant, n_max=n_max, n0=n0, delta=delta, dstar=0.05)
        D = -float(rng.uniform(0.0, 2.0))
        out = compare(
            problem, 0, 1, D, cfg, master_seed=31, iteration=int(rng.integers(1000))
        )
        assert out.sims_total <= n_max, (variant, n0, delta, n_max)


def test_orientation_symmetry():
    problem = SyntheticNormalProblem((4.0, 4.3), (1.0, 1.5))
    mirror = _Negated(problem)
    for variant in Variant:
        cfg = _mk(variant, n_max=200, n0=20, delta=10, dstar=0.1)
        for it in range(10):
            a = compare(problem, 0, 1, -0.3, cfg, master_seed=13, iteration=it)
            b = compare(mirror, 0, 1, -0.3, cfg, master_seed=13, iteration=it)
            assert a.sims_total == b.sims_total, variant
            assert a.verdict is b.verdict, variant
            assert a.rounds == b.rounds, variant
            assert a.stats_current.mean == pytest.approx(-b.stats_current.mean)


def test_double_ttest_direct_accept_is_sound():
    # When the shortcut fires, an independent large re-check should agree
    # that the difference really exceeds D in nearly all audited cases.
    rng = np.random.default_rng(29)
    cfg = _mk(Variant.DOUBLE_TTEST, n_max=400, n0=20, delta=20)
    audited = 0
    confirmed = 0
    trial = 0
    while audited < 200 and trial < 4000:
        trial += 1
        gap = float(rng.uniform(0.05, 0.6))  # true difference minus D
        D = -float(rng.uniform(0.2, 1.0))
        problem = SyntheticNormalProblem((5.0, 5.0 - D - gap), (1.0, 1.0))
        out = compare_ttest(problem, 0, 1, D, cfg, master_seed=37, iteration=trial)
        if out.verdict is not Verdict.DIRECT_ACCEPT:
            continue
        audited += 1
        from stochanneal.scenarios import sample_costs, scenario_batch

        fresh = scenario_batch(1000 + trial, 0, 0, 10_000)
        diff = (
            sample_costs(problem, 0, fresh) - sample_costs(problem, 1, fresh)
        ).mean()
        if diff > D:
            confirmed += 1
    assert audited == 200
    assert confirmed >= 0.95 * audited


def test_rinott_two_stage_reference_procedure():
    # The classic two-stage selection rule, assembled here from rinott_h as a
    # reference routine: first stage n0 samples, second stage up to
    # N_i = max(n0, ceil((h s_i / delta*)^2)), pick the lowest mean.  With a
    # true gap of exactly delta* the empirical PCS must clear 1 - alpha.
    from stochanneal.scenarios import sample_costs, scenario_batch
    from stochanneal.stats import rinott_h

    n0, dstar, sigma, alpha = 20, 1.0, 2.0, 0.2
    problem = SyntheticNormalProblem((10.0, 10.0 + dstar), (sigma, sigma))
    h = rinott_h(2, n0, alpha)
    correct = 0
    trials = 500
    for trial in range(trials):
        means = []
        for sol in (0, 1):
            base = sol * (1 << 32)
            first = sample_costs(
                problem, sol, scenario_batch(91, trial, base, n0)
            )
            s2 = first.var(ddof=1)
            n_total = max(n0, math.ceil((h * math.sqrt(s2) / dstar) ** 2))
            total = first.sum()
            if n_total > n0:
                extra = sample_costs(
                    problem, sol, scenario_batch(91, trial, base + n0, n_total - n0)
                )
                total += extra.sum()
            means.append(total / n_total)
        correct += means[0] < means[1]
    assert correct / trials >= 1 - alpha - 0.03


def test_policy_config_validation():
    with pytest.raises(ValueError):
        PolicyConfig(Variant.CONST, n_max=99)  # odd
    with pytest.raises(ValueError):
        PolicyConfig(Variant.TTEST0, n_max=100, n0=60, delta=10)  # 2*n0 > n_max
    with pytest.raises(ValueError):
        PolicyConfig(Variant.IZ, n_max=100, n0=10, delta=0)
    with pytest.raises(ValueError):
        PolicyConfig(Variant.TTEST0, n_max=100, n0=10, delta=5, alpha_conf=1.5)
    with pytest.raises(ValueError):
        PolicyConfig(Variant.IZ, n_max=100, n0=10, delta=5, delta_star=0.0)
    # Const needs no stage-one parameters
    PolicyConfig(Variant.CONST, n_max=100)
