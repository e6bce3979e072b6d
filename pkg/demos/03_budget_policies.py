"""How each budget policy spends simulations on the same comparison.

Two synthetic solutions with known means are compared under every policy at
a few allowed differences D.  Difference-aware policies need fewer
simulations when |D| is large (the decision is easy) and the double t-test
can skip the verdict entirely by accepting outright.
"""

from stochanneal.policies import PolicyConfig, Variant, compare
from stochanneal.synthetic import SyntheticNormalProblem

problem = SyntheticNormalProblem(means=(10.0, 10.4), sigmas=(1.0, 1.0))

configs = {
    "Const": PolicyConfig(Variant.CONST, n_max=200),
    "ConstNoCrn": PolicyConfig(Variant.CONST_NO_CRN, n_max=200),
    "OCBA": PolicyConfig(Variant.OCBA, n_max=200, n0=20, delta=5),
    "IZ0": PolicyConfig(Variant.IZ, n_max=200, n0=10, delta=10, alpha_conf=0.1, delta_star=0.2),
    "IZD": PolicyConfig(Variant.IZ_D, n_max=200, n0=10, delta=10, alpha_conf=0.1, delta_star=0.2),
    "TTest0": PolicyConfig(Variant.TTEST0, n_max=200, n0=10, delta=10, alpha_conf=0.2),
    "TTestD": PolicyConfig(Variant.TTEST_D, n_max=200, n0=10, delta=10, alpha_conf=0.2),
    "DoubleTTest": PolicyConfig(Variant.DOUBLE_TTEST, n_max=200, n0=10, delta=10, alpha_conf=0.2),
}

for D in (-0.05, -0.5, -2.0):
    print(f"\nallowed difference D = {D}")
    print(f"  {'policy':<12} {'sims':>5}  {'verdict':<13} mean gap estimate")
    for name, cfg in configs.items():
        sims = []
        verdicts = []
        gap = 0.0
        for it in range(40):
            out = compare(problem, 0, 1, D, cfg, master_seed=3, iteration=it)
            sims.append(out.sims_total)
            verdicts.append(out.verdict.value)
            gap += out.stats_neighbor.mean - out.stats_current.mean
        direct = verdicts.count("DirectAccept")
        note = f"({direct}/40 direct)" if direct else ""
        print(
            f"  {name:<12} {sum(sims) / len(sims):5.0f}  "
            f"{verdicts[0]:<13} {gap / 40:+.3f} {note}"
        )
