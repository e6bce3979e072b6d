"""Selection constants for indifference-zone sampling.

The sequential screening rule needs a constant translating sample variances
into required sample sizes.  This script solves the underlying integral
equations, shows the solutions behave as expected (monotone in confidence,
symmetric in the two sample sizes), and verifies a solution by plugging it
back into the integral at four times the quadrature resolution.
"""

from stochanneal.stats import (
    DEFAULT_SOLVER_CONFIG,
    IntegralSolverConfig,
    _selection_integral,
    rinott_h,
    yoon_h1,
)

print("Two-stage constant for k alternatives, first stage n0 = 80:")
for alpha in (0.05, 0.1, 0.2):
    h2 = rinott_h(2, 80, alpha)
    h4 = rinott_h(4, 80, alpha)
    print(f"  alpha={alpha:4}:  k=2 -> h={h2:.4f}   k=4 -> h={h4:.4f}")

print("\nPairwise sequential constant at different sample-size pairs (alpha=0.2):")
for n_i, n_b in [(20, 20), (80, 80), (30, 110), (110, 30)]:
    print(f"  (n_i={n_i:3d}, n_b={n_b:3d}) -> h1 = {yoon_h1(n_i, n_b, 0.2):.6f}")
print("  (the integrand is symmetric in the two sample-size weights)")

h = rinott_h(2, 80, 0.2)
fine = IntegralSolverConfig(quadrature_points=4 * DEFAULT_SOLVER_CONFIG.quadrature_points)
value = _selection_integral(h, 79, 79, 1, fine)
print(f"\nResidual check at 4x resolution: integral(h) = {value:.8f} (target 0.8)")

print("\nRequired samples N >= (h1 * s / delta)^2, e.g. s=2, delta=0.5:")
h1 = yoon_h1(20, 20, 0.2)
print(f"  h1(20,20,0.2) = {h1:.4f}  ->  N >= {(h1 * 2 / 0.5) ** 2:.1f}")
