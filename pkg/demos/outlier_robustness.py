"""
Outlier robustness: GSSMD converges to the contamination fraction
=================================================================

Both control groups share one distribution (expected effect: none). A
growing fraction of the positive group is then replaced with far-away
outlier draws. The Z'-factor swings wildly, SSMD drifts to arbitrary
values, while GSSMD simply reports the contaminated fraction.
"""

from assayqc import DistributionSpec, ScenarioConfig, run_outlier_sweep

cfg = ScenarioConfig(
    neg=DistributionSpec.normal(0.0, 1.0),
    n=1000, seed=21, trials=20,
    outlier_fractions=(0.0, 0.05, 0.1, 0.2, 0.3),
    outlier_means=(5.0, 30.0),
)
result = run_outlier_sweep(cfg)

print(f"outlier injection, n={result.n}, {result.trials} trials per cell")
print(f"{'fraction':>9} {'out_mean':>9} {'Z-prime':>12} {'SSMD':>9} {'GSSMD':>8}")
for point in result.points:
    m = point.metrics
    print(f"{point.params['fraction']:9.2f} {point.params['outlier_mean']:9.1f} "
          f"{m['z_factor'].mean:12.1f} {m['ssmd'].mean:9.3f} {m['gssmd'].mean:8.3f}")

print("""
With outliers at mean 30, the GSSMD column reads back the injected
fraction to within sampling noise: contaminating 10% of wells removes
about 10% of the histogram overlap, no more. That gives the value a
direct operational meaning (fraction of wells behaving differently),
where the unbounded parametric scores must be re-interpreted per assay.
""")
