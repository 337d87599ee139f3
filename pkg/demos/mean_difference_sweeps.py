"""
Mean-difference sweeps: normal and log-normal backgrounds
=========================================================

Sweeps the location shift between the control groups and tabulates every
metric, first for normal backgrounds at three noise levels, then for a
log-normal background where the parametric scores stay below their
acceptance levels while the overlap metric saturates.
"""

from assayqc import DistributionSpec, ScenarioConfig, run_mean_difference_sweep

MU_DIFFS = (0.0, 1.0, 3.0, 5.0, 10.0, 20.0, 30.0)


def tabulate(result, label):
    print(f"\n=== {label} (n={result.n}, trials={result.trials}) ===")
    print(f"{'mu_diff':>8} {'Z-prime':>10} {'SSMD':>10} {'GSSMD':>8} {'OVL':>8}")
    for point in result.points:
        m = point.metrics
        print(f"{point.params['mu_diff']:8.1f} {m['z_factor'].mean:10.2f} "
              f"{m['ssmd'].mean:10.2f} {m['gssmd'].mean:8.3f} {m['ovl'].mean:8.3f}")


for sigma in (1.0, 3.0, 5.0):
    cfg = ScenarioConfig(
        neg=DistributionSpec.normal(0.0, sigma),
        mu_diffs=MU_DIFFS, n=1000, seed=11, trials=5,
    )
    tabulate(run_mean_difference_sweep(cfg), f"normal background, sigma={sigma:g}")

cfg = ScenarioConfig(
    neg=DistributionSpec.lognormal(0.0, 0.5),
    mu_diffs=MU_DIFFS, n=1000, seed=12, trials=5,
)
tabulate(run_mean_difference_sweep(cfg), "log-normal background, shape=0.5")

print("""
Note the log-normal row at mu_diff=3: GSSMD is already near 1 (the groups
barely overlap), while the raw-scale SSMD sits near 1.8 (< 3) and Z'
is negative (< 0.5) because the positive group's variance explodes with
its mean. Acceptance levels: Z' >= 0.5, |SSMD| >= 3, |GSSMD| >= 0.95.
""")
