"""Seeded generators and scenario runners for the simulation studies.

Determinism contract: every runner's output is a pure function of its
config and master seed. Per-trial generators are derived from the master
seed and the (grid index, trial index) tuple via ``derive_seed``, and trial
results are always gathered in index order, so serial and thread-pool
execution produce bit-identical results. The ``ASSAYQC_THREADS`` env var
caps the worker count (default: serial).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from . import metrics
from .errors import ConfigError, InvalidSubsampleSize, ZeroPowerSignal
from .overlap import _gssmd_from_arrays
from .samples import SampleSet, SummaryStats, summarize

NORMAL = "normal"
LOGNORMAL = "lognormal"


@dataclass(frozen=True)
class DistributionSpec:
    """A sampling distribution: normal or lognormal.

    For the lognormal kind, ``location``/``scale`` are the log-scale
    parameters; draws are exp of normal draws.
    """

    kind: str
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in (NORMAL, LOGNORMAL):
            raise ConfigError(f"unknown distribution kind {self.kind!r}")
        if not self.scale > 0:
            raise ConfigError("distribution scale must be positive")

    @classmethod
    def normal(cls, location: float = 0.0, scale: float = 1.0) -> "DistributionSpec":
        return cls(NORMAL, location, scale)

    @classmethod
    def lognormal(cls, location: float = 0.0, scale: float = 1.0) -> "DistributionSpec":
        return cls(LOGNORMAL, location, scale)

    def shifted(self, delta: float) -> "DistributionSpec":
        """Same family with the location parameter moved by ``delta``."""
        return DistributionSpec(self.kind, self.location + delta, self.scale)


def derive_seed(master_seed: int, *key: int) -> np.random.SeedSequence:
    """Child seed as a pure function of the master seed and an index tuple."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


def _sample(dist: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(dist.location, dist.scale, n)
    if dist.kind == LOGNORMAL:
        x = np.exp(x)
    return x


def draw(dist: DistributionSpec, n: int, seed) -> SampleSet:
    """Deterministic sample of size ``n``: same (dist, n, seed) -> same bits."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return SampleSet(_sample(dist, n, rng), label=dist.kind)


def inject_outliers(
    samples: SampleSet, fraction: float, outlier: DistributionSpec, seed
) -> SampleSet:
    """Replace round(fraction * n) positions with draws from ``outlier``.

    Positions are chosen uniformly without replacement; the replacement
    count uses round-half-even. ``fraction`` 0 returns the input unchanged.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ConfigError("outlier fraction must lie in [0, 1]")
    n = len(samples)
    k = int(round(fraction * n))
    if k == 0:
        return samples
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=k, replace=False)
    values = samples.values.copy()
    values[idx] = _sample(outlier, k, rng)
    return SampleSet(values, label=samples.label)


def add_awgn(signal: SampleSet, snr_db: float, seed) -> SampleSet:
    """Add white Gaussian noise at the given measured signal-to-noise ratio.

    Signal power is measured as mean(x^2) over the input; the noise variance
    is P_signal / 10^(snr_db/10) and the noise is zero-mean, elementwise
    independent.
    """
    v = signal.values
    power = float(np.mean(v * v))
    if power == 0.0:
        raise ZeroPowerSignal("cannot scale noise against a zero-power signal")
    noise_var = power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    return SampleSet(v + rng.normal(0.0, np.sqrt(noise_var), v.size), label=signal.label)


# --- trial execution ---------------------------------------------------------


def _worker_count() -> int:
    raw = os.environ.get("ASSAYQC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_trials(fn: Callable[[int], dict], n_trials: int) -> list[dict]:
    """Run fn(0..n_trials-1), results in trial-index order regardless of workers."""
    workers = _worker_count()
    if workers <= 1 or n_trials <= 1:
        return [fn(t) for t in range(n_trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_trials)))


@dataclass(frozen=True)
class TrialAggregate:
    """Mean/std/min/max of one metric across a point's trials (std is ddof=0)."""

    mean: float
    std: float
    min: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "TrialAggregate":
        a = np.asarray(values, dtype=np.float64)
        return cls(float(a.mean()), float(a.std()), float(a.min()), float(a.max()))


@dataclass
class GridPoint:
    """One sweep configuration point with its per-metric trial aggregates."""

    params: dict[str, float]
    metrics: dict[str, TrialAggregate]


@dataclass
class ScenarioResult:
    kind: str
    points: list[GridPoint]
    n: int
    trials: int
    seed: int
    bins: int | None = None


def _pair_metrics(neg: np.ndarray, pos: np.ndarray, bins: int | None) -> dict[str, float]:
    s_neg = SummaryStats(mean=float(neg.mean()), variance=float(neg.var(ddof=1)), count=neg.size)
    s_pos = SummaryStats(mean=float(pos.mean()), variance=float(pos.var(ddof=1)), count=pos.size)
    ov = _gssmd_from_arrays(neg, pos, bins)
    return {
        "z_factor": metrics.z_factor(s_pos, s_neg),
        "ssmd": metrics.ssmd(s_pos, s_neg),
        "gssmd": ov.gssmd,
        "ovl": ov.ovl,
    }


def _aggregate(trials: list[dict[str, float]]) -> dict[str, TrialAggregate]:
    return {
        name: TrialAggregate.of([t[name] for t in trials])
        for name in trials[0]
    }


@dataclass
class ScenarioConfig:
    """Parameter grids for the sweep runners.

    ``neg`` describes the negative-control (background) distribution; the
    sweeps derive the positive group from it per their own contracts.
    """

    neg: DistributionSpec
    mu_diffs: tuple[float, ...] = ()
    n: int = 1000
    seed: int = 0
    trials: int = 1
    outlier_fractions: tuple[float, ...] | None = None
    outlier_means: tuple[float, ...] | None = None
    outlier_scale: float = 1.0
    snr_db: tuple[float, ...] | None = None
    bins: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.outlier_fractions is not None:
            if any(not 0.0 <= f <= 1.0 for f in self.outlier_fractions):
                raise ConfigError("outlier fractions must lie in [0, 1]")
        if self.bins is not None and self.bins < 1:
            raise ConfigError("bins override must be >= 1")


def run_mean_difference_sweep(cfg: ScenarioConfig) -> ScenarioResult:
    """All metrics vs location shift: neg from cfg.neg, pos shifted by mu_diff.

    For the lognormal family the shift applies to the log-scale location.
    """
    if not cfg.mu_diffs:
        raise ConfigError("mean-difference sweep needs a mu_diffs grid")
    points = []
    for i, d in enumerate(cfg.mu_diffs):
        pos_spec = cfg.neg.shifted(d)

        def one_trial(t: int, i: int = i, pos_spec: DistributionSpec = pos_spec):
            neg = _sample(cfg.neg, cfg.n, np.random.default_rng(derive_seed(cfg.seed, i, t, 0)))
            pos = _sample(pos_spec, cfg.n, np.random.default_rng(derive_seed(cfg.seed, i, t, 1)))
            return _pair_metrics(neg, pos, cfg.bins)

        points.append(GridPoint({"mu_diff": float(d)}, _aggregate(_map_trials(one_trial, cfg.trials))))
    return ScenarioResult("mean_difference", points, cfg.n, cfg.trials, cfg.seed, cfg.bins)


def run_outlier_sweep(cfg: ScenarioConfig) -> ScenarioResult:
    """Metrics on (clean neg, contaminated pos) over a fraction x outlier-mean grid.

    Both base groups are drawn from cfg.neg; the positive group then has
    round(fraction * n) values replaced by draws from
    Normal(outlier_mean, cfg.outlier_scale).
    """
    if cfg.outlier_fractions is None or cfg.outlier_means is None:
        raise ConfigError("outlier sweep needs outlier_fractions and outlier_means grids")
    points = []
    for i, frac in enumerate(cfg.outlier_fractions):
        for j, om in enumerate(cfg.outlier_means):
            outlier = DistributionSpec.normal(om, cfg.outlier_scale)

            def one_trial(t: int, i: int = i, j: int = j, frac: float = frac,
                          outlier: DistributionSpec = outlier):
                neg = draw(cfg.neg, cfg.n, derive_seed(cfg.seed, i, j, t, 0))
                pos = draw(cfg.neg, cfg.n, derive_seed(cfg.seed, i, j, t, 1))
                pos = inject_outliers(pos, frac, outlier, derive_seed(cfg.seed, i, j, t, 2))
                return _pair_metrics(neg.values, pos.values, cfg.bins)

            points.append(GridPoint(
                {"fraction": float(frac), "outlier_mean": float(om)},
                _aggregate(_map_trials(one_trial, cfg.trials)),
            ))
    return ScenarioResult("outliers", points, cfg.n, cfg.trials, cfg.seed, cfg.bins)


def run_noise_sweep(cfg: ScenarioConfig) -> ScenarioResult:
    """Metrics vs measurement SNR over a mu_diff x snr_db grid.

    Per trial one background draw is taken; the positive signal is that same
    draw shifted by mu_diff, and white Gaussian noise is added independently
    to each group at the grid's SNR.
    """
    if cfg.snr_db is None:
        raise ConfigError("noise sweep needs an snr_db grid")
    if not cfg.mu_diffs:
        raise ConfigError("noise sweep needs a mu_diffs grid")
    points = []
    for i, d in enumerate(cfg.mu_diffs):
        for j, snr in enumerate(cfg.snr_db):

            def one_trial(t: int, i: int = i, j: int = j, d: float = d, snr: float = snr):
                base = _sample(cfg.neg, cfg.n, np.random.default_rng(derive_seed(cfg.seed, i, j, t, 0)))
                neg = add_awgn(SampleSet(base), snr, derive_seed(cfg.seed, i, j, t, 1))
                pos = add_awgn(SampleSet(base + d), snr, derive_seed(cfg.seed, i, j, t, 2))
                return _pair_metrics(neg.values, pos.values, cfg.bins)

            points.append(GridPoint(
                {"mu_diff": float(d), "snr_db": float(snr)},
                _aggregate(_map_trials(one_trial, cfg.trials)),
            ))
    return ScenarioResult("noise", points, cfg.n, cfg.trials, cfg.seed, cfg.bins)


class SubsampleEstimate(NamedTuple):
    mean_gssmd: float
    mean_ssmd: float


def run_subsampled_estimate(
    neg: SampleSet,
    pos: SampleSet,
    subsample_size: int,
    repeats: int,
    seed,
    bins: int | None = None,
) -> SubsampleEstimate:
    """Average metrics over repeated without-replacement subsamples.

    Each repeat draws ``subsample_size`` values from each group
    independently; taking the full size with one repeat reproduces the
    direct metrics (both are permutation invariant).
    """
    if subsample_size < 1 or subsample_size > min(len(neg), len(pos)):
        raise InvalidSubsampleSize(
            f"subsample size {subsample_size} not in [1, {min(len(neg), len(pos))}]"
        )
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    rng = np.random.default_rng(seed)
    gs, ss = [], []
    for _ in range(repeats):
        a = neg.values[rng.choice(len(neg), subsample_size, replace=False)]
        b = pos.values[rng.choice(len(pos), subsample_size, replace=False)]
        gs.append(_gssmd_from_arrays(a, b, bins).gssmd)
        ss.append(metrics.ssmd(summarize(SampleSet(b)), summarize(SampleSet(a))))
    return SubsampleEstimate(float(np.mean(gs)), float(np.mean(ss)))


# --- null calibration --------------------------------------------------------


#: Documented default size grid for null-lower-bound calibration.
DEFAULT_CALIBRATION_SIZES = (3, 10, 30, 100, 300, 1_000, 10_000, 100_000, 1_000_000)


@dataclass(frozen=True)
class NullCalibrationRow:
    """Moments and upper percentiles of |GSSMD| at one sample size.

    ``mean``/``variance``/``min``/``max`` and the percentiles describe
    |GSSMD| (all in [0, 1]); ``mean_signed`` keeps the signed average for
    bias checks. Variance is ddof=1; percentiles use linear interpolation.
    """

    n: int
    mean: float
    variance: float
    min: float
    max: float
    p95: float
    p99: float
    p999: float
    mean_signed: float


@dataclass
class NullCalibrationTable:
    rows: list[NullCalibrationRow]
    trials: int
    seed: int
    dist: DistributionSpec


def calibrate_null(
    sizes: Iterable[int],
    trials: int,
    dist: DistributionSpec,
    seed: int,
    bins: int | None = None,
) -> NullCalibrationTable:
    """Null distribution of GSSMD when both groups share one distribution.

    For each size, ``trials`` independent pairs are drawn i.i.d. from
    ``dist`` and GSSMD recorded; the table holds per-size moments and the
    95th/99th/99.9th percentiles of |GSSMD|. Deterministic given the seed.
    """
    sizes = tuple(int(s) for s in sizes)
    if not sizes:
        raise ConfigError("calibration needs at least one sample size")
    if any(s < 1 for s in sizes):
        raise ConfigError("calibration sizes must be >= 1")
    if trials < 100:
        raise ConfigError("calibration needs at least 100 trials")

    rows = []
    for i, n in enumerate(sizes):

        def one_trial(t: int, i: int = i, n: int = n):
            neg = _sample(dist, n, np.random.default_rng(derive_seed(seed, i, t, 0)))
            pos = _sample(dist, n, np.random.default_rng(derive_seed(seed, i, t, 1)))
            return {"gssmd": _gssmd_from_arrays(neg, pos).gssmd}

        signed = np.array([r["gssmd"] for r in _map_trials(one_trial, trials)])
        abs_vals = np.abs(signed)
        p95, p99, p999 = np.percentile(abs_vals, [95.0, 99.0, 99.9])
        rows.append(NullCalibrationRow(
            n=n,
            mean=float(abs_vals.mean()),
            variance=float(abs_vals.var(ddof=1)),
            min=float(abs_vals.min()),
            max=float(abs_vals.max()),
            p95=float(p95),
            p99=float(p99),
            p999=float(p999),
            mean_signed=float(signed.mean()),
        ))
    return NullCalibrationTable(rows, trials, seed, dist)
