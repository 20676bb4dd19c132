"""Gaussian-perturbation trials and the sample mean gradient path.

Each trial adds i.i.d. Gaussian noise to every entry of the raw time
series, reruns the full pipeline (sliding windows, then ascent), and the
summary averages the paths and scores across trials.  Per-trial seeds
are spawned from the master seed with a counter-based scheme, and
aggregation always runs in trial order, so results are bitwise
reproducible regardless of how many workers execute the trials.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .optimize import AscentConfig, GradientPath, ascend
from .sliding_window import sliding_window_distances, validate_time_series


class PerturbationError(RuntimeError):
    """Too many failed trials to report a meaningful summary."""


@dataclass
class PerturbConfig:
    """Trial count, noise level, master seed, and the per-trial ascent setup."""

    trials: int
    sigma: float
    master_seed: int
    ascent: AscentConfig
    window: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.sigma < 0:
            raise ValueError("noise standard deviation must be nonnegative")
        if self.window < 1:
            raise ValueError("window length must be positive")


@dataclass
class TrialSummary:
    """Pointwise mean path, mean score, and the score sample covariance.

    ``covariance_defined`` is False when only one trial succeeded (the
    covariance is then reported as the zero matrix).  Failed trials are
    excluded from all averages and listed in ``failures``.
    """

    mean_path: np.ndarray         # (steps+1, p)
    mean_score: np.ndarray        # (p,)
    score_covariance: np.ndarray  # (p, p)
    per_trial_scores: np.ndarray  # (succeeded trials, p)
    covariance_defined: bool = True
    failures: list[tuple[int, str]] = field(default_factory=list)
    mean_values: np.ndarray | None = None


def _pad_path(path: GradientPath, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Extend an early-stopped path to the common step grid by holding its end."""
    pts, vals = path.points, path.values
    missing = steps + 1 - len(pts)
    if missing > 0:
        pts = np.concatenate([pts, np.repeat(pts[-1][None], missing, axis=0)])
        vals = np.concatenate([vals, np.repeat(vals[-1], missing)])
    return pts, vals


def run_single_trial(X: np.ndarray, sigma: float, seed, window: int,
                     ascent: AscentConfig) -> GradientPath:
    """One perturbed pipeline run: X + sigma * G, sliding windows, ascent."""
    rng = np.random.default_rng(seed)
    Xp = X + sigma * rng.standard_normal(X.shape) if sigma > 0 else X
    cd = sliding_window_distances(Xp, window)
    return ascend(cd, ascent)


def _worker(args):
    t, X, sigma, seed, window, ascent = args
    try:
        path = run_single_trial(X, sigma, seed, window, ascent)
        pts, vals = _pad_path(path, ascent.steps)
        return t, pts, vals, None
    except Exception as exc:  # noqa: BLE001 - failures are per-trial data
        return t, None, None, f"{type(exc).__name__}: {exc}"


def run_trials(X, cfg: PerturbConfig, workers: int = 1) -> TrialSummary:
    """Run the perturbation trials and aggregate paths and scores.

    Raises PerturbationError when more than 10% of trials fail; otherwise
    failed trials are recorded and excluded.
    """
    X = validate_time_series(X)
    seeds = np.random.SeedSequence(cfg.master_seed).spawn(cfg.trials)
    tasks = [(t, X, cfg.sigma, seeds[t], cfg.window, cfg.ascent)
             for t in range(cfg.trials)]
    if workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, tasks))
    else:
        results = [_worker(task) for task in tasks]
    results.sort(key=lambda r: r[0])

    paths, values, failures = [], [], []
    for t, pts, vals, err in results:
        if err is not None:
            failures.append((t, err))
        else:
            paths.append(pts)
            values.append(vals)
    if len(failures) > 0.1 * cfg.trials:
        raise PerturbationError(
            f"{len(failures)} of {cfg.trials} trials failed: {failures[:3]}")
    stack = np.stack(paths)              # (T, steps+1, p)
    scores = stack[:, -1, :]
    mean_path = stack.mean(axis=0)
    mean_values = np.stack(values).mean(axis=0)
    if len(paths) >= 2:
        cov = np.cov(scores, rowvar=False, ddof=1)
        cov = np.atleast_2d(cov)
        defined = True
    else:
        cov = np.zeros((scores.shape[1], scores.shape[1]))
        defined = False
    return TrialSummary(mean_path, mean_path[-1], cov, scores, defined,
                        failures, mean_values)


def jaccard(a, b) -> float:
    """Intersection over union of two finite sets; 1 when both are empty."""
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def score_support(summary, threshold: float) -> set[int]:
    """1-based variable indices whose mean score exceeds the threshold."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    scores = summary.mean_score if isinstance(summary, TrialSummary) else np.asarray(summary)
    return {int(j) + 1 for j in np.flatnonzero(scores > threshold)}


def estimate_noise_sd(X) -> float:
    """Median over variables of the SD of frame-to-frame differences.

    A simple noise-scale estimate for series whose underlying dynamics
    are smooth relative to the sampling rate.  Never applied implicitly.
    """
    X = validate_time_series(X)
    if X.shape[0] < 3:
        raise ValueError("need at least three time points to estimate noise")
    return float(np.median(np.std(np.diff(X, axis=0), axis=0, ddof=1)))
