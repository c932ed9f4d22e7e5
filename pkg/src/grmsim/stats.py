"""Outcome statistics for a single simulated data set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    slope_se: float
    n: int


def _as_vector(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1:
        raise DegenerateInputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(a)):
        raise DegenerateInputError(f"{name} contains non-finite values")
    return a


def _paired(x, y, min_len: int) -> tuple[np.ndarray, np.ndarray]:
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    if x.size != y.size:
        raise DegenerateInputError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < min_len:
        raise DegenerateInputError(f"need at least {min_len} observations, got {x.size}")
    return x, y


def average_ranks(v) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span."""
    a = np.asarray(v, dtype=float)
    values, inverse, counts = np.unique(a, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    mean_rank = ends - (counts - 1) / 2.0
    return mean_rank[inverse.reshape(-1)]


def _pearson_centered(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    r = float(a @ b / np.sqrt((a @ a) * (b @ b)))
    return min(1.0, max(-1.0, r))


def spearman(x, y) -> float:
    """Tie-corrected Spearman correlation (Pearson correlation of average ranks)."""
    x, y = _paired(x, y, 3)
    rx = average_ranks(x)
    ry = average_ranks(y)
    if np.ptp(rx) == 0:
        raise DegenerateInputError("x is constant")
    if np.ptp(ry) == 0:
        raise DegenerateInputError("y is constant")
    return _pearson_centered(rx, ry)


def standardize(v) -> np.ndarray:
    """Centre to mean 0 and scale to sample sd 1 (n - 1 denominator)."""
    a = _as_vector(v, "v")
    if a.size < 2:
        raise DegenerateInputError("need at least 2 values to standardize")
    sd = a.std(ddof=1)
    if not sd > 0:
        raise DegenerateInputError("cannot standardize a constant vector")
    return (a - a.mean()) / sd


def ols_simple(y, x) -> RegressionResult:
    """Least-squares fit of ``y = intercept + slope * x`` with classical slope SE."""
    x, y = _paired(x, y, 3)
    n = x.size
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if not sxx > 0:
        raise DegenerateInputError("predictor x is constant")
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - intercept - slope * x
    rss = float(resid @ resid)
    slope_se = float(np.sqrt(rss / (n - 2) / sxx))
    return RegressionResult(slope=slope, intercept=intercept, slope_se=slope_se, n=n)


def delta_series(values) -> np.ndarray:
    """Consecutive differences ``values[i + 1] - values[i]``."""
    a = np.asarray(values, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise InvalidArgumentError("delta series needs a 1-D sequence of length >= 2")
    return np.diff(a)
