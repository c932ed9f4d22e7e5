"""Item-variable construction of the ogive graded response model.

A respondent with true score ``theta`` produces, for item ``j``, a latent item
variable ``gamma ~ Normal(theta, sigma_j)``.  The observed response is the
category whose threshold bin contains ``gamma``.  Integrating the normal
density over a bin gives the category probability, so everything reduces to
differences of the standard normal CDF.

Categories are coded ``1..K``.  Bins are half-open, ``(beta_{k-1}, beta_k]``,
with ``beta_0 = -inf`` and ``beta_K = +inf``.
"""

from __future__ import annotations

import bisect
import numbers
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import InvalidArgumentError

THRESHOLD_SPAN = 2.0


def _check_num_categories(num_categories) -> int:
    if isinstance(num_categories, bool) or not isinstance(num_categories, numbers.Integral):
        raise InvalidArgumentError(f"number of categories must be an integer, got {num_categories!r}")
    if num_categories < 2:
        raise InvalidArgumentError(f"number of categories must be >= 2, got {num_categories}")
    return int(num_categories)


def make_thresholds(num_categories: int) -> tuple[float, ...]:
    """Evenly spaced cutpoints partitioning [-2, 2] into ``num_categories`` bins.

    The K - 1 interior points of a (K + 1)-point grid from -2 to 2.  For
    K = 2 this is the single cutpoint 0.
    """
    k = _check_num_categories(num_categories)
    # (4i - 2K) / K: integer numerator keeps the set exactly antisymmetric about 0
    scale = 2 * THRESHOLD_SPAN
    return tuple(float((scale * i - THRESHOLD_SPAN * k) / k) for i in range(1, k))


@dataclass(frozen=True)
class Item:
    """One measured item: error sd of its item variable plus ordered cutpoints."""

    sigma: float
    thresholds: tuple[float, ...]
    _cuts: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sigma = float(self.sigma)
        if not np.isfinite(sigma) or sigma <= 0:
            raise InvalidArgumentError(f"item sigma must be positive, got {self.sigma!r}")
        cuts = np.asarray(self.thresholds, dtype=float)
        if cuts.ndim != 1 or cuts.size < 1:
            raise InvalidArgumentError("an item needs at least one threshold")
        if not np.all(np.isfinite(cuts)) or np.any(np.diff(cuts) <= 0):
            raise InvalidArgumentError("thresholds must be finite and strictly increasing")
        cuts.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "thresholds", tuple(float(c) for c in cuts))
        object.__setattr__(self, "_cuts", cuts)

    @classmethod
    def with_categories(cls, num_categories: int, sigma: float) -> "Item":
        return cls(sigma=sigma, thresholds=make_thresholds(num_categories))

    @property
    def num_categories(self) -> int:
        return len(self.thresholds) + 1

    @property
    def cutpoints(self) -> np.ndarray:
        """Thresholds as a read-only float array."""
        return self._cuts


@dataclass(frozen=True)
class ResponseMatrix:
    """N x J ordinal responses together with the scores that generated them.

    ``predictor`` is left as ``None`` by :func:`sample_response_matrix`; the
    simulation engine attaches it.
    """

    responses: np.ndarray
    theta: np.ndarray
    predictor: np.ndarray | None = None

    def __post_init__(self):
        if self.responses.ndim != 2:
            raise InvalidArgumentError("responses must be a 2-D array")
        n = self.responses.shape[0]
        if self.theta.shape != (n,):
            raise InvalidArgumentError("theta length must match the number of response rows")
        if self.predictor is not None and self.predictor.shape != (n,):
            raise InvalidArgumentError("predictor length must match the number of response rows")


def categorize(gamma: float, thresholds) -> int:
    """Category index in ``1..K`` for one item-variable value.

    A value sitting exactly on a cutpoint ``beta_k`` maps to category ``k``.
    """
    return bisect.bisect_left(thresholds, gamma) + 1


def categorize_many(gamma, cutpoints) -> np.ndarray:
    """Vectorised :func:`categorize`; same boundary convention."""
    return np.searchsorted(np.asarray(cutpoints, dtype=float), gamma, side="left") + 1


def _check_category(k, lo: int, hi: int) -> int:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or not lo <= k <= hi:
        raise InvalidArgumentError(f"category index must be an integer in [{lo}, {hi}], got {k!r}")
    return int(k)


def category_prob(theta, k: int, item: Item):
    """P(response = k | theta): normal mass of the item variable inside bin k.

    ``theta`` may be a scalar or an array; the result has the same shape.
    """
    n_cat = item.num_categories
    k = _check_category(k, 1, n_cat)
    theta = np.asarray(theta, dtype=float)
    cuts = item.cutpoints
    upper = 1.0 if k == n_cat else ndtr((cuts[k - 1] - theta) / item.sigma)
    lower = 0.0 if k == 1 else ndtr((cuts[k - 2] - theta) / item.sigma)
    out = np.clip(upper - lower, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def icc_above(theta, k: int, item: Item):
    """P(response > k | theta), the item characteristic curve of category k.

    Defined for ``0 <= k <= K``; the end curves are the constants 1 (k = 0)
    and 0 (k = K).
    """
    n_cat = item.num_categories
    k = _check_category(k, 0, n_cat)
    theta = np.asarray(theta, dtype=float)
    if k == 0:
        out = np.ones_like(theta)
    elif k == n_cat:
        out = np.zeros_like(theta)
    else:
        # 1 - Phi(z) evaluated as Phi(-z) to keep the upper tail accurate
        out = ndtr((theta - item.cutpoints[k - 1]) / item.sigma)
    return float(out) if out.ndim == 0 else out


def category_probs(theta: float, item: Item) -> np.ndarray:
    """All K category probabilities at one ``theta``."""
    z = (item.cutpoints - float(theta)) / item.sigma
    cdf = np.concatenate(([0.0], ndtr(z), [1.0]))
    return np.diff(cdf)


def sample_latent(n: int, rng: np.random.Generator) -> np.ndarray:
    """True scores drawn from the standard normal."""
    return rng.standard_normal(n)


def sample_response_matrix(theta, items, rng: np.random.Generator) -> ResponseMatrix:
    """Draw one response per (respondent, item).

    Item variables are sampled as ``theta_i + sigma_j * z_ij`` in row-major
    order from ``rng`` and binned with :func:`categorize_many`.
    """
    items = list(items)
    if not items:
        raise InvalidArgumentError("at least one item is required")
    cuts = items[0].cutpoints
    if any(it.thresholds != items[0].thresholds for it in items[1:]):
        raise InvalidArgumentError("all items in a scale must share the same thresholds")
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1:
        raise InvalidArgumentError("theta must be a 1-D array")
    sigmas = np.array([it.sigma for it in items])
    gamma = theta[:, None] + sigmas[None, :] * rng.standard_normal((theta.size, len(items)))
    responses = np.searchsorted(cuts, gamma, side="left") + 1
    return ResponseMatrix(responses=responses, theta=theta)
