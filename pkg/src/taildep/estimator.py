"""Rank-based tail dependence estimation.

The empirical tail copula at direction (x, y) counts points whose componentwise
ranks fall in the joint tail:

    Lhat(x, y) = (1/k) * #{ j : Rx_j <= k*x and Ry_j <= k*y }

with k the effective tail sample size.  Ranks make the estimator invariant
under strictly increasing marginal transforms; comparing integer ranks against
k*x is equivalent to the integer threshold floor(k*x), which is how it is
computed so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ConfigError, DataError, ParameterError
from .tdf import DEFAULT_GRID_SIZE, TailDependenceFunction, from_grid

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class RankedSample:
    """Componentwise ranks of a bivariate sample (1 = smallest, ties by position)."""

    n: int
    rank_x: np.ndarray = field(repr=False)
    rank_y: np.ndarray = field(repr=False)
    tie_policy: str = "stable"


@dataclass(frozen=True)
class EstimatorConfig:
    """Estimator knobs.

    ``k`` defaults to floor(sqrt(sample size)) when left as None.  ``grid_size``
    must be even so the simplex midpoint is a grid node.  ``tail`` selects the
    lower-left or (via rank reflection) upper-right corner.
    """

    k: int | None = None
    grid_size: int = DEFAULT_GRID_SIZE
    tail: str = LOWER

    def __post_init__(self):
        if self.k is not None and (not isinstance(self.k, (int, np.integer)) or self.k < 1):
            raise ConfigError("k must be a positive integer or None")
        if self.grid_size < 2 or self.grid_size % 2 != 0:
            raise ConfigError("grid_size must be an even integer >= 2")
        if self.tail not in (LOWER, UPPER):
            raise ConfigError(f"tail must be {LOWER!r} or {UPPER!r}")

    def resolve_k(self, n: int) -> int:
        k = self.k if self.k is not None else math.isqrt(n)
        if k > n:
            raise ConfigError(f"k={k} exceeds sample size n={n}")
        return k


def ranks(x, y) -> RankedSample:
    """Componentwise ranks with the stable tie rule (ties keep input order)."""
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if x_arr.ndim != 1 or y_arr.ndim != 1 or x_arr.size != y_arr.size:
        raise DataError("x and y must be one-dimensional and equally long")
    if x_arr.size < 2:
        raise DataError("need at least two observations")
    if not (np.all(np.isfinite(x_arr)) and np.all(np.isfinite(y_arr))):
        raise DataError("observations must be finite")
    return RankedSample(x_arr.size, _stable_ranks(x_arr), _stable_ranks(y_arr))


def _stable_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    out = np.empty(values.size, dtype=np.int64)
    out[order] = np.arange(1, values.size + 1)
    return out


def empirical_tail_2d(sample: RankedSample, k: int, x: float, y: float) -> float:
    """Empirical tail copula at one quadrant point (x, y >= 0)."""
    if k < 1 or k > sample.n:
        raise ConfigError(f"k must be in [1, n]; got k={k}, n={sample.n}")
    if x < 0.0 or y < 0.0:
        raise ParameterError("tail copula arguments must be >= 0")
    tx = math.floor(k * x)
    ty = math.floor(k * y)
    count = int(np.sum((sample.rank_x <= tx) & (sample.rank_y <= ty)))
    return count / k


def empirical_tdf(sample: RankedSample, config: EstimatorConfig = EstimatorConfig()) -> TailDependenceFunction:
    """Estimate the tail dependence function on the simplex grid.

    Grid node i carries Lhat(s_i, 1 - s_i) with thresholds floor(k*i/m) and
    floor(k*(m-i)/m); endpoints are exactly zero.  The result is EMPIRICAL
    (bounds hold by construction, concavity is not enforced).
    """
    n, m = sample.n, config.grid_size
    k = config.resolve_k(n)
    rx, ry = sample.rank_x, sample.rank_y
    if config.tail == UPPER:
        rx = n + 1 - rx
        ry = n + 1 - ry

    # Only points with both ranks <= k can ever be counted.
    in_corner = (rx <= k) & (ry <= k)
    cx = rx[in_corner]
    cy = ry[in_corner]

    i = np.arange(m + 1)
    tx = (k * i) // m  # floor(k * i / m), exact in integers
    ty = (k * (m - i)) // m
    counts = np.sum((cx[:, None] <= tx) & (cy[:, None] <= ty), axis=0)
    values = counts / k
    values[0] = 0.0
    values[m] = 0.0

    out = from_grid(values, enforce_concavity=False)
    assert isinstance(out, TailDependenceFunction)
    return out


@dataclass(frozen=True)
class RollingEstimate:
    """Per-window estimates plus the starts of windows skipped for missing data.

    Iterating yields the (start index, estimate) pairs in window order.
    """

    windows: tuple[tuple[int, TailDependenceFunction], ...]
    skipped: tuple[int, ...]

    def __iter__(self) -> Iterator[tuple[int, TailDependenceFunction]]:
        return iter(self.windows)

    def __len__(self) -> int:
        return len(self.windows)


def rolling_estimate(
    x,
    y,
    window: int,
    step: int = 1,
    config: EstimatorConfig = EstimatorConfig(),
) -> RollingEstimate:
    """Estimate over rolling windows [t, t + window) for t = 0, step, 2*step, ...

    Produces floor((n - window) / step) + 1 window positions.  A window
    containing NaN in either series is skipped and reported in ``skipped``.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if x_arr.ndim != 1 or y_arr.ndim != 1 or x_arr.size != y_arr.size:
        raise DataError("x and y must be one-dimensional and equally long")
    n = x_arr.size
    if window < 2 or window > n:
        raise DataError(f"window must be in [2, n]; got window={window}, n={n}")
    if step < 1:
        raise ParameterError("step must be >= 1")
    config.resolve_k(window)  # fail fast on k > window

    windows = []
    skipped = []
    bad = ~(np.isfinite(x_arr) & np.isfinite(y_arr))
    for start in range(0, n - window + 1, step):
        stop = start + window
        if bad[start:stop].any():
            skipped.append(start)
            continue
        sample = ranks(x_arr[start:stop], y_arr[start:stop])
        windows.append((start, empirical_tdf(sample, config)))
    return RollingEstimate(tuple(windows), tuple(skipped))
