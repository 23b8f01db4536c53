"""Series container, order-statistic thresholds and price transforms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ThresholdRangeError

__all__ = [
    "TimeSeries",
    "Fixed",
    "TopOrderStatistic",
    "ThresholdSpec",
    "as_series",
    "resolve_threshold",
    "log_returns",
]


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered, immutable sequence of finite real observations.

    The values are copied into a read-only float64 array at construction.
    Non-finite entries are rejected with a ``DomainError`` naming the first
    offending (1-based) position.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float, copy=True).reshape(-1)
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise DomainError(
                f"non-finite value {arr[bad[0]]!r} at position {bad[0] + 1}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None


def as_series(x) -> TimeSeries:
    """Return ``x`` unchanged if it is a ``TimeSeries``, else wrap it."""
    if isinstance(x, TimeSeries):
        return x
    return TimeSeries(x)


@dataclass(frozen=True)
class Fixed:
    """A threshold given directly as a level."""

    level: float

    def describe(self) -> str:
        return f"u={self.level!r}"


@dataclass(frozen=True)
class TopOrderStatistic:
    """Threshold at the (k+1)-th largest observation, ``X_{n-k:n}``."""

    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ThresholdRangeError(f"k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def describe(self) -> str:
        return f"k={self.k}"


ThresholdSpec = Union[Fixed, TopOrderStatistic]


def _coerce_spec(spec) -> ThresholdSpec:
    if isinstance(spec, (Fixed, TopOrderStatistic)):
        return spec
    raise TypeError(f"expected Fixed or TopOrderStatistic, got {type(spec).__name__}")


def resolve_threshold(series, spec: ThresholdSpec) -> float:
    """Turn a threshold specification into a numeric level.

    ``TopOrderStatistic(k)`` sorts the sample in descending order and takes
    the entry at rank ``k + 1``; tied values occupy consecutive ranks.

    Examples
    --------
    >>> resolve_threshold([3, 1, 4, 1, 5], TopOrderStatistic(1))
    4.0
    """
    spec = _coerce_spec(spec)
    if isinstance(spec, Fixed):
        return spec.level
    x = as_series(series)
    n = x.n
    if n == 0:
        raise ThresholdRangeError("cannot take an order statistic of an empty series")
    if spec.k > n - 1:
        raise ThresholdRangeError(f"k={spec.k} out of range for n={n}: need 1 <= k <= {n - 1}")
    # (k+1)-th largest == (n-k)-th smallest, 0-based index n-k-1
    return float(np.partition(x.values, n - spec.k - 1)[n - spec.k - 1])


def log_returns(prices) -> TimeSeries:
    """Percentage log-returns ``100 * (ln x[t+1] - ln x[t])``."""
    x = as_series(prices)
    if x.n < 2:
        raise DomainError(f"log-returns need at least 2 prices, got {x.n}")
    bad = np.flatnonzero(x.values <= 0)
    if bad.size:
        raise DomainError(
            f"nonpositive price {x.values[bad[0]]!r} at position {bad[0] + 1}"
        )
    return TimeSeries(100.0 * np.diff(np.log(x.values)))
