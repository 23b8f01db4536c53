"""Upcrossing, exceedance and run detection for one (series, threshold) pair.

Positions follow the 1-based convention of the indicator definitions: an
upcrossing at position ``i`` means ``X_i <= u < X_{i+1}``. A run start is a
position ``i`` in ``1..n-3`` with no upcrossing at ``i`` and an upcrossing at
``i + 2``; its run length is the number of upcrossings at ``i+2, i+4, ...``
before the first gap. Positions beyond ``n - 1`` never hold an upcrossing, so a
run still open at the end of the sample is cut there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import as_series

__all__ = [
    "EventSummary",
    "upcrossing_mask",
    "detect_upcrossings",
    "count_exceedances",
    "detect_runs",
    "summarize_events",
]


@dataclass(frozen=True)
class EventSummary:
    threshold: float
    n: int
    upcrossing_positions: tuple[int, ...]
    exceedance_count: int
    run_starts: tuple[int, ...]
    run_lengths: tuple[int, ...]

    @property
    def n_upcrossings(self) -> int:
        return len(self.upcrossing_positions)

    @property
    def n_run_starts(self) -> int:
        return len(self.run_starts)

    @property
    def n_run_upcrossings(self) -> int:
        return int(sum(self.run_lengths))


def upcrossing_mask(values: np.ndarray, u: float) -> np.ndarray:
    """Boolean array of length ``n - 1``; entry ``j`` is the upcrossing at position ``j + 1``."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return np.zeros(0, dtype=bool)
    return (values[:-1] <= u) & (values[1:] > u)


def _chain_lengths(up: np.ndarray) -> np.ndarray:
    """Number of consecutive upcrossings at j, j+2, j+4, ... for every j."""
    out = np.zeros(up.size, dtype=np.int64)
    for parity in (0, 1):
        b = up[parity::2]
        m = b.size
        if m == 0:
            continue
        idx = np.arange(m)
        stop = np.where(b, m, idx)
        next_gap = np.minimum.accumulate(stop[::-1])[::-1]
        out[parity::2] = next_gap - idx
    return out


def _runs_from_mask(up: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 4:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    # 0-based j = i - 1 for run-start position i in 1..n-3
    j = np.arange(n - 3)
    is_start = ~up[j] & up[j + 2]
    starts = j[is_start]
    lengths = _chain_lengths(up)[starts + 2]
    return starts + 1, lengths


def detect_upcrossings(series, u: float) -> list[int]:
    """1-based positions ``i`` with ``X_i <= u < X_{i+1}``, ascending."""
    x = as_series(series)
    return (np.flatnonzero(upcrossing_mask(x.values, u)) + 1).tolist()


def count_exceedances(series, u: float) -> int:
    """Number of observations strictly above ``u``."""
    x = as_series(series)
    return int(np.count_nonzero(x.values > u))


def detect_runs(series, u: float) -> tuple[list[int], list[int]]:
    """Run starts and their lengths.

    Returns
    -------
    run_starts : list of int
        1-based gap positions ``i`` (no upcrossing at ``i``, upcrossing at ``i+2``).
    run_lengths : list of int
        Length of the run that begins at ``i + 2``, aligned with ``run_starts``.

    Examples
    --------
    >>> detect_runs([0, 5, 0, 0, 5, 0, 5, 0], 4)
    ([2], [2])
    """
    x = as_series(series)
    starts, lengths = _runs_from_mask(upcrossing_mask(x.values, u), x.n)
    return starts.tolist(), lengths.tolist()


def summarize_events(series, u: float) -> EventSummary:
    x = as_series(series)
    up = upcrossing_mask(x.values, u)
    starts, lengths = _runs_from_mask(up, x.n)
    return EventSummary(
        threshold=float(u),
        n=x.n,
        upcrossing_positions=tuple((np.flatnonzero(up) + 1).tolist()),
        exceedance_count=int(np.count_nonzero(x.values > u)),
        run_starts=tuple(starts.tolist()),
        run_lengths=tuple(lengths.tolist()),
    )
