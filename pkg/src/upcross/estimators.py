"""Runs estimator of the upcrossings index and derived statistics.

The headline estimator is ``estimate_eta``: the number of run starts (a
non-upcrossing at ``i`` followed by an upcrossing at ``i + 2``) divided by the
number of upcrossings. ``estimate_eta_star`` divides by the number of
upcrossings that sit inside detected runs instead, which makes it exactly the
reciprocal of the mean run length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import norm

from .errors import NoExceedancesError, NoRunsError, NoUpcrossingsError, ThresholdRangeError
from .events import EventSummary, summarize_events
from .series import TopOrderStatistic, ThresholdSpec, as_series, resolve_threshold

__all__ = [
    "ConfidenceInterval",
    "EtaEstimate",
    "EtaCurve",
    "STATUS_OK",
    "STATUS_NO_UPCROSSINGS",
    "STATUS_DEGENERATE_CI",
    "estimate_eta",
    "estimate_eta_star",
    "eta_curve",
    "default_k_grid",
    "run_length_distribution",
    "estimate_theta_via_relation",
    "upcrossing_counts_by_k",
]

STATUS_OK = "ok"
STATUS_NO_UPCROSSINGS = "no_upcrossings"
STATUS_DEGENERATE_CI = "degenerate_ci"


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def covers(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class EtaEstimate:
    """Runs estimate at one threshold.

    ``eta_hat`` is ``None`` when the threshold has no upcrossings; ``status``
    then reads ``"no_upcrossings"``. A confidence interval whose variance
    estimate is not positive is reported with zero width at ``eta_hat`` and
    ``status == "degenerate_ci"``.
    """

    spec: ThresholdSpec
    threshold: float
    eta_hat: Optional[float]
    n_upcrossings: int
    n_run_starts: int
    n_run_upcrossings: int
    sigma2_hat: float
    exceedance_count: int
    ci: Optional[ConfidenceInterval] = None
    status: str = STATUS_OK

    @property
    def ok(self) -> bool:
        return self.eta_hat is not None


@dataclass(frozen=True)
class EtaCurve:
    entries: list[tuple[int, EtaEstimate]] = field(default_factory=list)
    scale_hint: str = "logarithmic"

    @property
    def k(self) -> list[int]:
        return [k for k, _ in self.entries]

    def eta_values(self) -> np.ndarray:
        """Estimates along the grid with NaN where a threshold had no upcrossings."""
        return np.array(
            [e.eta_hat if e.eta_hat is not None else np.nan for _, e in self.entries]
        )


def _confidence_interval(eta, sigma2, n_run_upcrossings, level):
    z = norm.ppf(0.5 * (1.0 + level))
    spread = (eta * eta * sigma2) - 1.0
    if n_run_upcrossings == 0 or spread <= 0.0:
        return ConfidenceInterval(eta, eta, level, degenerate=True)
    half = z * math.sqrt(eta * spread / n_run_upcrossings)
    return ConfidenceInterval(max(0.0, eta - half), min(1.0, eta + half), level)


def _estimate_from_summary(spec, ev: EventSummary, ci_level) -> EtaEstimate:
    n_starts = ev.n_run_starts
    n_run_up = ev.n_run_upcrossings
    sq = sum(y * y for y in ev.run_lengths)
    sigma2 = sq / n_starts if n_starts else 0.0
    common = dict(
        spec=spec,
        threshold=ev.threshold,
        n_upcrossings=ev.n_upcrossings,
        n_run_starts=n_starts,
        n_run_upcrossings=n_run_up,
        sigma2_hat=sigma2,
        exceedance_count=ev.exceedance_count,
    )
    if ev.n_upcrossings == 0:
        return EtaEstimate(eta_hat=None, status=STATUS_NO_UPCROSSINGS, **common)
    eta = n_starts / ev.n_upcrossings
    ci = None
    status = STATUS_OK
    if ci_level is not None:
        ci = _confidence_interval(eta, sigma2, n_run_up, ci_level)
        if ci.degenerate:
            status = STATUS_DEGENERATE_CI
    return EtaEstimate(eta_hat=eta, ci=ci, status=status, **common)


def _check_level(ci_level):
    if ci_level is not None and not 0.0 < ci_level < 1.0:
        raise ValueError(f"ci_level must lie in (0, 1), got {ci_level!r}")


def estimate_eta(series, spec: ThresholdSpec, ci_level: Optional[float] = None) -> EtaEstimate:
    """Runs estimate of the upcrossings index at one threshold.

    Parameters
    ----------
    series : TimeSeries or array_like
    spec : Fixed or TopOrderStatistic
    ci_level : float, optional
        Nominal coverage of the asymptotic-normal interval
        ``eta +- z * sqrt(eta * ((eta * sigma)^2 - 1) / N_bar)``, where
        ``sigma^2`` is the mean squared run length and ``N_bar`` the number of
        upcrossings inside detected runs. The interval is clipped to [0, 1].
    """
    _check_level(ci_level)
    x = as_series(series)
    u = resolve_threshold(x, spec)
    return _estimate_from_summary(spec, summarize_events(x, u), ci_level)


def estimate_eta_star(series, spec: ThresholdSpec) -> float:
    """Run starts over upcrossings inside runs, i.e. 1 / mean run length."""
    x = as_series(series)
    ev = summarize_events(x, resolve_threshold(x, spec))
    if ev.n_run_starts == 0:
        raise NoRunsError(f"no runs detected at {spec.describe()}")
    return ev.n_run_starts / ev.n_run_upcrossings


def default_k_grid(n: int) -> list[int]:
    return list(range(1, n // 4 + 1))


def eta_curve(series, k_grid=None, ci_level: Optional[float] = None,
              scale_hint: str = "logarithmic") -> EtaCurve:
    """Estimate at the order-statistic threshold ``X_{n-k:n}`` for each ``k`` in the grid.

    The grid defaults to ``1..n // 4``. Thresholds with no upcrossings give
    entries with ``status == "no_upcrossings"``.
    """
    _check_level(ci_level)
    if scale_hint not in ("linear", "logarithmic"):
        raise ValueError(f"scale_hint must be 'linear' or 'logarithmic', got {scale_hint!r}")
    x = as_series(series)
    grid = default_k_grid(x.n) if k_grid is None else [int(k) for k in k_grid]
    if not grid:
        raise ValueError("k grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("k grid must be strictly increasing")
    if grid[0] < 1 or grid[-1] > x.n - 1:
        raise ThresholdRangeError(
            f"k grid [{grid[0]}, {grid[-1]}] out of range for n={x.n}: need 1 <= k <= {x.n - 1}"
        )
    entries = [(k, estimate_eta(x, TopOrderStatistic(k), ci_level)) for k in grid]
    return EtaCurve(entries=entries, scale_hint=scale_hint)


def run_length_distribution(series, spec: ThresholdSpec) -> dict[int, float]:
    """Empirical distribution of detected run lengths, keyed by length."""
    x = as_series(series)
    ev = summarize_events(x, resolve_threshold(x, spec))
    if ev.n_run_starts == 0:
        raise NoRunsError(f"no runs detected at {spec.describe()}")
    lengths, counts = np.unique(np.asarray(ev.run_lengths), return_counts=True)
    total = counts.sum()
    return {int(k): float(c / total) for k, c in zip(lengths, counts)}


def estimate_theta_via_relation(series, spec: ThresholdSpec) -> float:
    """Extremal index through ``theta = (nu / tau) * eta``.

    The rate ratio is estimated by upcrossings over exceedances at the same
    threshold.
    """
    x = as_series(series)
    ev = summarize_events(x, resolve_threshold(x, spec))
    if ev.exceedance_count == 0:
        raise NoExceedancesError(f"no exceedances at {spec.describe()}")
    if ev.n_upcrossings == 0:
        raise NoUpcrossingsError(f"no upcrossings at {spec.describe()}")
    eta = ev.n_run_starts / ev.n_upcrossings
    return ev.n_upcrossings / ev.exceedance_count * eta


def _count_above(values: np.ndarray) -> np.ndarray:
    """Row-wise number of observations >= each observation (ties counted)."""
    rows, n = values.shape
    order = np.argsort(values, axis=1, kind="stable")
    s = np.take_along_axis(values, order, axis=1)
    head = np.ones((rows, n), dtype=bool)
    head[:, 1:] = s[:, 1:] != s[:, :-1]
    first = np.maximum.accumulate(np.where(head, np.arange(n), 0), axis=1)
    g = np.empty_like(order)
    np.put_along_axis(g, order, n - first, axis=1)
    return g


def upcrossing_counts_by_k(values, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Upcrossing and run-start counts at ``X_{n-k:n}`` for all ``k = 0..k_max`` at once.

    Works on a single series or a 2-D batch (one series per row). With
    ``g_i`` the number of observations ``>= X_i``, observation ``i`` exceeds
    the (k+1)-th largest value exactly when ``k >= g_i``, so each indicator is
    an interval in ``k`` and the counts follow from difference arrays.

    Returns
    -------
    n_up, n_start : ndarray
        Shape ``(..., k_max + 1)``; column ``k`` holds the counts for ``X_{n-k:n}``.
    """
    x = np.asarray(values, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    rows, n = x.shape
    if not 0 <= k_max <= n - 1:
        raise ThresholdRangeError(f"k_max={k_max} out of range for n={n}")
    width = k_max + 2
    n_up = np.zeros((rows, width), dtype=np.int64)
    n_start = np.zeros((rows, width), dtype=np.int64)
    if n >= 2:
        g = _count_above(x)
        lo = np.minimum(g[:, 1:], width - 1)
        hi = np.minimum(g[:, :-1], width - 1)
        offs = (np.arange(rows) * width)[:, None]

        def scatter(target, a, b, sign):
            keep = a < b
            flat = target.reshape(-1)
            flat += sign * np.bincount((a + offs)[keep], minlength=rows * width)
            flat -= sign * np.bincount((b + offs)[keep], minlength=rows * width)

        scatter(n_up, lo, hi, 1)
        if n >= 4:
            # upcrossing at j + 2, minus the part where j is also an upcrossing
            scatter(n_start, lo[:, 2:], hi[:, 2:], 1)
            a = np.maximum(lo[:, 2:], lo[:, :-2])
            b = np.minimum(hi[:, 2:], hi[:, :-2])
            scatter(n_start, a, b, -1)
    n_up = np.cumsum(n_up, axis=1)[:, : k_max + 1]
    n_start = np.cumsum(n_start, axis=1)[:, : k_max + 1]
    if single:
        return n_up[0], n_start[0]
    return n_up, n_start
