"""Multi-sample Monte Carlo study of the runs estimator over a grid of k.

A study draws ``replicates`` independent groups of ``runs`` samples for every
sample size. Within a replicate the estimator's mean, mean squared error
against the known index and standard deviation are computed per ``k``; the
reported values average the replicate statistics, with normal-approximation
half-widths ``z * sd_between_replicates / sqrt(replicates)``. Ten or fewer
replicates make those half-widths rough.

Runs are processed in fixed blocks of ``BLOCK_RUNS`` and combined in run order,
so results are bitwise identical for any number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import norm

from .estimators import upcrossing_counts_by_k
from .simulate import ProcessKind, _validate, known_indices, run_stream, sample_process

__all__ = [
    "BLOCK_RUNS",
    "PAPER_RUNS",
    "PAPER_REPLICATES",
    "DESK_RUNS",
    "DESK_REPLICATES",
    "McStudySpec",
    "SizeResult",
    "McStudyResult",
    "run_study",
    "bias_variance_decomposition",
]

log = logging.getLogger(__name__)

BLOCK_RUNS = 100
PAPER_RUNS, PAPER_REPLICATES = 5000, 10
DESK_RUNS, DESK_REPLICATES = 500, 4


@dataclass(frozen=True)
class McStudySpec:
    kind: ProcessKind
    sample_sizes: Sequence[int]
    master_seed: int
    runs: int = DESK_RUNS
    replicates: int = DESK_REPLICATES
    r: Optional[int] = None
    k_grid: Optional[Sequence[int]] = None
    ci_level: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "kind", _validate(self.kind, self.r))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        if not self.sample_sizes or min(self.sample_sizes) < 2:
            raise ValueError("sample sizes must be integers >= 2")
        if self.runs < 1 or self.replicates < 1:
            raise ValueError("runs and replicates must be >= 1")
        if not 0 <= self.master_seed <= 2**64 - 1:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if not 0.0 < self.ci_level < 1.0:
            raise ValueError("ci_level must lie in (0, 1)")
        if self.k_grid is not None:
            grid = tuple(int(k) for k in self.k_grid)
            if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError("k grid must be nonempty, positive and strictly increasing")
            object.__setattr__(self, "k_grid", grid)

    def grid_for(self, n: int) -> np.ndarray:
        if self.k_grid is None:
            grid = np.arange(1, n // 4 + 1)
        else:
            grid = np.asarray(self.k_grid)
        if grid.size == 0 or grid[-1] > n - 1:
            raise ValueError(f"k grid does not fit sample size n={n}")
        return grid


@dataclass
class SizeResult:
    """Aggregated study output for one sample size.

    Arrays are aligned with ``k``. ``present`` is False where some replicate
    had no sample with upcrossings; statistics there are NaN.
    """

    n: int
    k: np.ndarray
    mean: np.ndarray
    mse: np.ndarray
    sd: np.ndarray
    hw_mean: np.ndarray
    hw_mse: np.ndarray
    hw_sd: np.ndarray
    skipped: np.ndarray
    present: np.ndarray
    k0: int = field(init=False)

    def __post_init__(self):
        mse = np.where(self.present, self.mse, np.inf)
        self.k0 = int(self.k[int(np.argmin(mse))])

    @property
    def k0_fraction(self) -> float:
        return self.k0 / self.n

    def at(self, k: int) -> dict:
        j = int(np.searchsorted(self.k, k))
        if j >= self.k.size or self.k[j] != k:
            raise KeyError(k)
        return {
            name: getattr(self, name)[j].item()
            for name in ("mean", "mse", "sd", "hw_mean", "hw_mse", "hw_sd", "skipped", "present")
        }


@dataclass
class McStudyResult:
    spec: McStudySpec
    eta_true: float
    sizes: dict[int, SizeResult]


def _block(task):
    kind, r, n, replicate, lo, hi, seed, k_max, eta_true = task
    paths = np.stack(
        [sample_process(kind, n, run_stream(seed, n, replicate, run), r) for run in range(lo, hi)]
    )
    n_up, n_start = upcrossing_counts_by_k(paths, k_max)
    n_up, n_start = n_up[:, 1:], n_start[:, 1:]
    has = n_up > 0
    d = np.where(has, n_start / np.where(has, n_up, 1) - eta_true, 0.0)
    return has.sum(axis=0), d.sum(axis=0), (d * d).sum(axis=0)


def _map(tasks, workers):
    if workers is None or workers <= 1:
        return list(map(_block, tasks))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_block, tasks, chunksize=1))


def run_study(spec: McStudySpec, workers: Optional[int] = 1) -> McStudyResult:
    """Run a Monte Carlo study; ``workers > 1`` spreads blocks over processes."""
    eta_true = known_indices(spec).eta
    z = norm.ppf(0.5 * (1.0 + spec.ci_level))
    m = spec.replicates
    sizes = {}
    for n in spec.sample_sizes:
        grid = spec.grid_for(n)
        k_max = int(grid[-1])
        tasks = [
            (spec.kind, spec.r, n, rep, lo, min(lo + BLOCK_RUNS, spec.runs),
             spec.master_seed, k_max, eta_true)
            for rep in range(m)
            for lo in range(0, spec.runs, BLOCK_RUNS)
        ]
        out = _map(tasks, workers)
        per_rep = len(out) // m
        stats = np.full((3, m, k_max), np.nan)
        counts = np.zeros((m, k_max), dtype=np.int64)
        for rep in range(m):
            chunk = out[rep * per_rep:(rep + 1) * per_rep]
            c = sum(b[0] for b in chunk)
            s1 = sum(b[1] for b in chunk)
            s2 = sum(b[2] for b in chunk)
            counts[rep] = c
            with np.errstate(invalid="ignore", divide="ignore"):
                stats[0, rep] = eta_true + s1 / c
                stats[1, rep] = s2 / c
                stats[2, rep] = np.sqrt(np.maximum(s2 - s1 * s1 / c, 0.0) / (c - 1))
            stats[2, rep][c < 2] = np.nan
        stats[:, counts == 0] = np.nan
        present = (counts > 0).all(axis=0)
        agg = stats.mean(axis=1)
        if m > 1:
            hw = z * stats.std(axis=1, ddof=1) / np.sqrt(m)
        else:
            hw = np.full_like(agg, np.nan)
        idx = grid - 1
        skipped = spec.runs * m - counts.sum(axis=0)
        if (skipped[idx] > 0).any():
            log.info("n=%d: %d (k, run) pairs skipped for lack of upcrossings", n, int(skipped[idx].sum()))
        sizes[n] = SizeResult(
            n=n, k=grid.copy(),
            mean=agg[0, idx], mse=agg[1, idx], sd=agg[2, idx],
            hw_mean=hw[0, idx], hw_mse=hw[1, idx], hw_sd=hw[2, idx],
            skipped=skipped[idx], present=present[idx],
        )
    return McStudyResult(spec=spec, eta_true=eta_true, sizes=sizes)


@dataclass(frozen=True)
class BiasVariance:
    k: np.ndarray
    bias2: np.ndarray
    variance: np.ndarray


def bias_variance_decomposition(result, eta_true: float) -> dict[int, BiasVariance]:
    """Split the aggregated MSE into squared bias and variance (floored at 0)."""
    sizes = result.sizes if isinstance(result, McStudyResult) else result
    out = {}
    for n, s in sizes.items():
        bias2 = (np.asarray(s.mean) - eta_true) ** 2
        out[n] = BiasVariance(k=np.asarray(s.k), bias2=bias2,
                              variance=np.maximum(np.asarray(s.mse) - bias2, 0.0))
    return out
