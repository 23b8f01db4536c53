"""Simulators for processes with known upcrossings index.

Random streams
--------------
All draws come from numpy's ``PCG64`` bit generator seeded through
``SeedSequence``. A standalone simulation uses ``SeedSequence(seed)``. Monte
Carlo run ``run`` of replicate ``replicate`` at sample size ``n`` uses
``SeedSequence(master_seed, spawn_key=(n, replicate, run))``, so every run owns
an independent stream that does not depend on how runs are scheduled.
``STREAM_VERSION`` changes whenever this scheme or the order of draws changes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .series import TimeSeries

__all__ = [
    "STREAM_VERSION",
    "ProcessKind",
    "ProcessSpec",
    "KnownIndices",
    "make_rng",
    "run_stream",
    "simulate",
    "sample_process",
    "armax_from_innovations",
    "ar1_from_innovations",
    "known_indices",
]

STREAM_VERSION = "pcg64-seedseq-v1"
_MAX_SEED = 2**64 - 1


class ProcessKind(str, enum.Enum):
    ARMAX = "armax"
    AR1 = "ar1"
    IID = "iid"


@dataclass(frozen=True)
class ProcessSpec:
    """Process family, sample size and seed.

    ``r`` is required for ``ar1`` (integer >= 2) and must be omitted otherwise.
    """

    kind: ProcessKind
    n: int
    seed: int
    r: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ProcessKind(self.kind))
        _validate(self.kind, self.r)
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed <= _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", int(self.seed))


def _validate(kind, r):
    kind = ProcessKind(kind)
    if kind is ProcessKind.AR1:
        if r is None or isinstance(r, bool) or int(r) != r or r < 2:
            raise ValueError(f"ar1 needs an integer r >= 2, got {r!r}")
    elif r is not None:
        raise ValueError(f"r only applies to ar1, got r={r!r} for {kind.value}")
    return kind


@dataclass(frozen=True)
class KnownIndices:
    eta: float
    theta: float
    nu_over_tau: float


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def run_stream(master_seed: int, n: int, replicate: int, run: int) -> np.random.Generator:
    """Independent generator for one Monte Carlo run."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(n, replicate, run))
    return np.random.Generator(np.random.PCG64(ss))


def armax_from_innovations(y) -> np.ndarray:
    """``X_i = max(Y_i, Y_{i-2}, Y_{i-3})`` for ``i = 1..n``.

    ``y`` holds ``Y_{-2}, Y_{-1}, ..., Y_n`` (length ``n + 3``).
    """
    y = np.asarray(y, dtype=float)
    return np.maximum(np.maximum(y[3:], y[1:-2]), y[:-3])


def ar1_from_innovations(x0: float, eps, r: int) -> np.ndarray:
    """``X_i = -X_{i-1} / r + eps_i`` started from ``X_0 = x0``."""
    eps = np.asarray(eps, dtype=float)
    a = 1.0 / r
    out, _ = lfilter([1.0], [1.0, a], eps, zi=[-a * x0])
    return out


def sample_process(kind, n: int, rng: np.random.Generator, r: Optional[int] = None) -> np.ndarray:
    """Draw one path of length ``n`` from ``rng``."""
    kind = _validate(kind, r)
    if kind is ProcessKind.ARMAX:
        return armax_from_innovations(rng.random(n + 3))
    if kind is ProcessKind.AR1:
        # X_0 on the open interval (0, 1)
        x0 = (float(rng.integers(0, 2**53 - 1)) + 1.0) * 2.0**-53
        eps = (np.floor(rng.random(n) * r) + 1.0) / r
        return ar1_from_innovations(x0, eps, r)
    return rng.random(n)


def simulate(spec: ProcessSpec) -> TimeSeries:
    return TimeSeries(sample_process(spec.kind, spec.n, make_rng(spec.seed), spec.r))


def known_indices(spec) -> KnownIndices:
    """Upcrossings index, extremal index and rate ratio of the process.

    Accepts a ``ProcessSpec`` or anything with ``kind`` and ``r`` attributes.
    """
    kind = _validate(spec.kind, spec.r)
    if kind is ProcessKind.ARMAX:
        return KnownIndices(eta=0.5, theta=1.0 / 3.0, nu_over_tau=2.0 / 3.0)
    if kind is ProcessKind.AR1:
        eta = float(1 - Fraction(1, int(spec.r) ** 2))
        return KnownIndices(eta=eta, theta=eta, nu_over_tau=1.0)
    return KnownIndices(eta=1.0, theta=1.0, nu_over_tau=1.0)
