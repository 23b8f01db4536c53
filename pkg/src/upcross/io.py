"""CSV ingestion and plot-ready exports.

Files are UTF-8 with LF line endings. Reals are written with ``repr`` so they
parse back to the same double, independent of locale.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import ParseError
from .estimators import EtaCurve
from .montecarlo import McStudyResult
from .series import TimeSeries

__all__ = [
    "format_real",
    "read_series_csv",
    "write_series_csv",
    "curve_rows",
    "write_curve_csv",
    "study_rows",
    "write_study_csv",
    "CURVE_COLUMNS",
    "STUDY_COLUMNS",
]

CURVE_COLUMNS = [
    "k", "threshold", "eta_hat", "ci_lower", "ci_upper",
    "n_upcrossings", "n_run_starts", "status", "scale_hint",
]
STUDY_COLUMNS = [
    "row_type", "n", "k", "k_fraction", "mean", "mean_hw", "mse", "mse_hw",
    "sd", "sd_hw", "skipped",
]


def format_real(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _parse_real(text: str):
    try:
        v = float(text)
    except ValueError:
        return None
    return v


def read_series_csv(path) -> TimeSeries:
    """Read a single-column CSV of reals.

    A first line that does not parse as a number is taken as a header.
    Trailing blank lines are ignored; any other malformed row raises
    ``ParseError`` with its 1-based line number.
    """
    text = Path(path).read_text(encoding="utf-8-sig")
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    values = []
    for lineno, raw in enumerate(lines, start=1):
        cell = raw.strip()
        if "," in cell:
            raise ParseError(f"expected a single column, got {raw!r}", line=lineno)
        v = _parse_real(cell) if cell else None
        if v is None:
            if lineno == 1 and cell:
                continue
            raise ParseError(f"not a real number: {raw!r}", line=lineno)
        if not math.isfinite(v):
            raise ParseError(f"non-finite value {raw!r}", line=lineno)
        values.append(v)
    if not values:
        raise ParseError("no data rows", line=len(lines) or None)
    return TimeSeries(values)


def write_series_csv(path, series, header: str = "value") -> None:
    values = series.values if isinstance(series, TimeSeries) else series
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for v in values:
            fh.write(format_real(v) + "\n")


def curve_rows(curve: EtaCurve):
    for k, est in curve.entries:
        ci = est.ci
        yield [
            str(k),
            format_real(est.threshold),
            format_real(est.eta_hat),
            format_real(ci.lower) if ci else "",
            format_real(ci.upper) if ci else "",
            str(est.n_upcrossings),
            str(est.n_run_starts),
            est.status,
            curve.scale_hint,
        ]


def _write_rows(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_curve_csv(path, curve: EtaCurve) -> None:
    _write_rows(path, CURVE_COLUMNS, curve_rows(curve))


def study_rows(result: McStudyResult):
    """One ``k`` row per grid point and one ``summary`` row per sample size."""
    for n, s in result.sizes.items():
        for j, k in enumerate(s.k):
            yield [
                "k", str(n), str(int(k)), format_real(k / n),
                format_real(s.mean[j]), format_real(s.hw_mean[j]),
                format_real(s.mse[j]), format_real(s.hw_mse[j]),
                format_real(s.sd[j]), format_real(s.hw_sd[j]),
                str(int(s.skipped[j])),
            ]
    for n, s in result.sizes.items():
        j = int(s.k.tolist().index(s.k0))
        yield [
            "summary", str(n), str(s.k0), format_real(s.k0_fraction),
            format_real(s.mean[j]), format_real(s.hw_mean[j]),
            format_real(s.mse[j]), format_real(s.hw_mse[j]),
            format_real(s.sd[j]), format_real(s.hw_sd[j]),
            str(int(s.skipped[j])),
        ]


def write_study_csv(path, result: McStudyResult) -> None:
    _write_rows(path, STUDY_COLUMNS, study_rows(result))
