"""Growth-exponent fits, the N^(3/4) constant estimate, and series CSV I/O."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InsufficientData, InvalidArgument
from .twisted import SumSeries

MIN_POINTS = 8
PROVEN_EXPONENT = 5 / 6
CONJECTURED_EXPONENT = 3 / 4
CSV_HEADER = ["N", "alpha", "re", "im", "abs", "abs_dec"]

_MODES = {"point": "pointwise", "pointwise": "pointwise", "max": "running-max", "running-max": "running-max"}


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_constant: float
    residual_rms: float
    window: tuple[int, int]
    envelope_mode: str
    points: int

    def bracket(self) -> str:
        """Where the exponent sits relative to 3/4 and 5/6."""
        if self.exponent < CONJECTURED_EXPONENT:
            return "below 3/4"
        if self.exponent <= PROVEN_EXPONENT:
            return "between 3/4 and 5/6"
        return "above 5/6"


def envelope(abs_values: np.ndarray, mode: str) -> np.ndarray:
    mode = _MODES.get(mode)
    if mode is None:
        raise InvalidArgument("envelope mode must be 'point' or 'max'")
    return np.maximum.accumulate(abs_values) if mode == "running-max" else abs_values


def fit_exponent(series: SumSeries, mode: str = "max") -> FitResult:
    """Least squares of log|S| (or its running max) against log N."""
    label = _MODES.get(mode)
    if label is None:
        raise InvalidArgument("envelope mode must be 'point' or 'max'")
    N = np.asarray(series.grid, dtype=float)
    y = envelope(series.abs, mode)
    keep = y > 0
    if keep.sum() < MIN_POINTS:
        raise InsufficientData(
            f"need at least {MIN_POINTS} grid points with nonzero |S|, have {int(keep.sum())}"
        )
    lx, ly = np.log(N[keep]), np.log(y[keep])
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, icept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + icept)
    rms = float(np.sqrt(np.mean(resid**2)))
    grid = np.asarray(series.grid)[keep]
    return FitResult(float(slope), float(icept), rms, (int(grid[0]), int(grid[-1])), label, int(keep.sum()))


@dataclass(frozen=True)
class ZEstimate:
    Z_hat: complex
    spread: float


def estimate_Z(series: SumSeries) -> ZEstimate:
    """Mean of S(N)/N^(3/4) over the grid and the max pairwise distance."""
    if len(series) < MIN_POINTS:
        raise InsufficientData(f"need at least {MIN_POINTS} grid points, have {len(series)}")
    N = np.asarray(series.grid, dtype=float)
    w = np.asarray(series.values, dtype=complex) / N**0.75
    z = complex(math.fsum(w.real) / w.size, math.fsum(w.imag) / w.size)
    spread = float(np.max(np.abs(w[:, None] - w[None, :])))
    return ZEstimate(z, spread)


# ------------------------------------------------------------------ CSV


def write_series_csv(series: SumSeries, path) -> Path:
    """Header N,alpha,re,im,abs,abs_dec; floats as hex except abs_dec."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        a = float(series.alpha)
        for N, s in zip(series.grid, series.values):
            s = complex(s)
            m = math.hypot(s.real, s.imag)
            w.writerow([N, a.hex(), s.real.hex(), s.imag.hex(), m.hex(), repr(m)])
    return path


def read_series_csv(path) -> SumSeries:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != CSV_HEADER:
        raise InvalidArgument(f"{path}: expected header {','.join(CSV_HEADER)}")
    grid, values, alphas = [], [], set()
    for row in rows[1:]:
        grid.append(int(row[0]))
        alphas.add(float.fromhex(row[1]))
        values.append(complex(float.fromhex(row[2]), float.fromhex(row[3])))
    if len(alphas) > 1:
        raise InvalidArgument(f"{path}: mixed alpha values")
    alpha = alphas.pop() if alphas else math.nan
    return SumSeries(alpha, grid, values, {"source": str(path)})


def write_rows_csv(rows: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return path
