"""The twisted prime sum S(N) = sum_{n<=N} lambda(n) Lambda(n) e(alpha sqrt n).

Summation is deterministic: terms are grouped into fixed chunks of
``CHUNK`` consecutive integers (aligned to absolute n), each chunk is
summed exactly with ``math.fsum``, and chunk totals are combined by a
left-to-right pairwise tree.  The worker count only changes who computes
a chunk, never the arithmetic.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coeffs import LambdaTable
from .errors import InvalidArgument, OutOfRange
from .sieve import SieveTables

CHUNK = 1 << 16
TWO_PI = 2 * math.pi


def reduced_phase(x: np.ndarray) -> np.ndarray:
    """2*pi*frac(x) for a longdouble array x, returned as float64."""
    frac = x - np.floor(x)
    return (TWO_PI * frac.astype(np.float64))


def sqrt_phase(n: np.ndarray, alpha: float) -> np.ndarray:
    """2*pi*frac(alpha*sqrt(n)), the reduction done in extended precision."""
    return reduced_phase(np.longdouble(alpha) * np.sqrt(n.astype(np.longdouble)))


def linear_phase(n: np.ndarray, alpha: float) -> np.ndarray:
    return reduced_phase(np.longdouble(alpha) * n.astype(np.longdouble))


def pairwise(values: list[complex]) -> complex:
    """Left-to-right pairwise combination in a fixed tree shape."""
    if not values:
        return 0j
    vals = list(values)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return complex(vals[0])


def chunked_sum(lo: int, hi: int, terms, workers: int = 1) -> complex:
    """Deterministic sum of ``terms(a, b)`` over n in (lo, hi].

    ``terms(a, b)`` must return complex values for n = a+1..b.
    """
    if hi <= lo:
        return 0j
    edges = [lo] + list(range((lo // CHUNK + 1) * CHUNK, hi, CHUNK)) + [hi]
    spans = list(zip(edges[:-1], edges[1:]))

    def one(span):
        z = terms(*span)
        return complex(math.fsum(z.real), math.fsum(z.imag))

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, spans))
    else:
        parts = [one(s) for s in spans]
    return pairwise(parts)


def _check_tables(N: int, lam: LambdaTable, sv: SieveTables) -> None:
    if N < 1:
        raise InvalidArgument(f"N must be positive, got {N}")
    if N > min(lam.n_max, sv.n_max):
        raise OutOfRange(f"N={N} exceeds table sizes ({lam.n_max}, {sv.n_max})")


def _prime_power_terms(alpha: float, lam: LambdaTable, sv: SieveTables):
    def terms(a, b):
        w = lam.values[a + 1 : b + 1] * sv.mangoldt[a + 1 : b + 1]
        nz = np.flatnonzero(w)
        n = nz + (a + 1)
        return w[nz] * np.exp(1j * sqrt_phase(n, alpha))

    return terms


def block_sum(lo: int, hi: int, alpha: float, lam, sv, workers: int = 1) -> complex:
    """sum over lo < n <= hi of lambda(n) Lambda(n) e(alpha sqrt n)."""
    if alpha <= 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    if lo < 0 or hi < lo:
        raise InvalidArgument(f"bad block ({lo}, {hi}]")
    if hi > 0:
        _check_tables(hi, lam, sv)
    return chunked_sum(lo, hi, _prime_power_terms(alpha, lam, sv), workers)


def twisted_sum(N: int, alpha: float, lam: LambdaTable, sv: SieveTables, workers: int = 1) -> complex:
    _check_tables(N, lam, sv)
    return block_sum(0, N, alpha, lam, sv, workers)


@dataclass
class SumSeries:
    alpha: float
    grid: list[int]
    values: list[complex]
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.grid)

    @property
    def abs(self) -> np.ndarray:
        return np.abs(np.asarray(self.values, dtype=complex))


def geometric_grid(n_min: int, n_max: int, ratio: float) -> list[int]:
    """ceil(n_min * ratio^j) within [n_min, n_max], with n_max appended.

    The ratio is taken as the exact rational value of the float, so the
    grid has no rounding ambiguity.
    """
    if n_min < 2 or n_max < n_min:
        raise InvalidArgument(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    if not 1 < ratio <= 2:
        raise InvalidArgument(f"ratio must lie in (1, 2], got {ratio}")
    r = Fraction(ratio)
    grid = []
    x = Fraction(n_min)
    while x <= n_max:
        g = math.ceil(x)
        if not grid or g > grid[-1]:
            grid.append(g)
        x *= r
    if grid[-1] != n_max:
        grid.append(n_max)
    return grid


def build_series(alpha, n_min, n_max, ratio, lam, sv, workers: int = 1) -> SumSeries:
    grid = geometric_grid(n_min, n_max, ratio)
    if not grid:
        raise InvalidArgument("empty grid")
    _check_tables(grid[-1], lam, sv)
    values = []
    acc = 0j
    prev = 0
    for N in grid:
        acc += block_sum(prev, N, alpha, lam, sv, workers)
        values.append(acc)
        prev = N
    meta = {"n_max": min(lam.n_max, sv.n_max), "built": time.strftime("%Y-%m-%dT%H:%M:%S")}
    return SumSeries(float(alpha), grid, values, meta)


@dataclass(frozen=True)
class DiagnosticSums:
    N: int
    additive: complex  # sum lambda(n) e(alpha n)
    plain: float  # sum lambda(n)
    primes: float  # sum_{p <= N} lambda(p)
    mean_square: float  # (1/N) sum lambda(n)^2

    @property
    def additive_ratio(self) -> float:
        return abs(self.additive) / (math.sqrt(self.N) * math.log(2 * self.N))

    @property
    def plain_ratio(self) -> float:
        return abs(self.plain) / self.N ** (1 / 3)

    @property
    def primes_ratio(self) -> float:
        return abs(self.primes) * math.log(self.N) / math.sqrt(self.N)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "additive_re": self.additive.real,
            "additive_im": self.additive.imag,
            "plain": self.plain,
            "primes": self.primes,
            "mean_square": self.mean_square,
            "additive_ratio": self.additive_ratio,
            "plain_ratio": self.plain_ratio,
            "primes_ratio": self.primes_ratio,
        }


def diagnostic_sums(N: int, alpha: float, lam: LambdaTable, sv: SieveTables) -> DiagnosticSums:
    """Comparison sums: additive twist, plain, prime, and mean square."""
    _check_tables(N, lam, sv)
    if alpha <= 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    v = lam.values

    def additive(a, b):
        n = np.arange(a + 1, b + 1)
        return v[a + 1 : b + 1] * np.exp(1j * linear_phase(n, alpha))

    def plain(a, b):
        return v[a + 1 : b + 1].astype(complex)

    def square(a, b):
        return (v[a + 1 : b + 1] ** 2).astype(complex)

    def prime(a, b):
        return v[a + 1 : b + 1][sv.is_prime[a + 1 : b + 1]].astype(complex)

    return DiagnosticSums(
        N,
        chunked_sum(0, N, additive),
        chunked_sum(0, N, plain).real,
        chunked_sum(0, N, prime).real,
        chunked_sum(0, N, square).real / N,
    )
