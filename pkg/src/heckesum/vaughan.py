"""Vaughan's identity and its five-piece refinement on a dyadic block (N, 2N].

With y = N^(1/3), z = sqrt(2N) and N < n <= 2N:

    L1(n) =  sum_{ab=n,  b<=y}            mu(b) log a
    L2(n) = -sum_{abc=n, b,c<=y, a>=z}    mu(b) Lambda(c)
    L3(n) = -sum_{abc=n, b,c<=y, y<a<z}   mu(b) Lambda(c)
    L4(n) =  sum_{abc=n, c>y, y<b<z}      mu(b) Lambda(c)
    L5(n) =  sum_{abc=n, b>=z, y<c<=z}    mu(b) Lambda(c)

and L1 + ... + L5 = Lambda(n).  Factorizations are generated from the
divisor lattice of n, so the cost per n is d_3(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import LambdaTable
from .errors import OutOfRange, PreconditionError
from .sieve import SieveTables
from .twisted import chunked_sum, sqrt_phase


@dataclass(frozen=True)
class VaughanParams:
    N: int
    y: float
    z: float

    @classmethod
    def for_block(cls, N: int) -> "VaughanParams":
        if N < 2:
            raise PreconditionError(f"block base N must be >= 2, got {N}")
        y = N ** (1 / 3)
        r = round(y)
        if r**3 == N:
            y = float(r)
        return cls(N, y, math.sqrt(2 * N))


@dataclass(frozen=True)
class PieceVector:
    values: tuple[float, float, float, float, float]

    def total(self) -> float:
        return math.fsum(self.values)

    def __getitem__(self, i):
        return self.values[i]


def vaughan_classic(n: int, y: float, sv: SieveTables) -> float:
    """Three-term Vaughan right-hand side, valid for n > y >= 2."""
    if y < 2:
        raise PreconditionError(f"need y >= 2, got {y}")
    if n <= y:
        raise PreconditionError(f"identity requires n > y (n={n}, y={y})")
    mu, lam = sv.mobius, sv.mangoldt
    first, second, third = [], [], []
    for b in sv.divisors(n):
        if b <= y:
            first.append(mu[b] * math.log(n // b))
        m = n // b
        for c in sv.divisors(m):
            if lam[c] == 0:
                continue
            if b <= y and c <= y:
                second.append(mu[b] * lam[c])
            elif b > y and c > y:
                third.append(mu[b] * lam[c])
    return math.fsum(first) - math.fsum(second) + math.fsum(third)


def lambda_pieces(n: int, params: VaughanParams, sv: SieveTables) -> PieceVector:
    N, y, z = params.N, params.y, params.z
    if N < 8:
        raise PreconditionError(f"need N >= 8 so that y >= 2, got N={N}")
    if not N < n <= 2 * N:
        raise PreconditionError(f"n={n} outside the block ({N}, {2 * N}]")
    mu, lam = sv.mobius, sv.mangoldt
    p1, p2, p3, p4, p5 = [], [], [], [], []
    for b in sv.divisors(n):
        mb = int(mu[b])
        if b <= y and mb:
            p1.append(mb * math.log(n // b))
        if not mb:
            continue
        for c in sv.divisors(n // b):
            a = n // (b * c)
            if b <= y and c <= y:
                if a >= z:
                    p2.append(mb * lam[c])
                elif y < a:
                    p3.append(mb * lam[c])
                else:
                    raise AssertionError(f"a={a} <= y for b, c <= y at n={n}")
            elif b > y and c > y:
                if b < z:
                    p4.append(mb * lam[c])
                else:
                    assert c <= z, f"L5 term with c={c} > z at n={n}"
                    p5.append(mb * lam[c])
    return PieceVector(
        (math.fsum(p1), -math.fsum(p2), -math.fsum(p3), math.fsum(p4), math.fsum(p5))
    )


def block_pieces(params: VaughanParams, sv: SieveTables) -> np.ndarray:
    """Array of shape (N, 5): pieces for n = N+1..2N."""
    N = params.N
    return np.array(
        [lambda_pieces(n, params, sv).values for n in range(N + 1, 2 * N + 1)]
    )


def component_sums(
    params: VaughanParams, alpha: float, lam: LambdaTable, sv: SieveTables
) -> list[complex]:
    """S_i = sum_{N<n<=2N} L_i(n) lambda(n) e(alpha sqrt n), i = 1..5."""
    N = params.N
    if 2 * N > min(lam.n_max, sv.n_max):
        raise OutOfRange(f"block (N, 2N] with N={N} exceeds table sizes")
    pieces = block_pieces(params, sv)
    out = []
    for i in range(5):
        weights = pieces[:, i] * lam.values[N + 1 : 2 * N + 1]

        def terms(a, b, w=weights):
            n = np.arange(a + 1, b + 1)
            return w[a - N : b - N] * np.exp(1j * sqrt_phase(n, alpha))

        out.append(chunked_sum(N, 2 * N, terms))
    return out


def bilinear_scale(N: int, log_power: int = 20) -> float:
    """N^(5/6) (log 3N)^power, the size the bilinear pieces are measured against."""
    return N ** (5 / 6) * math.log(3 * N) ** log_power


def component_rows(params: VaughanParams, alpha: float, sums: list[complex]) -> list[dict]:
    """CSV rows: N, alpha, i, re, im, abs, abs/N^(5/6)."""
    scale = params.N ** (5 / 6)
    return [
        {
            "N": params.N,
            "alpha": alpha,
            "i": i + 1,
            "re": s.real,
            "im": s.imag,
            "abs": abs(s),
            "abs_over_N56": abs(s) / scale,
        }
        for i, s in enumerate(sums)
    ]
