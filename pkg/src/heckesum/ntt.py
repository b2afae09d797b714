"""Number-theoretic transforms and CRT reconstruction over word-size primes.

All arithmetic is done in ``uint64`` numpy arrays with moduli below 2**32,
so a product of two reduced residues never exceeds 2**64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .errors import ConfigurationError

MODULUS_LIMIT = 1 << 32


def is_prime_u32(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 4 759 123 141."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 7, 61):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def transform_friendly_primes(log_len: int):
    """Yield primes p = c*2**log_len + 1 below 2**32, largest first."""
    step = 1 << log_len
    c = (MODULUS_LIMIT - 2) // step
    while c >= 1:
        p = c * step + 1
        if is_prime_u32(p):
            yield p
        c -= 1


def _prime_factors(n: int) -> list[int]:
    fs, d = [], 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    fs = _prime_factors(p - 1)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in fs):
        g += 1
    return g


@lru_cache(maxsize=8)
def _bit_reverse(log_len: int) -> np.ndarray:
    n = 1 << log_len
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(log_len):
        rev |= ((idx >> b) & 1) << (log_len - 1 - b)
    return rev


def _powers(w: int, count: int, p: int) -> np.ndarray:
    out = np.ones(1, dtype=np.uint64)
    while out.size < count:
        step = pow(w, out.size, p)
        out = np.concatenate([out, out * np.uint64(step) % np.uint64(p)])
    return out[:count]


@lru_cache(maxsize=16)
def _twiddles(p: int, log_len: int, inverse: bool) -> np.ndarray:
    """Stage twiddles concatenated: stage s contributes 2**s powers."""
    root = pow(primitive_root(p), (p - 1) >> log_len, p)
    if inverse:
        root = pow(root, p - 2, p)
    stages = []
    for s in range(log_len):
        h = 1 << s
        w = pow(root, (1 << log_len) // (2 * h), p)
        stages.append(_powers(w, h, p))
    return np.concatenate(stages)


@numba.njit(cache=True)
def _butterflies(x, p, tw, log_len):
    n = x.size
    off = 0
    for s in range(log_len):
        h = 1 << s
        for start in range(0, n, 2 * h):
            for j in range(h):
                u = x[start + j]
                v = x[start + j + h] * tw[off + j] % p
                t = u + v
                if t >= p:
                    t -= p
                x[start + j] = t
                t = u + p - v
                if t >= p:
                    t -= p
                x[start + j + h] = t
        off += h


def ntt(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """Radix-2 transform of ``a`` (length a power of two) modulo ``p``."""
    n = a.size
    log_len = n.bit_length() - 1
    if 1 << log_len != n:
        raise ValueError("transform length must be a power of two")
    if (p - 1) % n:
        raise ValueError(f"modulus {p} does not support length {n}")
    P = np.uint64(p)
    x = np.ascontiguousarray(a.astype(np.uint64)[_bit_reverse(log_len)])
    _butterflies(x, P, _twiddles(p, log_len, inverse), log_len)
    if inverse:
        x = x * np.uint64(pow(n, p - 2, p)) % P
    return x


def square_truncated(a: np.ndarray, p: int, keep: int) -> np.ndarray:
    """First ``keep`` coefficients of a*a modulo p."""
    size = 1 << max(1, (a.size + keep - 1)).bit_length()
    buf = np.zeros(size, dtype=np.uint64)
    buf[: a.size] = a
    f = ntt(buf, p)
    return ntt(f * f % np.uint64(p), p, inverse=True)[:keep]


@dataclass(frozen=True)
class CrtBasis:
    """Coprime transform-friendly moduli with a guaranteed reconstruction range."""

    primes: tuple[int, ...]
    log_len: int

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    def covers(self, bound: int) -> bool:
        return self.product > bound

    @classmethod
    def for_bound(cls, bound: int, log_len: int) -> "CrtBasis":
        """Smallest prefix of the largest friendly primes whose product exceeds ``bound``."""
        chosen: list[int] = []
        prod = 1
        for p in transform_friendly_primes(log_len):
            chosen.append(p)
            prod *= p
            if prod > bound:
                return cls(tuple(chosen), log_len)
        raise ConfigurationError(
            f"not enough primes = 1 mod 2^{log_len} below 2^32 to exceed a "
            f"{bound.bit_length()}-bit reconstruction bound"
        )


def crt_signed(residues: list[np.ndarray], primes: tuple[int, ...]) -> np.ndarray:
    """Garner reconstruction to signed Python ints in (-P/2, P/2].

    The fold runs in the given prime order; the result does not depend on it.
    """
    k = len(primes)
    digits: list[np.ndarray] = []
    for i in range(k):
        pi = np.uint64(primes[i])
        v = residues[i].astype(np.uint64) % pi
        for j in range(i):
            pj_inv = np.uint64(pow(primes[j], -1, primes[i]))
            v = (v + pi - digits[j] % pi) % pi * pj_inv % pi
        digits.append(v)
    total = np.zeros(residues[0].size, dtype=object)
    for i in reversed(range(k)):
        total = total * primes[i] + digits[i].astype(object)
    P = math.prod(primes)
    half = P // 2
    neg = total > half
    total[neg] = total[neg] - P
    return total
