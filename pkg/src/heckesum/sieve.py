"""Segmented sieve for smallest prime factor, Moebius and von Mangoldt tables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, OutOfRange

SIEVE_CAP = 10**8
SEGMENT = 1 << 20


@dataclass(frozen=True)
class SieveTables:
    """Arithmetic tables indexed directly by n (index 0 is unused)."""

    n_max: int
    mangoldt: np.ndarray  # float64, ln p at prime powers
    mobius: np.ndarray  # int8
    is_prime: np.ndarray  # bool
    smallest_factor: np.ndarray  # int32/int64; spf[1] = 1

    def factor(self, n: int) -> list[tuple[int, int]]:
        """[(p, e), ...] with p increasing."""
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n={n} outside 1..{self.n_max}")
        out = []
        spf = self.smallest_factor
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def divisors(self, n: int) -> list[int]:
        divs = [1]
        for p, e in self.factor(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def exponent_profile(self, x: int) -> list[np.ndarray]:
        """Prime exponents of every n <= x, one array per distinct prime factor.

        Entry i of the returned list holds, for each n in 1..x, the exponent of
        the i-th smallest prime of n (0 once n has run out of primes).
        """
        if x > self.n_max:
            raise OutOfRange(f"x={x} exceeds table size {self.n_max}")
        rem = np.arange(1, x + 1, dtype=np.int64)
        spf = self.smallest_factor
        profile = []
        while True:
            live = rem > 1
            if not live.any():
                break
            p = np.where(live, spf[rem], 1)
            e = np.zeros(x, dtype=np.int64)
            div = live.copy()
            while div.any():
                rem[div] //= p[div]
                e[div] += 1
                div = live & (rem % p == 0)
            profile.append(e)
        return profile

    def divisor_counts(self, x: int | None = None) -> np.ndarray:
        """d(n) for n = 0..x (index 0 holds 0)."""
        x = self.n_max if x is None else x
        d = np.ones(x, dtype=np.int64)
        for e in self.exponent_profile(x):
            d *= e + 1
        return np.concatenate([[0], d])


def _base_primes(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


def build_sieve(n_max: int) -> SieveTables:
    if not isinstance(n_max, (int, np.integer)) or not 1 <= n_max <= SIEVE_CAP:
        raise InvalidArgument(f"n_max must be in 1..{SIEVE_CAP}, got {n_max!r}")
    n_max = int(n_max)
    idx_type = np.int32 if n_max < 2**31 else np.int64
    spf = np.zeros(n_max + 1, dtype=idx_type)
    mobius = np.zeros(n_max + 1, dtype=np.int8)
    base = _base_primes(math.isqrt(n_max))

    for lo in range(0, n_max + 1, SEGMENT):
        hi = min(lo + SEGMENT, n_max + 1)
        seg_spf = np.zeros(hi - lo, dtype=idx_type)
        mu = np.ones(hi - lo, dtype=np.int8)
        prod = np.ones(hi - lo, dtype=np.int64)
        for p in base:
            p = int(p)
            start = max(p, -(-lo // p) * p) - lo
            if start >= hi - lo:
                continue
            sl = slice(start, None, p)
            view = seg_spf[sl]
            view[view == 0] = p
            seg_spf[sl] = view
            mu[sl] = -mu[sl]
            prod[sl] *= p
            sq = p * p
            s2 = -(-lo // sq) * sq - lo
            if s2 < hi - lo:
                mu[s2::sq] = 0
        n = np.arange(lo, hi, dtype=np.int64)
        # at most one prime factor exceeds sqrt(n_max)
        big = prod != n
        mu[big] = -mu[big]
        fresh = seg_spf == 0
        seg_spf[fresh] = n[fresh]
        spf[lo:hi] = seg_spf
        mobius[lo:hi] = mu

    spf[0] = 0
    mobius[0] = 0
    if n_max >= 1:
        spf[1] = 1
        mobius[1] = 1
    is_prime = np.zeros(n_max + 1, dtype=bool)
    is_prime[2:] = spf[2:] == np.arange(2, n_max + 1)

    mangoldt = np.zeros(n_max + 1)
    primes = np.flatnonzero(is_prime)
    mangoldt[primes] = np.log(primes)
    for p in primes[: np.searchsorted(primes, math.isqrt(n_max), side="right")]:
        p = int(p)
        q = p * p
        while q <= n_max:
            mangoldt[q] = math.log(p)
            q *= p
    return SieveTables(n_max, mangoldt, mobius, is_prime, spf)


def divisor_power_sum(k: int, l: int, x: int, tables: SieveTables) -> tuple[float, float]:
    """Sum of tau_k(n)^l over n <= x, and its ratio to x (log 2x)^(k^l - 1).

    tau_k(p^e) = C(e + k - 1, k - 1), multiplicative in n.
    """
    if k < 2 or l < 1:
        raise InvalidArgument("need k >= 2 and l >= 1")
    if not 1 <= x <= tables.n_max:
        raise OutOfRange(f"x={x} outside 1..{tables.n_max}")
    tk = np.ones(x)
    for e in tables.exponent_profile(x):
        lut = np.array([math.comb(j + k - 1, k - 1) for j in range(int(e.max()) + 1)], dtype=float)
        tk *= lut[e]
    total = math.fsum(tk**l)
    return total, total / (x * math.log(2 * x) ** (k**l - 1))
