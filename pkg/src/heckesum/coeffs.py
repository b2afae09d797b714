"""Ramanujan tau coefficients and normalized Hecke eigenvalues of Delta.

tau(n) is the coefficient of q^n in q * prod(1 - q^m)^24.  We build
prod(1 - q^m)^3 from Jacobi's sparse series and square it three times
modulo a handful of NTT primes, then recover the signed integers by CRT.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CacheValidationError,
    ConfigurationError,
    InvalidArgument,
    OutOfRange,
)
from .ntt import CrtBasis, crt_signed, is_prime_u32, square_truncated

WEIGHT = 12
DEFAULT_CAP = 10**6
HARD_CAP = 10**7
CACHE_MAGIC = b"TAU1"
CACHE_CHECK = 100


@dataclass(frozen=True)
class TauTable:
    """Exact tau(n), stored at index n (index 0 holds 0)."""

    n_max: int
    values: np.ndarray  # dtype=object, Python ints

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n={n} outside 1..{self.n_max}")
        return self.values[n]


@dataclass(frozen=True)
class LambdaTable:
    """lambda(n) = tau(n) / n^(11/2) as float64, stored at index n."""

    n_max: int
    values: np.ndarray

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n={n} outside 1..{self.n_max}")
        return float(self.values[n])


def reconstruction_bound(n_max: int) -> int:
    """Exact integer the CRT product must exceed for ``n_max``.

    Uses 4 * n^(11/2) * d_max with d(n) <= 2 sqrt(n), i.e. 8 * n^6, which
    dominates 2 * |tau(n)| for every n <= n_max.
    """
    return 8 * n_max**6


def _transform_log_len(n_max: int) -> int:
    return max(1, (2 * n_max - 1).bit_length())


def default_basis(n_max: int) -> CrtBasis:
    return CrtBasis.for_bound(reconstruction_bound(n_max), _transform_log_len(n_max))


def _check_basis(primes, n_max: int) -> CrtBasis:
    log_len = _transform_log_len(n_max)
    primes = tuple(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise ConfigurationError("CRT moduli must be distinct")
    for p in primes:
        if not (p < 1 << 32 and is_prime_u32(p) and (p - 1) % (1 << log_len) == 0):
            raise ConfigurationError(
                f"modulus {p} is not a prime = 1 mod 2^{log_len} below 2^32"
            )
    basis = CrtBasis(primes, log_len)
    bound = reconstruction_bound(n_max)
    if not basis.covers(bound):
        raise ConfigurationError(
            f"CRT basis too small for n_max={n_max}: product has "
            f"{basis.product.bit_length()} bits, need more than "
            f"{bound.bit_length()} bits"
        )
    return basis


def eta_cubed_series(length: int) -> list[tuple[int, int]]:
    """Nonzero terms (degree, coeff) of prod(1-q^m)^3 below ``length``."""
    terms = []
    k = 0
    while k * (k + 1) // 2 < length:
        terms.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return terms


def _residues_mod(p: int, n_max: int) -> np.ndarray:
    a = np.zeros(n_max, dtype=np.uint64)
    for deg, c in eta_cubed_series(n_max):
        a[deg] = c % p
    for _ in range(3):
        a = square_truncated(a, p, n_max)
    return a


def build_tau_table(
    n_max: int,
    primes=None,
    *,
    allow_large: bool = False,
    workers: int = 1,
) -> TauTable:
    """Exact tau(n) for 1 <= n <= n_max.

    ``primes`` overrides the CRT basis; the result does not depend on its
    order.  n_max above ``DEFAULT_CAP`` needs ``allow_large=True``.
    """
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise InvalidArgument(f"n_max must be a positive integer, got {n_max!r}")
    n_max = int(n_max)
    cap = HARD_CAP if allow_large else DEFAULT_CAP
    if n_max > cap:
        raise InvalidArgument(
            f"n_max={n_max} exceeds cap {cap}"
            + ("" if allow_large else " (pass allow_large for up to 10^7)")
        )
    basis = default_basis(n_max) if primes is None else _check_basis(primes, n_max)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            residues = list(pool.map(lambda p: _residues_mod(p, n_max), basis.primes))
    else:
        residues = [_residues_mod(p, n_max) for p in basis.primes]

    values = np.zeros(n_max + 1, dtype=object)
    values[0] = 0
    values[1:] = crt_signed(residues, basis.primes)
    return TauTable(n_max, values)


def normalize(tau: TauTable) -> LambdaTable:
    n = np.arange(1, tau.n_max + 1, dtype=np.longdouble)
    scale = np.exp(np.longdouble(WEIGHT - 1) / 2 * np.log(n))
    num = np.array([float(t) for t in tau.values[1:]], dtype=np.longdouble)
    out = np.zeros(tau.n_max + 1)
    out[1:] = (num / scale).astype(np.float64)
    return LambdaTable(tau.n_max, out)


def hecke_product(m: int, n: int, lam: LambdaTable, mobius=None) -> float:
    """sum over d | gcd(m, n) of mu(d) lambda(m/d) lambda(n/d)."""
    if m < 1 or n < 1 or m * n > lam.n_max:
        raise OutOfRange(f"m*n={m * n} exceeds table size {lam.n_max}")
    g = math.gcd(m, n)
    v = lam.values
    total = 0.0
    for d in range(1, g + 1):
        if g % d:
            continue
        mu = _mobius_small(d) if mobius is None else int(mobius[d])
        if mu:
            total += mu * v[m // d] * v[n // d]
    return total


def _mobius_small(n: int) -> int:
    mu, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            mu = -mu
        p += 1
    return -mu if n > 1 else mu


# ---------------------------------------------------------------- cache file


def _limb_count(values: np.ndarray) -> int:
    big = max((abs(int(v)) for v in values[1:]), default=0)
    return max(1, (big.bit_length() + 1 + 63) // 64)


def save_tau_cache(tau: TauTable, path) -> Path:
    """Write 'TAU1' | u64 n_max | u32 L | n_max * L little-endian u64 limbs."""
    path = Path(path)
    L = _limb_count(tau.values)
    width = 8 * L
    body = b"".join(int(v).to_bytes(width, "little", signed=True) for v in tau.values[1:])
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<QI", tau.n_max, L))
        fh.write(body)
    return path


def load_tau_cache(path, validate: bool = True) -> TauTable:
    """Read a 'TAU1' file; entries 1..100 are checked against a fresh build."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CacheValidationError(f"TAU1 cache {path}: cannot read ({exc})") from exc
    if len(raw) < 16 or raw[:4] != CACHE_MAGIC:
        raise CacheValidationError(f"TAU1 validation failed for {path}: bad magic or header")
    n_max, L = struct.unpack("<QI", raw[4:16])
    if n_max < 1 or L < 1 or len(raw) != 16 + 8 * L * n_max:
        raise CacheValidationError(
            f"TAU1 validation failed for {path}: size does not match n_max={n_max}, L={L}"
        )
    width = 8 * L
    frm = int.from_bytes
    values = np.zeros(n_max + 1, dtype=object)
    values[1:] = [
        frm(raw[off : off + width], "little", signed=True)
        for off in range(16, len(raw), width)
    ]
    tau = TauTable(int(n_max), values)
    if validate:
        k = min(CACHE_CHECK, tau.n_max)
        ref = build_tau_table(k)
        bad = [n for n in range(1, k + 1) if ref.values[n] != tau.values[n]]
        if bad:
            raise CacheValidationError(
                f"TAU1 validation failed for {path}: entry n={bad[0]} disagrees with recomputation"
            )
    return tau


def load_or_build(n_max: int, cache=None, **kw) -> TauTable:
    """Use the cache at ``cache`` when it holds at least n_max entries."""
    if cache is not None and Path(cache).exists():
        tau = load_tau_cache(cache)
        if tau.n_max >= n_max:
            return TauTable(n_max, tau.values[: n_max + 1])
    tau = build_tau_table(n_max, **kw)
    if cache is not None:
        save_tau_cache(tau, cache)
    return tau
