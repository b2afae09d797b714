import math

import numpy as np
import pytest

from heckesum.errors import OutOfRange, PreconditionError
from heckesum.twisted import block_sum
from heckesum.vaughan import (
    VaughanParams,
    bilinear_scale,
    block_pieces,
    component_rows,
    component_sums,
    lambda_pieces,
    vaughan_classic,
)

from .oracles import brute_vaughan_classic, brute_vaughan_pieces


def test_params():
    p = VaughanParams.for_block(100)
    assert p.y == 100 ** (1 / 3) and p.z == math.sqrt(200) and p.y < p.z
    assert VaughanParams.for_block(8).y == 2.0
    assert VaughanParams.for_block(1000).y == 10.0


def test_classic_examples(small):
    sv = small[2]
    assert vaughan_classic(101, 5.0, sv) == pytest.approx(math.log(101), abs=1e-12)
    assert vaughan_classic(2**10, 10.0, sv) == pytest.approx(math.log(2), abs=1e-12)
    assert brute_vaughan_classic(2**10, 10.0) == pytest.approx(math.log(2), abs=1e-12)
    assert vaughan_classic(9973 * 2, 12.0, sv) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(PreconditionError):
        vaughan_classic(10, 10.0, sv)


def test_prime_pieces(small):
    sv = small[2]
    params = VaughanParams.for_block(100)
    for n in (101, 149, 199):
        v = lambda_pieces(n, params, sv).values
        assert v[0] == pytest.approx(math.log(n), abs=1e-12)
        assert v[1:] == pytest.approx((0, 0, 0, 0), abs=1e-12)


def test_twice_prime_cancellation(small):
    sv = small[2]
    params = VaughanParams.for_block(10**4)
    v = lambda_pieces(2 * 5003, params, sv)
    ref = brute_vaughan_pieces(2 * 5003, params.y, params.z)
    assert v.values == pytest.approx(tuple(ref), abs=1e-12)
    assert v.total() == pytest.approx(0.0, abs=1e-12)
    assert v[0] == pytest.approx(math.log(2)) and v[1] == pytest.approx(-math.log(2))


@pytest.mark.parametrize("N", [8, 27, 100])
def test_pieces_match_brute_force_exhaustively(small, N):
    sv = small[2]
    params = VaughanParams.for_block(N)
    got = block_pieces(params, sv)
    for n in range(N + 1, 2 * N + 1):
        assert got[n - N - 1] == pytest.approx(brute_vaughan_pieces(n, params.y, params.z), abs=1e-12)


def test_pieces_match_brute_force_sampled(small):
    sv = small[2]
    params = VaughanParams.for_block(10**4)
    rng = np.random.default_rng(7)
    ns = [10**4 + 1, 2 * 10**4, 16384, 15552, 10007] + rng.integers(10**4 + 1, 2 * 10**4 + 1, 15).tolist()
    for n in ns:
        got = lambda_pieces(int(n), params, sv).values
        assert got == pytest.approx(tuple(brute_vaughan_pieces(int(n), params.y, params.z)), abs=1e-9)


@pytest.mark.parametrize("N", [8, 100, 10**4])
def test_identity_exhaustive(small, N):
    sv = small[2]
    pieces = block_pieces(VaughanParams.for_block(N), sv)
    assert np.max(np.abs(pieces.sum(axis=1) - sv.mangoldt[N + 1 : 2 * N + 1])) <= 1e-9


def test_classic_equals_refined(small):
    sv = small[2]
    params = VaughanParams.for_block(1000)
    for n in range(1001, 2001, 7):
        assert vaughan_classic(n, params.y, sv) == pytest.approx(lambda_pieces(n, params, sv).total(), abs=1e-9)


def test_component_sums_vs_naive(small):
    _, lam, sv = small
    N = 10**4
    params = VaughanParams.for_block(N)
    sums = component_sums(params, 1.0, lam, sv)
    pieces = block_pieces(params, sv)
    for i in range(5):
        s = 0j
        for n in range(N + 1, 2 * N + 1):
            w = pieces[n - N - 1, i] * lam.values[n]
            if w:
                t = 2 * math.pi * math.sqrt(n)
                s += w * complex(math.cos(t), math.sin(t))
        assert abs(abs(sums[i]) - abs(s)) < 1e-8
    direct = block_sum(N, 2 * N, 1.0, lam, sv)
    assert abs(sum(sums) - direct) < 1e-6
    assert abs(sum(sums)) <= sum(abs(s) for s in sums)
    ratios = [abs(s) / bilinear_scale(N) for s in sums] + [abs(s) / bilinear_scale(N, 21) for s in sums]
    assert all(math.isfinite(r) for r in ratios)


def test_component_sums_small_block(small):
    _, lam, sv = small
    params = VaughanParams.for_block(8)
    assert abs(sum(component_sums(params, 1.0, lam, sv)) - block_sum(8, 16, 1.0, lam, sv)) < 1e-12


def test_rows():
    rows = component_rows(VaughanParams.for_block(64), 1.0, [1j, 2, 0, 0, 3 + 4j])
    assert [r["i"] for r in rows] == [1, 2, 3, 4, 5]
    assert rows[4]["abs"] == 5 and rows[4]["abs_over_N56"] == 5 / 64 ** (5 / 6)


def test_errors(small):
    _, lam, sv = small
    params = VaughanParams.for_block(100)
    for n in (100, 201):
        with pytest.raises(PreconditionError):
            lambda_pieces(n, params, sv)
    with pytest.raises(PreconditionError):
        lambda_pieces(6, VaughanParams.for_block(4), sv)
    with pytest.raises(OutOfRange):
        component_sums(VaughanParams.for_block(20000), 1.0, lam, sv)
