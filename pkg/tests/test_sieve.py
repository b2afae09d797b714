import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heckesum.errors import InvalidArgument, OutOfRange
from heckesum.sieve import build_sieve, divisor_power_sum

from .oracles import divisor_count, mangoldt, mobius, trial_factor

LIM = 10**4


@pytest.fixture(scope="module")
def sv():
    return build_sieve(3 * 10**6)  # spans several 2^20 segments


def test_examples(sv):
    assert sv.mangoldt[1] == 0 and sv.mobius[1] == 1
    assert sv.mangoldt[8] == math.log(2) and sv.mobius[8] == 0
    assert sv.mangoldt[10] == 0 and sv.mobius[10] == 1


def test_against_trial_division(sv):
    for n in range(1, LIM + 1):
        assert sv.mangoldt[n] == mangoldt(n)
        assert sv.mobius[n] == mobius(n)
        f = trial_factor(n)
        assert bool(sv.is_prime[n]) == (f == {n: 1})
        if n > 1:
            assert sv.smallest_factor[n] == min(f)


@given(st.integers(2, 3 * 10**6))
def test_factor_and_tables_across_segments(sv, n):
    f = trial_factor(n)
    assert sv.factor(n) == sorted(f.items())
    assert sv.mobius[n] == mobius(n)
    assert sv.mangoldt[n] == mangoldt(n)


def test_mobius_divisor_sum(sv):
    acc = np.zeros(LIM + 1, dtype=np.int64)
    for d in range(1, LIM + 1):
        acc[d::d] += sv.mobius[d]
    assert acc[1] == 1 and not acc[2:].any()


def test_squarefree_iff_nonzero_mobius(sv):
    n = np.arange(1, LIM + 1)
    square_free = np.array([all(e == 1 for e in trial_factor(int(k)).values()) for k in n])
    assert np.array_equal(sv.mobius[1 : LIM + 1] != 0, square_free)


def test_chebyshev_scale(sv):
    assert 0.9 <= math.fsum(sv.mangoldt[1 : 10**6 + 1]) / 10**6 <= 1.1


def test_divisors_and_counts(sv):
    assert sv.divisors(12) == [1, 2, 3, 4, 6, 12]
    d = sv.divisor_counts(500)
    assert d[0] == 0
    assert d[1:].tolist() == [divisor_count(n) for n in range(1, 501)]


def test_divisor_power_sum_examples(sv):
    assert divisor_power_sum(2, 1, 4, sv)[0] == 8
    assert divisor_power_sum(2, 2, 10, sv)[0] == 83
    for k, l in ((2, 1), (3, 2), (5, 3)):
        assert divisor_power_sum(k, l, 1, sv)[0] == 1


def test_divisor_power_sum_higher_k_matches_brute(sv):
    def tau3(n):
        return sum(divisor_count(d) for d in range(1, n + 1) if n % d == 0)

    assert divisor_power_sum(3, 2, 60, sv)[0] == sum(tau3(n) ** 2 for n in range(1, 61))


@pytest.mark.parametrize("k,l", [(2, 1), (2, 2), (3, 1)])
def test_divisor_power_ratio_bounded(sv, k, l):
    lo = divisor_power_sum(k, l, 2**10, sv)[1]
    hi = divisor_power_sum(k, l, 2**20, sv)[1]
    assert hi <= 2 * lo


def test_errors(sv):
    for bad in (0, -1, 10**8 + 1):
        with pytest.raises(InvalidArgument):
            build_sieve(bad)
    with pytest.raises(OutOfRange):
        divisor_power_sum(2, 1, 3 * 10**6 + 1, sv)
    with pytest.raises(InvalidArgument):
        divisor_power_sum(1, 1, 5, sv)
