import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heckesum import oscillatory as osc
from heckesum.errors import BudgetExceeded, InvalidArgument, PreconditionError
from heckesum.verify import random_sieve_instance

from .oracles import simpson_exp_integral

P = osc.PhaseFn.polynomial
E18 = cmath.exp(2j * math.pi / 8)


def test_trivial_integrals():
    assert abs(osc.oscillatory_integral(P([0]), 0, 1).value - 1) < 1e-14
    for k in (1, 2, 7, 30):
        assert abs(osc.oscillatory_integral(P([0, 1]), 0, k).value) < 1e-10


def test_simpson_oracle():
    # frozen from the 10^6-point Simpson oracle
    assert abs(osc.oscillatory_integral(P([0, 0, 0.5]), 0, 10, 1e-8).value
               - (0.3535280612596461 + 0.33763801721661885j)) < 1e-7
    for coeffs, a, b in (([0, 0, 0.5], 1, 4), ([0.2, 3, 0.1], 1, 2), ([0, -2, 0.3, 0.01], -3, 5)):
        f = P(coeffs)
        ref = simpson_exp_integral(f.f, a, b)
        assert abs(osc.oscillatory_integral(f, a, b, 1e-10).value - ref) < 1e-7


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(-2, 2), st.floats(-5, 0), st.floats(0.5, 10))
def test_refinement_within_estimate(c1, c2, a, w):
    f = P([0, c1, c2])
    coarse = osc.oscillatory_integral(f, a, a + w, 1e-9)
    fine = osc.oscillatory_integral(f, a, a + w, 1e-9, width_scale=0.5)
    assert coarse.estimated_error >= 0
    assert abs(coarse.value - fine.value) <= coarse.estimated_error + fine.estimated_error


def test_budget_exceeded_carries_estimate():
    with pytest.raises(BudgetExceeded) as info:
        osc.oscillatory_integral(P([0, 0, 50]), -50, 50, 1e-14, max_evals=2000)
    best = info.value.best
    assert isinstance(best.value, complex) and best.estimated_error > 1e-14 and best.evaluations >= 2000


def test_derivative_mismatch():
    for f, (a, b) in ((P([1, -2, 0.5, 0.1]), (-3, 3)), (osc.PhaseFn.sqrt_dual(9.0), (3, 30))):
        assert f.derivative_mismatch(a, b) <= 1e-6
    wrong = osc.PhaseFn(np.sin, np.cos, np.cos)
    assert wrong.derivative_mismatch(0, 3) > 1e-2


def test_poisson_examples():
    empty = osc.truncated_poisson_check(P([0, 0, 1e-6]), 0.2, 0.8, 0.9)
    assert empty.lhs == 0 and abs(empty.rhs - 0.6) < 1e-5 and empty.discrepancy <= 1

    with pytest.raises(PreconditionError, match="x="):
        osc.truncated_poisson_check(P([0, 0.4, 0.001]), 0, 100, 0.5)
    rec = osc.truncated_poisson_check(P([0, 0.4, 0.001]), 0, 100, 0.4)
    assert rec.passed and rec.discrepancy <= 20

    fast = osc.truncated_poisson_check(P([0, 0.9, -1e-4]), 0, 100, 0.1)
    slow = osc.truncated_poisson_check(P([0, 0.5, -1e-4]), 0, 100, 0.5)
    assert fast.passed and slow.passed
    assert fast.discrepancy <= 10 * 5 * slow.discrepancy


def test_poisson_preconditions():
    with pytest.raises(PreconditionError):
        osc.truncated_poisson_check(P([0, 0.1]), 0, 10, 0.5)  # f'' == 0
    with pytest.raises(PreconditionError):
        osc.truncated_poisson_check(P([0, 0, 0, 0.001]), -5, 5, 0.5)  # f'' flips
    with pytest.raises(InvalidArgument):
        osc.truncated_poisson_check(P([0, 0, 0.001]), 0, 5, 1.5)


def test_first_derivative_examples():
    lin = osc.first_derivative_bound_check(P([0, 10]), 0, 1)
    assert lin.lhs < 1e-12 and lin.bound == pytest.approx(0.2 / math.pi) and lin.passed

    quad = osc.first_derivative_bound_check(P([0, 0, 0.5]), 1, 4)
    assert quad.lhs == pytest.approx(abs(-0.020824644883075234 - 0.19107816893806914j), abs=1e-7)
    assert quad.bound == pytest.approx(1.25 / math.pi) and quad.passed

    mixed = osc.first_derivative_bound_check(P([0, 3, 0.1]), 1, 2)
    assert mixed.lhs == pytest.approx(0.07813480430996864, abs=1e-7) and mixed.passed


def test_printed_form_fails_for_fast_linear_phase():
    # reciprocal form holds; the sum-of-derivatives form degrades as M shrinks
    rec = osc.first_derivative_bound_check(P([0, 0.3]), 0, 1.7)
    assert rec.passed
    assert rec.extra["printed_holds"] is False


def test_first_derivative_preconditions():
    with pytest.raises(PreconditionError):
        osc.first_derivative_bound_check(P([0, 0, 1]), -1, 1)


def test_fresnel_convergence():
    errs = []
    for A in (5, 10, 20):
        rec = osc.stationary_phase_eval(P([0, 0, 0.5]), -A, A, 0.0)
        assert rec.passed and abs(rec.rhs - E18) < 1e-15
        errs.append(rec.discrepancy)
    assert errs[2] < 0.05 and errs[0] > errs[1] > errs[2]


def test_translation_invariance():
    a = osc.stationary_phase_eval(P([0.5, -1, 0.5]), 0, 2, 1.0)
    b = osc.stationary_phase_eval(P([0, 0, 0.5]), -1, 1, 0.0)
    assert a.rhs == pytest.approx(b.rhs) and abs(a.lhs - b.lhs) < 1e-9


def test_sqrt_dual_main_term():
    x = 2 * math.pi * math.sqrt(2)
    T = math.pi * math.sqrt(2)
    rec = osc.stationary_phase_eval(osc.PhaseFn.sqrt_dual(x), T, 4 * T, x)
    want = cmath.exp(2j * math.pi * (-x / (2 * math.pi) + 0.125)) * math.sqrt(2 * math.pi * x)
    assert abs(rec.rhs - want) < 1e-12 and rec.passed


def test_stationary_preconditions():
    with pytest.raises(PreconditionError, match="critical"):
        osc.stationary_phase_eval(P([0, 0, 0.5]), -2, 2, 0.5)
    with pytest.raises(PreconditionError):
        osc.stationary_phase_eval(P([0, 0, 0.5]), -2, 2, 3.0)


def test_sqrt_transform():
    recs = {N: osc.sqrt_transform_check(math.ceil(1.5 * N), N, 1.0) for N in (100, 1000, 10**4)}
    assert recs[100].discrepancy <= 10 * 100**-0.25
    assert recs[10**4].discrepancy <= 1
    assert recs[100].discrepancy > recs[1000].discrepancy > recs[10**4].discrepancy
    assert all(r.extra["scaled_residual"] <= 10 for r in recs.values())
    with pytest.raises(PreconditionError):
        osc.sqrt_transform_check(100, 100, 1.0)


def test_large_sieve_examples():
    one = osc.large_sieve_check([0.3], [2 - 1j], 3.0)
    assert one.lhs == pytest.approx(15.0) and one.discrepancy == pytest.approx(0, abs=1e-12)
    two = osc.large_sieve_check([0, 0.5], [1, 1], 2.0)
    assert two.lhs == pytest.approx(4.0, abs=1e-12) and two.discrepancy <= 2
    with pytest.raises(InvalidArgument):
        osc.large_sieve_check([0, 0], [1, 1], 1.0)


def test_large_sieve_closed_form_vs_quadrature():
    lam = np.array([0.0, 0.37, 1.1])
    a = np.array([1, 2j, -0.5 + 0.3j])
    t = np.linspace(0, 3, 200001)
    vals = np.abs(np.exp(2j * np.pi * np.outer(t, lam)) @ a) ** 2
    h = t[1] - t[0]
    ref = h / 3 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum())
    assert osc.large_sieve_check(lam, a, 3.0).lhs == pytest.approx(ref, rel=1e-9)


def test_large_sieve_random_instances():
    rng = np.random.default_rng(0)
    for i in range(100):
        lam, a = random_sieve_instance(rng)
        rec = osc.large_sieve_check(lam, a, (1.0, 10.0)[i % 2])
        assert rec.passed and rec.extra["delta"] >= 0.1
