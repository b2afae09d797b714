"""Quadrature of oscillatory integrals int e[f(x)] dx and numeric checks of
the exponential-sum and exponential-integral estimates used on S(N).

Big-O statements are checked with an explicit constant ``BIG_O_CONSTANT``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, InvalidArgument, PreconditionError

BIG_O_CONSTANT = 10.0
SAMPLES = 1025
EPS = np.finfo(float).eps

# Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15), nonnegative half.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[[1, 3, 5]] = _WG[:3]
GAUSS_W[7] = _WG[3]
GAUSS_W[[9, 11, 13]] = _WG[2::-1]


def e(x):
    """e(x) = exp(2 pi i x)."""
    return np.exp(2j * np.pi * np.asarray(x))


@dataclass(frozen=True)
class PhaseFn:
    """A real phase with its derivatives, all vectorized over numpy arrays."""

    f: Callable
    df: Callable
    d2f: Callable
    d3f: Callable | None = None
    d4f: Callable | None = None
    smoothness: int = 2

    def derivative_mismatch(self, a: float, b: float, points: int = 32) -> float:
        """Worst relative gap between df, d2f and central differences on [a, b]."""
        x = np.linspace(a, b, points)
        h = 1e-5 * np.maximum(1.0, np.abs(x))
        worst = 0.0
        for g, dg in ((self.f, self.df), (self.df, self.d2f)):
            fd = (g(x + h) - g(x - h)) / (2 * h)
            exact = np.asarray(dg(x), dtype=float) * np.ones_like(x)
            scale = max(float(np.max(np.abs(exact))), 1e-300)
            worst = max(worst, float(np.max(np.abs(fd - exact))) / scale)
        return worst

    @classmethod
    def polynomial(cls, coeffs) -> "PhaseFn":
        """f(x) = sum c_k x^k, coefficients lowest degree first."""
        p = np.polynomial.Polynomial(coeffs)
        ds = [p.deriv(k) for k in range(1, 5)]
        return cls(p, ds[0], ds[1], ds[2], ds[3], smoothness=10**9)

    @classmethod
    def sqrt_dual(cls, x: float) -> "PhaseFn":
        """f(t) = (t / 2pi) log(t / (e x)), stationary at t = x."""
        tp = 2 * math.pi
        return cls(
            lambda t: t / tp * (np.log(t / x) - 1.0),
            lambda t: np.log(t / x) / tp,
            lambda t: 1.0 / (tp * t),
            lambda t: -1.0 / (tp * t**2),
            lambda t: 2.0 / (tp * t**3),
            smoothness=10**9,
        )


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    estimated_error: float
    evaluations: int
    panels: int = 0


def _gk_panels(f: PhaseFn, edges: np.ndarray):
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + half[:, None] * NODES[None, :]
    vals = e(f.f(x))
    k = half * (vals @ KRONROD_W)
    g = half * (vals @ GAUSS_W)
    return k, np.abs(k - g)


def _fsum_complex(z) -> complex:
    return complex(math.fsum(np.real(z)), math.fsum(np.imag(z)))


def oscillatory_integral(
    f: PhaseFn,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    width_scale: float = 1.0,
    max_evals: int = 20_000_000,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of int_a^b e[f(x)] dx.

    Panels start no wider than 1/(4 max|f'| + 1) (times ``width_scale``)
    and the worst panels are bisected until the summed |K15 - G7|
    estimate falls below ``tol``.
    """
    if not a < b:
        raise InvalidArgument(f"need a < b, got [{a}, {b}]")
    if f.smoothness < 2:
        raise PreconditionError("phase must have two continuous derivatives")
    probe = np.linspace(a, b, SAMPLES)
    speed = float(np.max(np.abs(f.df(probe) * np.ones_like(probe))))
    width = width_scale / (4 * speed + 1)
    count = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, count + 1)

    floor = 50 * EPS * (b - a)
    evals = 0
    while True:
        k, err = _gk_panels(f, edges)
        evals += 15 * k.size
        total_err = math.fsum(err) + floor
        best = QuadratureResult(_fsum_complex(k), total_err, evals, k.size)
        if total_err <= tol:
            return best
        if evals >= max_evals:
            raise BudgetExceeded(
                f"tolerance {tol:g} not reached after {evals} evaluations "
                f"(estimate {total_err:.3g})",
                best,
            )
        share = tol * (edges[1:] - edges[:-1]) / (b - a)
        split = err > share
        if not split.any():
            split = err >= err.max()
        mids = 0.5 * (edges[:-1] + edges[1:])[split]
        edges = np.sort(np.concatenate([edges, mids]))


# ------------------------------------------------------------------ checks


def _sample(a, b, n=SAMPLES):
    return np.linspace(a, b, n)


def _as_array(v, like):
    return np.asarray(v, dtype=float) * np.ones_like(like)


@dataclass(frozen=True)
class CheckRecord:
    """One verification line: name, lhs, rhs, bound, pass/fail."""

    name: str
    lhs: complex
    rhs: complex
    discrepancy: float
    bound: float
    constant: float = 1.0
    extra: dict | None = None

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.constant * self.bound

    def line(self) -> str:
        def fmt(z):
            z = complex(z)
            return f"{z.real:.10g}{z.imag:+.10g}j" if z.imag else f"{z.real:.10g}"

        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}, lhs={fmt(self.lhs)}, rhs={fmt(self.rhs)}, "
            f"diff={self.discrepancy:.6g}, bound={self.constant * self.bound:.6g}, {status}"
        )


def truncated_poisson_check(f: PhaseFn, a: float, b: float, theta: float) -> CheckRecord:
    """Compare sum_{a<n<b} e[f(n)] with int_a^b e[f(x)] dx against 1/theta."""
    if not 0 < theta < 1:
        raise InvalidArgument(f"theta must lie in (0, 1), got {theta}")
    x = _sample(a, b)
    d1 = _as_array(f.df(x), x)
    d2 = _as_array(f.d2f(x), x)
    bad = np.flatnonzero(np.abs(d1) > 1 - theta + 1e-12)
    if bad.size:
        raise PreconditionError(f"|f'(x)| > 1 - theta at x={x[bad[0]]:.6g}")
    bad = np.flatnonzero(d2 == 0)
    if bad.size:
        raise PreconditionError(f"f''(x) = 0 at x={x[bad[0]]:.6g}")
    flips = np.flatnonzero(np.sign(d2[1:]) != np.sign(d2[:-1]))
    if flips.size:
        raise PreconditionError(f"f'' changes sign near x={x[flips[0]]:.6g}")

    n = np.arange(math.floor(a) + 1, math.ceil(b), dtype=float)
    lhs = _fsum_complex(e(f.f(n))) if n.size else 0j
    rhs = oscillatory_integral(f, a, b, 1e-10).value
    return CheckRecord(
        "truncated_poisson", lhs, rhs, abs(lhs - rhs), 1 / theta, BIG_O_CONSTANT
    )


def first_derivative_bound_check(f: PhaseFn, a: float, b: float) -> CheckRecord:
    """|int e[f]| <= (1/pi)(1/|f'(a)| + 1/|f'(b)|) for monotone nonvanishing f'.

    ``extra['printed_bound']`` carries (1/pi)(|f'(a)| + |f'(b)|) and whether
    it happened to hold; that form is reported, not asserted.
    """
    x = _sample(a, b)
    d1 = _as_array(f.df(x), x)
    d2 = _as_array(f.d2f(x), x)
    bad = np.flatnonzero(d1 == 0)
    if bad.size or np.any(np.sign(d1[1:]) != np.sign(d1[:-1])):
        where = x[bad[0]] if bad.size else x[np.flatnonzero(np.sign(d1[1:]) != np.sign(d1[:-1]))[0]]
        raise PreconditionError(f"f' vanishes near x={where:.6g}")
    nz = d2[d2 != 0]
    if nz.size and np.any(np.sign(nz) != np.sign(nz[0])):
        i = np.flatnonzero(np.sign(d2) == -np.sign(nz[0]))[0]
        raise PreconditionError(f"f'' changes sign near x={x[i]:.6g}")
    fa, fb = abs(float(f.df(a))), abs(float(f.df(b)))
    val = oscillatory_integral(f, a, b, 1e-11).value
    bound = (1 / fa + 1 / fb) / math.pi
    printed = (fa + fb) / math.pi
    return CheckRecord(
        "first_derivative_bound",
        abs(val),
        bound,
        abs(val),
        bound,
        extra={"printed_bound": printed, "printed_holds": abs(val) <= printed},
    )


def _max_abs(g, x):
    return float(np.max(np.abs(_as_array(g(x), x))))


def stationary_phase_eval(f: PhaseFn, a: float, b: float, c: float) -> CheckRecord:
    """Quadrature versus e[f(c) + 1/8] f''(c)^(-1/2), with the size budget
    (1/L)(1/(b-c) + 1/(c-a) + 1/X) where f'' >= L, |f'''| <= L/X, |f''''| <= L/X^2.
    """
    if not a < c < b:
        raise PreconditionError(f"c={c} not inside ({a}, {b})")
    x = _sample(a, b)
    d2 = _as_array(f.d2f(x), x)
    lam = float(d2.min())
    if lam <= 0:
        raise PreconditionError(f"f'' not positive on [{a}, {b}] (min {lam:.3g})")
    slope_scale = max(_max_abs(f.df, x), 1.0)
    if abs(float(f.df(c))) > 1e-9 * slope_scale:
        raise PreconditionError(f"c={c} is not a critical point (f'(c)={float(f.df(c)):.3g})")

    if f.d3f is not None:
        m3 = _max_abs(f.d3f, x)
    else:
        h = 1e-4 * max(1.0, abs(b - a))
        m3 = float(np.max(np.abs((f.d2f(x + h) - f.d2f(x - h)) / (2 * h))))
    if f.d4f is not None:
        m4 = _max_abs(f.d4f, x)
    else:
        h = 1e-3 * max(1.0, abs(b - a))
        m4 = float(np.max(np.abs((f.d2f(x + h) - 2 * f.d2f(x) + f.d2f(x - h)) / h**2)))
    inv_x = max(m3 / lam, math.sqrt(m4 / lam))

    integral = oscillatory_integral(f, a, b, 1e-10).value
    main = complex(e(float(f.f(c)) + 0.125)) / math.sqrt(float(f.d2f(c)))
    budget = (1 / (b - c) + 1 / (c - a) + inv_x) / lam
    return CheckRecord(
        "stationary_phase",
        integral,
        main,
        abs(integral - main),
        budget,
        BIG_O_CONSTANT,
        extra={"lambda": lam, "inv_X": inv_x},
    )


def sqrt_transform_check(n: int, N: int, alpha: float) -> CheckRecord:
    """e(-alpha sqrt n) against e(-1/8) (2 pi sqrt alpha)^-1 n^(-1/4) int_T^4T e[f(t)] dt,
    T = pi alpha sqrt N, x = 2 pi alpha sqrt n; residual budget N^(-1/4).
    """
    if not N < n <= 2 * N:
        raise PreconditionError(f"n={n} outside the block ({N}, {2 * N}]")
    if alpha <= 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha}")
    T = math.pi * alpha * math.sqrt(N)
    x = 2 * math.pi * alpha * math.sqrt(n)
    integral = oscillatory_integral(PhaseFn.sqrt_dual(x), T, 4 * T, 1e-8).value
    lhs = complex(e(-alpha * math.sqrt(n)))
    rhs = complex(e(-0.125)) / (2 * math.pi * math.sqrt(alpha)) * n**-0.25 * integral
    residual = abs(lhs - rhs)
    return CheckRecord(
        "sqrt_transform",
        lhs,
        rhs,
        residual,
        N**-0.25,
        BIG_O_CONSTANT,
        extra={"scaled_residual": residual * N**0.25, "integral": integral},
    )


def large_sieve_check(lambdas, coeffs, T: float) -> CheckRecord:
    """int_0^T |sum a_n e(lambda_n t)|^2 dt versus T sum |a_n|^2, defect within
    sum |a_n|^2 / delta where delta is the minimal frequency gap.

    Cross terms are integrated in closed form.
    """
    lam = np.asarray(lambdas, dtype=float)
    a = np.asarray(coeffs, dtype=complex)
    if lam.shape != a.shape or lam.ndim != 1 or lam.size == 0:
        raise InvalidArgument("frequencies and coefficients must be equal-length 1-d")
    if T <= 0:
        raise InvalidArgument(f"T must be positive, got {T}")
    srt = np.sort(lam)
    gaps = np.diff(srt)
    if gaps.size and gaps.min() <= 0:
        raise InvalidArgument("frequencies must be distinct")
    delta = float(gaps.min()) if gaps.size else math.inf

    w = lam[:, None] - lam[None, :]
    kernel = np.full(w.shape, complex(T))
    off = w != 0
    kernel[off] = (e(w[off] * T) - 1) / (2j * np.pi * w[off])
    cross = (a[:, None] * np.conj(a)[None, :]) * kernel
    integral = math.fsum(cross.real.ravel())
    mass = math.fsum((a * np.conj(a)).real)
    main = T * mass
    bound = mass / delta if math.isfinite(delta) else 0.0
    defect = integral - main
    return CheckRecord(
        "large_sieve",
        integral,
        main,
        abs(defect),
        bound,
        extra={"delta": delta, "defect": defect, "theta": defect / bound if bound else 0.0},
    )
