"""Torus knots through the Gaussian-integral representation.

For coprime ``m, p`` set ``A = sqrt(mp)``, ``alpha = sqrt(m/p)``,
``beta = sqrt(p/m)`` and

    F(x) = sinh(s A x) sinh(alpha x) sinh(beta x) / (s sinh(A x))
    J(h) = (1/sqrt(pi)) e^{-(h/4)(m/p + p/m)} / sinh(h/2) * int e^{-x^2} F(sqrt(h) x) dx

Only even functions of ``x`` appear, so everything is expanded in ``Y = x^2``
and the square roots never show up: ``A^2 = mp``, ``alpha beta = 1``,
``(alpha +- beta)^2 = m/p + p/m +- 2``.

The prefactor is ``1/sqrt(pi)``: with ``1/(2 sqrt(pi))`` the trivial colour
``s = 1`` evaluates to ``1/2`` instead of 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .exact import HSeries, MPoly, TruncationError, exp_h, series_div, two_sinh_h
from .knots import S, check_torus


class SingularPrefactorError(ArithmeticError):
    pass


class ContourPoleError(ArithmeticError):
    pass


class ToleranceError(RuntimeError):
    pass


def native_framing(m: int, p: int) -> int:
    """Framing (in units where one unit multiplies by ``exp((s^2-1)h/8)``)
    carried by the raw Gaussian-integral series; its ``h^1`` coefficient is
    ``(s^2-1) m p / 4``."""
    return 2 * m * p


@dataclass(frozen=True)
class TorusParams:
    m: int
    p: int

    def __post_init__(self):
        check_torus(self.m, self.p)

    @property
    def mp(self) -> int:
        return self.m * self.p

    @property
    def sigma(self) -> Fraction:
        return Fraction(self.m, self.p) + Fraction(self.p, self.m)


def _sinh_ratio_series(s2: MPoly, a2: Fraction, N: int) -> list[MPoly]:
    """``sinh(s a x)/(s sinh(a x))`` in powers of ``Y = x^2`` (``s2 = s^2``, ``a2 = a^2``)."""
    num = [MPoly.const(s2.vars, 1)]
    for j in range(1, N + 1):
        num.append(num[-1] * s2 * (a2 / ((2 * j) * (2 * j + 1))))
    den = [a2 ** j / math.factorial(2 * j + 1) for j in range(N + 1)]
    out: list[MPoly] = []
    for k in range(N + 1):
        acc = num[k]
        for j in range(1, k + 1):
            acc = acc - out[k - j] * den[j]
        out.append(acc)
    return out


def _sinh_pair_series(tp: TorusParams, N: int) -> list[Fraction]:
    """``sinh(alpha x) sinh(beta x)`` in powers of ``Y``."""
    plus, minus = tp.sigma + 2, tp.sigma - 2
    return [Fraction(0)] + [(plus ** j - minus ** j) / (2 * math.factorial(2 * j))
                            for j in range(1, N + 1)]


def f_coeffs(tp: TorusParams | tuple, N: int, s=None) -> list[MPoly]:
    """``Q[0..N]`` with ``F(sqrt(h) x) = sum Q[k] h^k x^{2k}``; ``Q[0] = 0``, ``Q[1] = 1``.

    ``s`` may be fixed to a rational to keep the coefficients constant.
    """
    if not isinstance(tp, TorusParams):
        tp = TorusParams(*tp)
    if N < 1:
        raise TruncationError("need N >= 1")
    sv = MPoly.var(S, "s") if s is None else MPoly.const(S, Fraction(s))
    ratio = _sinh_ratio_series(sv * sv, Fraction(tp.mp), N)
    pair = _sinh_pair_series(tp, N)
    Q = []
    for k in range(N + 1):
        acc = MPoly(S)
        for j in range(1, k + 1):
            acc = acc + ratio[k - j] * pair[j]
        Q.append(acc)
    return Q


def gamma_half_ratio(k: int) -> Fraction:
    """``Gamma(k+1/2)/sqrt(pi) = (2k)! / (4^k k!)``."""
    return Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k))


def prefactor_series(tp: TorusParams, N: int) -> HSeries:
    """``h e^{-sigma h/4} / sinh(h/2)`` to order ``N`` (rational coefficients)."""
    e = exp_h(MPoly.const(S, -tp.sigma / 4), N + 1)
    sh = two_sinh_h(MPoly.const(S, 1), N + 1, 1) * Fraction(1, 2)
    return series_div(e.shift(1).truncate(N + 1), sh)


def jones_torus(m: int, p: int, N: int, s=None) -> HSeries:
    """Exact ``J^z/(2z+1)`` of ``torus(m,p)`` at its native framing, order ``N``."""
    tp = TorusParams(m, p)
    Q = f_coeffs(tp, N + 1, s)
    body = HSeries(S, [Q[k] * gamma_half_ratio(k) for k in range(N + 2)], N + 1)
    e = exp_h(MPoly.const(S, -tp.sigma / 4), N + 1)
    sh = two_sinh_h(MPoly.const(S, 1), N + 1, 1) * Fraction(1, 2)
    return series_div(e * body, sh)


# -- numerics -----------------------------------------------------------------

def kashaev_closed(tp: TorusParams | tuple, n: int, h, dps: int = 30) -> complex:
    """Closed form for integer colour ``n = 2z+1 != 0`` (finite sum of Gaussians)."""
    if not isinstance(tp, TorusParams):
        tp = TorusParams(*tp)
    if n == 0:
        raise ValueError("n must be a nonzero integer")
    n = abs(int(n))
    with mpmath.workdps(dps):
        h = mpmath.mpmathify(h)
        sh = mpmath.sinh(h / 2)
        if h == 0 or abs(sh) < mpmath.mpf(10) ** (-dps + 5):
            raise SingularPrefactorError(f"sinh(h/2) vanishes at h={h}")
        total = mpmath.mpf(0)
        for j in range(n):
            k = n - 1 - 2 * j
            for s1 in (1, -1):
                for s2 in (1, -1):
                    e = k * k * tp.mp + 2 * s1 * s2 + 2 * k * (s1 * tp.m + s2 * tp.p)
                    total += s1 * s2 * mpmath.exp(e * h / 4)
        val = total / (4 * n) / sh
        return complex(val)


def F_mp(tp: TorusParams, s0, y):
    """``F(y)`` at a single point with mpmath (removable points handled)."""
    A = mpmath.sqrt(tp.mp)
    al = mpmath.sqrt(mpmath.mpf(tp.m) / tp.p)
    be = 1 / al
    y = mpmath.mpmathify(y)
    if y == 0:
        return mpmath.mpf(0)
    pair = mpmath.sinh(al * y) * mpmath.sinh(be * y)
    s0 = mpmath.mpmathify(s0)
    if s0 == 0:
        return A * y * pair / mpmath.sinh(A * y)
    if s0 == int(s0.real) and s0.imag == 0:
        n = int(s0.real)
        ratio = sum(mpmath.exp((abs(n) - 1 - 2 * j) * A * y) for j in range(abs(n))) / abs(n)
        return ratio * pair
    return mpmath.sinh(s0 * A * y) * pair / (s0 * mpmath.sinh(A * y))


def kashaev_quadrature(tp: TorusParams | tuple, s0, h, dps: int = 25, tol: float = 1e-12):
    """``J`` by direct quadrature of the Gaussian integral (``Re h > 0``).

    Returns ``(value, error_estimate)``.
    """
    if not isinstance(tp, TorusParams):
        tp = TorusParams(*tp)
    with mpmath.workdps(dps):
        h = mpmath.mpmathify(h)
        if mpmath.re(h) <= 0:
            raise ContourPoleError("real-axis contour needs Re(h) > 0")
        r = mpmath.sqrt(h)
        f = lambda x: mpmath.exp(-x * x) * F_mp(tp, s0, r * x)
        # the integrand is even; |F| <= A e^{C|x|} makes [0, 12 + C|sqrt h|] ample
        C = (abs(mpmath.re(mpmath.mpmathify(s0))) + 2) * math.sqrt(tp.mp) * abs(r)
        top = 12 + float(C)
        val, err = mpmath.quad(f, mpmath.linspace(0, top, 9), error=True, maxdegree=10)
        tail = mpmath.exp(-top * top + C * top)
        pref = mpmath.exp(-h * tp.sigma / 4) / mpmath.sinh(h / 2) / mpmath.sqrt(mpmath.pi)
        value = 2 * val * pref
        e = float(2 * (err + tail) * abs(pref))
        if e > tol * max(1.0, float(abs(value))):
            raise ToleranceError(f"quadrature error {e:.3g} above tolerance")
        return complex(value), e


def F1_np(tp: TorusParams, s0: complex, y: np.ndarray, Qnum: np.ndarray | None = None) -> np.ndarray:
    """``F'(y)/y`` vectorised in complex double precision.

    Small ``|y|`` uses the Taylor series ``sum 2k Q[k] y^{2k-2}`` (``Qnum``).
    """
    y = np.asarray(y, dtype=complex)
    A = math.sqrt(tp.mp)
    al = math.sqrt(tp.m / tp.p)
    be = 1 / al
    out = np.empty_like(y)
    small = np.abs(y) < 2e-3
    big = ~small
    yb = y[big]
    T = np.sinh(al * yb) * np.sinh(be * yb)
    dT = al * np.cosh(al * yb) * np.sinh(be * yb) + be * np.sinh(al * yb) * np.cosh(be * yb)
    s0 = complex(s0)
    if s0.imag == 0 and s0.real == round(s0.real) and s0.real != 0:
        n = abs(int(round(s0.real)))
        ks = np.arange(n - 1, -n, -2)
        E = np.exp(np.multiply.outer(yb, ks * A))
        Sv = E.sum(axis=-1) / n
        dS = (E * (ks * A)).sum(axis=-1) / n
    elif s0 == 0:
        sh, ch = np.sinh(A * yb), np.cosh(A * yb)
        Sv = A * yb / sh
        dS = A / sh - A * A * yb * ch / sh ** 2
    else:
        sh, ch = np.sinh(A * yb), np.cosh(A * yb)
        Sv = np.sinh(s0 * A * yb) / (s0 * sh)
        dS = A * (np.cosh(s0 * A * yb) - Sv * ch) / sh
    out[big] = (dS * T + Sv * dT) / yb
    if small.any():
        if Qnum is None:
            Qnum = q_numeric(tp, s0, 6)
        ys = y[small] ** 2
        acc = np.zeros_like(ys)
        for k in range(len(Qnum) - 1, 0, -1):
            acc = acc * ys + 2 * k * Qnum[k]
        out[small] = acc
    return out


_Q_CACHE: dict = {}


def q_numeric(tp: TorusParams, s0, K: int) -> np.ndarray:
    """``Q[0..K]`` evaluated at a complex colour."""
    key = (tp, K)
    if key not in _Q_CACHE:
        _Q_CACHE[key] = f_coeffs(tp, K)
    Q = _Q_CACHE[key]
    return np.array([complex(q.evaluate({"s": s0})) if not q.is_zero() else 0j for q in Q])
