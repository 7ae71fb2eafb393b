"""Borel transforms, Gevrey diagnostics and Laplace resummation.

Conventions.  A series ``J(h) = sum a_n h^n`` is resummed through
``h J = sum a_n h^{n+1}`` whose Borel transform is ``beta(xi) = sum a_n xi^n / n!``
(no delta term), and

    S_theta(J)(h) = (1/h) int_0^{infty e^{i theta}} e^{-xi/h} beta(xi) d xi.

For the torus knot ``(m,p)`` write ``h J = U(h) V(h)`` with

    U(h) = h e^{-sigma h/4} / (sqrt(pi) sinh(h/2)) = sum u_n h^n,   u_0 = 2/sqrt(pi)
    V(h) = sum_k Gamma(k+1/2) Q[k] h^k

Then ``beta = u_0 I + H * I`` where ``H(xi) = sum_{n>=1} u_n xi^{n-1}/(n-1)!``
is entire of exponential type ``1/(2 pi)``, ``*`` is the convolution
``(f*g)(x) = int_0^x f(x-t) g(t) dt`` and

    I(x) = sum_k Gamma(k+1/2) Q[k] x^{k-1}/(k-1)!
         = (1/sqrt(pi)) int_0^{pi/2} F1(sqrt(x) sin phi) sin^2 phi d phi,   F1(y) = F'(y)/y.

``I`` is singular on ``(-inf, -pi^2/(mp)]`` unless ``s`` is a nonzero integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .exact import HSeries
from .torus import F1_np, TorusParams, jones_torus, prefactor_series, q_numeric


class BranchCutError(ArithmeticError):
    pass


class DirectionError(ValueError):
    pass


class UndefinedFitError(ValueError):
    pass


class DivergentTaylorError(ArithmeticError):
    pass


class PrecisionBudgetError(ArithmeticError):
    pass


def _tp(tp) -> TorusParams:
    return tp if isinstance(tp, TorusParams) else TorusParams(*tp)


# -- formal transform and Gevrey diagnostics --------------------------------

@dataclass
class BorelCoefficients:
    b: list
    order: int

    def to_json(self) -> dict:
        return {"order": self.order, "b": [str(x) for x in self.b]}


def _scalars(a) -> list:
    if isinstance(a, HSeries):
        return a.scalars()
    return list(a)


def formal_borel(a) -> BorelCoefficients:
    """``b_n = a_n / n!``; exact for rational input."""
    vals = _scalars(a)
    out = []
    fact = 1
    for n, x in enumerate(vals):
        if n:
            fact *= n
        out.append(Fraction(x) / fact if isinstance(x, (int, Fraction)) else x / fact)
    return BorelCoefficients(out, len(vals) - 1)


def laplace_termwise(b: BorelCoefficients) -> list:
    """Inverse of ``formal_borel`` (``xi^n -> n! h^{n+1}``, then divide by h)."""
    return [x * math.factorial(n) for n, x in enumerate(b.b)]


@dataclass
class GevreyReport:
    C_fit: float
    intercept: float
    radius_root: float
    radius_fit: float
    root_test: list[float]
    residuals: list[float]
    superconvergent: bool

    @property
    def radius(self) -> float:
        return self.radius_fit

    def to_json(self) -> dict:
        return {"C_fit": self.C_fit, "radius_root": self.radius_root,
                "radius_fit": self.radius_fit, "superconvergent": self.superconvergent,
                "root_test": self.root_test, "residuals": self.residuals}


def _log_abs(x) -> float:
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    return float(mpmath.log(abs(mpmath.mpmathify(x))))


def gevrey_diagnose(a: Sequence, tail_fraction: float = 0.5) -> GevreyReport:
    """Fit ``log|a_n| - log n! = c + n log C`` and estimate the Borel radius.

    ``radius_root`` is the plain root test ``|b_N|^{-1/N}`` at the last nonzero
    coefficient; ``radius_fit`` comes from the model
    ``log|b_n| = c + alpha log n - n log(1/R)`` on the tail, which removes the
    slow ``n^{alpha/n}`` drift of the root test.
    """
    vals = _scalars(a)
    if len(vals) < 10:
        raise UndefinedFitError("need at least 10 coefficients")
    pts = [(n, _log_abs(x) - math.lgamma(n + 1)) for n, x in enumerate(vals) if n >= 1 and x != 0]
    if len(pts) < 3:
        raise UndefinedFitError("series is (almost) identically zero")
    n_arr = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts])
    slope, icpt = np.polyfit(n_arr, y, 1)
    resid = (y - (icpt + slope * n_arr)).tolist()
    root = (np.exp(y / n_arr)).tolist()
    radius_root = 1 / root[-1] if root[-1] > 0 else math.inf
    tail = n_arr >= n_arr[-1] * (1 - tail_fraction)
    X = np.column_stack([np.ones(tail.sum()), np.log(n_arr[tail]), n_arr[tail]])
    coef, *_ = np.linalg.lstsq(X, y[tail], rcond=None)
    radius_fit = math.exp(-coef[2])
    # b_n^{1/n} falling like a power of n means the Borel transform is entire
    lr = np.log(np.array(root)[tail])
    drift = np.polyfit(np.log(n_arr[tail]), lr, 1)[0]
    superconvergent = bool(drift < -0.5)
    if superconvergent:
        radius_fit = radius_root = math.inf
    return GevreyReport(float(math.exp(slope)), float(icpt), float(radius_root), float(radius_fit),
                        [float(r) for r in root], [float(r) for r in resid], superconvergent)


def numeric_coeffs(tp, s0: Fraction, N: int) -> list[Fraction]:
    tp = _tp(tp)
    return jones_torus(tp.m, tp.p, N, s0).scalars()


# -- H, I and their convolution --------------------------------------------

@lru_cache(maxsize=None)
def _u_exact(m: int, p: int, N: int) -> tuple[Fraction, ...]:
    """``sqrt(pi) u_n`` for ``n <= N`` (rational)."""
    return tuple(prefactor_series(TorusParams(m, p), N).scalars())


@lru_cache(maxsize=None)
def _h_float(m: int, p: int, N: int) -> np.ndarray:
    u = _u_exact(m, p, N)
    sp = math.sqrt(math.pi)
    return np.array([float(u[n] / math.factorial(n - 1)) / sp for n in range(1, N + 1)])


def u0() -> float:
    return 2 / math.sqrt(math.pi)


def default_bits(xi) -> int:
    return int(2 * (abs(complex(xi)) * math.log2(math.e) / math.pi + 64))


def H_eval(tp, xi, precision: int | None = None, max_terms: int = 600) -> complex:
    """Taylor summation of ``H`` at working precision scaled to ``|xi|``."""
    tp = _tp(tp)
    bits = precision or default_bits(xi)
    with mpmath.workprec(bits):
        x = mpmath.mpmathify(xi)
        ax = abs(x)
        # terms ~ (|x|/2pi)^n/n!; stop once far past the peak and tiny
        need = int(ax / (2 * math.pi) * math.e) + 60
        if need > max_terms:
            raise PrecisionBudgetError(f"|xi|={float(ax):.3g} needs {need} terms")
        u = _u_exact(tp.m, tp.p, need + 1)
        total = mpmath.mpf(0)
        xp = mpmath.mpf(1)
        fact = mpmath.mpf(1)
        for n in range(1, need + 1):
            if n > 1:
                fact *= n - 1
                xp *= x
            total += mpmath.mpf(u[n].numerator) / u[n].denominator * xp / fact
        return complex(total / mpmath.sqrt(mpmath.pi))


def H_np(tp, xi: np.ndarray, terms: int | None = None) -> np.ndarray:
    """Vectorised double-precision ``H`` (fine for ``|xi| <~ 60``)."""
    tp = _tp(tp)
    xi = np.asarray(xi, dtype=complex)
    amax = float(np.max(np.abs(xi))) if xi.size else 0.0
    n = terms or int(amax / (2 * math.pi) * math.e) + 40
    c = _h_float(tp.m, tp.p, n)
    acc = np.zeros_like(xi)
    for k in range(len(c) - 1, -1, -1):
        acc = acc * xi + c[k]
    return acc


def cut_start(tp) -> float:
    tp = _tp(tp)
    return -math.pi ** 2 / tp.mp


def _is_integer_colour(s0) -> bool:
    s0 = complex(s0)
    return s0.imag == 0 and s0.real != 0 and s0.real == round(s0.real)


@lru_cache(maxsize=None)
def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def I_np(tp, s0, x: np.ndarray, nodes: int = 96, side: int = 0, Qnum=None) -> np.ndarray:
    """``I`` at many points by Gauss-Legendre in ``phi``.

    ``side=+1/-1`` deforms the ``phi`` contour so that the result is the
    limit from above/below the cut; off the cut this changes nothing.
    """
    tp = _tp(tp)
    x = np.asarray(x, dtype=complex)
    t, w = _gl(nodes)
    phi = (t + 1) * (math.pi / 4)
    w = w * (math.pi / 4)
    if side:
        sides = np.full(x.shape, float(side))
    else:
        # near the cut the straight contour passes close to poles of F1;
        # deform towards the half plane x sits in (same value, stable)
        sides = np.where((x.real < 0) & (x.imag != 0), np.sign(x.imag), 0.0)
    delta = 0.25 * sides[..., None]
    phi = phi - 1j * delta * np.sin(2 * phi)
    dphi = 1 - 2j * delta * np.cos(2 * phi.real)
    sphi = np.sin(phi)
    r = np.sqrt(x)
    if Qnum is None:
        Qnum = q_numeric(tp, s0, 8)
    y = r[..., None] * sphi
    vals = F1_np(tp, s0, y.ravel(), Qnum).reshape(y.shape)
    return (vals * (sphi ** 2 * dphi * w)).sum(axis=-1) / math.sqrt(math.pi)


def on_cut(tp, s0, x, eps: float = 1e-12) -> bool:
    x = complex(x)
    return (not _is_integer_colour(s0)) and abs(x.imag) <= eps and x.real <= cut_start(tp) + eps


def I_eval(tp, s0, x, side: int = 0, nodes: int = 96, precision: int = 53) -> complex:
    """``I(x)``; on the cut pass ``side=+1`` or ``-1`` for the one-sided limits."""
    tp = _tp(tp)
    if on_cut(tp, s0, x) and not side:
        raise BranchCutError(f"x={x} lies on the cut (-inf, {cut_start(tp):.6g}]")
    if precision > 53:
        from .torus import F_mp

        with mpmath.workprec(precision):
            r = mpmath.sqrt(mpmath.mpmathify(x))
            eps = mpmath.mpf(2) ** (-precision // 2)

            def f(phi):
                y = r * mpmath.sin(phi)
                if abs(y) < eps:
                    return 2 * mpmath.sin(phi) ** 2
                d = mpmath.diff(lambda v: F_mp(tp, s0, v), y)
                return d / y * mpmath.sin(phi) ** 2

            return complex(mpmath.quad(f, [0, mpmath.pi / 2]) / mpmath.sqrt(mpmath.pi))
    return complex(I_np(tp, s0, np.array([x]), nodes, side)[0])


def I_taylor(tp, s0, x, K: int = 40) -> complex:
    """Partial sum of the defining Taylor series of ``I`` (oracle near 0)."""
    tp = _tp(tp)
    Q = q_numeric(tp, s0, K)
    tot = 0j
    for k in range(1, K + 1):
        tot += math.gamma(k + 0.5) * Q[k] * complex(x) ** (k - 1) / math.factorial(k - 1)
    return tot


def _segment_rule(L: float, panel: float = 0.5, nodes: int = 16):
    """Composite Gauss-Legendre on ``[0, L]``."""
    if L <= 0:
        return np.zeros(0), np.zeros(0)
    k = max(1, math.ceil(L / panel))
    t, w = _gl(nodes)
    edges = np.linspace(0, L, k + 1)
    a, b = edges[:-1, None], edges[1:, None]
    x = (a + b) / 2 + (b - a) / 2 * t
    ww = (b - a) / 2 * w
    return x.ravel(), np.broadcast_to(ww, x.shape).ravel()


def borel_eval(tp, s0, xi, panel: float = 0.5, nodes: int = 16, phi_nodes: int = 96) -> complex:
    """``beta(xi) = u_0 I(xi) + (H * I)(xi)`` along the straight segment."""
    tp = _tp(tp)
    xi = complex(xi)
    if not _is_integer_colour(s0):
        # the segment [0, xi] meets the cut only if xi itself is on it
        if on_cut(tp, s0, xi):
            raise BranchCutError(f"segment to {xi} touches the cut")
    L = abs(xi)
    if L == 0:
        return u0() * I_eval(tp, s0, 0)
    w = xi / L
    r, wr = _segment_rule(L, panel, nodes)
    t = r * w
    Iv = I_np(tp, s0, np.concatenate([t, [xi]]), phi_nodes)
    conv = np.sum(H_np(tp, xi - t) * Iv[:-1] * wr) * w
    return complex(u0() * Iv[-1] + conv)


def borel_taylor(tp, s0, xi, N: int = 40) -> complex:
    """``sum_{n<=N} b_n xi^n`` from the exact series (the oracle for ``borel_eval``)."""
    b = formal_borel(numeric_coeffs(tp, Fraction(s0), N)).b
    return complex(sum(float(bn) * complex(xi) ** n for n, bn in enumerate(b)))


# -- Laplace resummation ----------------------------------------------------

@dataclass
class ResumConfig:
    theta: float = 0.0
    R: float | None = None
    panel: float = 0.5
    nodes: int = 16
    phi_nodes: int = 96
    tol: float = 1e-10
    R_max: float = 40.0

    def to_json(self) -> dict:
        return {"theta": self.theta, "R": self.R, "panel": self.panel, "nodes": self.nodes,
                "phi_nodes": self.phi_nodes, "tol": self.tol}


@dataclass
class ResumResult:
    value: complex
    error_estimate: float
    branch_id: int
    theta: float
    R: float
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": {"re": self.value.real, "im": self.value.imag},
                "err": self.error_estimate, "branch": self.branch_id,
                "theta": self.theta, "R": self.R, "diagnostics": self.diagnostics}


def direction_margin(theta: float, h) -> float:
    """``Re(e^{i theta}/h) - 1/pi``; positive iff the direction lies in D(h)."""
    return (complex(math.cos(theta), math.sin(theta)) / complex(h)).real - 1 / math.pi


def check_direction(theta: float, h) -> int:
    """Validate ``e^{i theta}`` in ``D(h)`` and return the component id."""
    h = complex(h)
    if abs(h) >= math.pi:
        raise DirectionError(f"|h| = {abs(h):.4g} is not below pi")
    if direction_margin(theta, h) <= 0:
        raise DirectionError(f"direction theta={theta:.6g} is outside D(h) for h={h}")
    w = complex(math.cos(theta), math.sin(theta))
    if abs(w + 1) < 1e-12:
        raise DirectionError("the negative real direction meets the cut")
    if h.real >= 0:
        return 0
    return 0 if w.imag > 0 else 1


def _growth_constant(tp, s0, theta: float, R: float, cfg: ResumConfig) -> float:
    w = complex(math.cos(theta), math.sin(theta))
    pts = np.linspace(0.5, R, 6)
    vals = [abs(borel_eval(tp, s0, r * w, cfg.panel, cfg.nodes, cfg.phi_nodes)) * math.exp(-r / math.pi)
            for r in pts]
    return max(vals)


def _laplace(tp, s0, h: complex, w: complex, R: float, panel: float, nodes: int, phi_nodes: int) -> complex:
    """``(1/h) int_0^{R w} e^{-xi/h} beta(xi) d xi`` with ``beta = u_0 I + H*I``.

    The double integral of ``H*I`` is reordered (Fubini) so that ``I`` is
    evaluated once per outer node: ``int_0^R I(tw) e^{-tw/h} G(R-t) dt``
    with ``G(L) = int_0^L H(vw) e^{-vw/h} dv``.
    """
    t, wt = _segment_rule(R, panel, nodes)
    Iv = I_np(tp, s0, t * w, phi_nodes)
    et = np.exp(-t * w / h)
    first = u0() * np.sum(Iv * et * wt)
    G = np.empty(len(t), dtype=complex)
    for i, ti in enumerate(t):
        v, wv = _segment_rule(R - ti, panel, nodes)
        G[i] = np.sum(H_np(tp, v * w) * np.exp(-v * w / h) * wv)
    second = np.sum(Iv * et * G * wt)
    return (first * w + second * w * w) / h


def resum(tp, s0, h, cfg: ResumConfig | None = None) -> ResumResult:
    """Directional Laplace resummation of the torus-knot series at colour ``s0``."""
    tp = _tp(tp)
    cfg = cfg or ResumConfig()
    h = complex(h)
    branch = check_direction(cfg.theta, h)
    kappa = direction_margin(cfg.theta, h)
    w = complex(math.cos(cfg.theta), math.sin(cfg.theta))
    A = _growth_constant(tp, s0, cfg.theta, 8.0, cfg)
    if cfg.R is None:
        R = max(4.0, math.log(max(A, 1.0) / (kappa * cfg.tol * 1e-2)) / kappa)
        if R > cfg.R_max:
            raise DirectionError(f"tail bound needs R={R:.3g} > R_max={cfg.R_max}")
    else:
        R = float(cfg.R)
    tail = A * math.exp(-R * kappa) / kappa / abs(h)
    v1 = _laplace(tp, s0, h, w, R, cfg.panel, cfg.nodes, cfg.phi_nodes)
    v2 = _laplace(tp, s0, h, w, R, cfg.panel / 2, cfg.nodes, cfg.phi_nodes + 32)
    err = abs(v2 - v1) + tail
    diag = {"tail_bound": tail, "growth_A": A, "margin": kappa,
            "quadrature_diff": abs(v2 - v1)}
    return ResumResult(complex(v2), float(err), branch, float(cfg.theta), float(R), diag)


def resum_via_product(tp, s0, h, theta: float = 0.0, R: float = 30.0) -> complex:
    """Cross-check: ``P(h) * L_theta(I)(h)`` using the closed-form prefactor."""
    tp = _tp(tp)
    h = complex(h)
    w = complex(math.cos(theta), math.sin(theta))
    t, wt = _segment_rule(R, 0.25, 16)
    LI = np.sum(I_np(tp, s0, t * w) * np.exp(-t * w / h) * wt) * w
    P = np.exp(-h * float(tp.sigma) / 4) / np.sinh(h / 2) / math.sqrt(math.pi)
    return complex(P * LI)


def incomplete_resum(b: BorelCoefficients | Sequence, a: float, theta: float, h,
                     radius: float | None = None, dps: int = 30) -> complex:
    """``(1/h) int_0^{a e^{i theta}} e^{-xi/h} sum b_n xi^n d xi`` via lower
    incomplete gamma functions: ``sum b_n h^n gamma(n+1, a e^{i theta}/h)``."""
    coeffs = b.b if isinstance(b, BorelCoefficients) else list(b)
    h = complex(h)
    if a == 0:
        return 0j
    if (complex(math.cos(theta), math.sin(theta)) / h).real <= 0:
        raise DirectionError("need Re(e^{i theta}/h) > 0")
    if radius is None:
        radius = gevrey_diagnose(laplace_termwise(BorelCoefficients(list(coeffs), len(coeffs) - 1))).radius
    if a >= radius:
        raise DivergentTaylorError(f"a={a} is not inside the Borel radius {radius:.6g}")
    with mpmath.workdps(dps):
        hz = mpmath.mpc(h)
        z = a * mpmath.expj(theta) / hz
        tot = mpmath.mpf(0)
        hp = mpmath.mpf(1)
        for n, bn in enumerate(coeffs):
            bn = mpmath.mpf(bn.numerator) / bn.denominator if isinstance(bn, Fraction) else mpmath.mpmathify(bn)
            tot += bn * hp * mpmath.gammainc(n + 1, 0, z)
            hp *= hz
        return complex(tot)


def component_directions(h) -> list[float]:
    """One direction per connected component of ``D(h)`` (arc midpoints)."""
    h = complex(h)
    arg = math.atan2(h.imag, h.real)
    half = math.acos(min(1.0, abs(h) / math.pi))
    lo, hi = arg - half, arg + half
    # the excluded point is theta = pi (mod 2 pi)
    k = math.ceil((lo - math.pi) / (2 * math.pi))
    cut = math.pi + 2 * math.pi * k
    if lo < cut < hi:
        return [(lo + cut) / 2, (cut + hi) / 2]
    return [arg]


def branch_scan(tp, s0, h, cfg: ResumConfig | None = None) -> list[ResumResult]:
    """Resummations in every connected component of ``D(h)``, upper one first."""
    cfg = cfg or ResumConfig()
    out = []
    for th in component_directions(h):
        th = math.remainder(th, 2 * math.pi)
        c = ResumConfig(**{**cfg.__dict__, "theta": th})
        out.append(resum(tp, s0, h, c))
    out.sort(key=lambda r: r.branch_id)
    return out


def diagnostics_rows(a: Sequence[Fraction]) -> list[tuple]:
    """Rows ``n, a_n (exact), float(a_n), b_n, |b_n|^{1/n}``."""
    b = formal_borel(a).b
    rows = []
    for n, (x, bn) in enumerate(zip(a, b)):
        fb = float(bn)
        root = abs(fb) ** (1 / n) if n and fb else 0.0
        rows.append((n, str(x), float(x), fb, root))
    return rows
