"""Bivariate-colour (Lorentz) series and representation labels.

The Lorentz series of a knot is the product of its colour-``s1`` series and
the colour-``s2`` series of its mirror.  For torus knots the Gaussian
prefactors cancel in that product, which gives the factorial expansion

    L = sum_k Phat[k] k! h^k / (sinh(h/2) sinh(-h/2))
    Phat[k] = sum_{a+b=k} (-1)^b Q_{s1}[a] Q_{s2}[b] (2a-1)!! (2b-1)!! / (2k)!!

Here ``2 pi Phat[k]`` is the ``x^{2k}`` Taylor coefficient of
``G(x) = int_0^{2pi} F_{s1}(x cos t) F_{s2}(i x sin t) dt``; only the even
trigonometric moments survive, so the factor ``2 pi`` is carried implicitly.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .exact import HSeries, MPoly, series_div, two_sinh_h
from .knots import KnotSpec, knot_series, parse_knot
from .torus import TorusParams, f_coeffs, native_framing

S12 = ("s1", "s2")


class DomainError(ValueError):
    pass


def _lift(series: HSeries, name: str) -> HSeries:
    return series.rename(S12, {"s": name})


def lorentz_series(K: KnotSpec | str, N: int) -> HSeries:
    """``J_K(s1, h) * J_K(s2, -h)`` as an exact bivariate series."""
    if isinstance(K, str):
        K = parse_knot(K)
    j = knot_series(K, N).series
    return _lift(j, "s1") * _lift(j.mirror(), "s2")


def double_factorial_odd(n: int) -> int:
    """``(2n-1)!!`` with ``(-1)!! = 1``."""
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out


def trig_moment(a: int, b: int) -> Fraction:
    """``int_0^{2pi} cos^{2a} sin^{2b} dt / (2 pi)``."""
    return Fraction(double_factorial_odd(a) * double_factorial_odd(b),
                    2 ** (a + b) * math.factorial(a + b))


@dataclass
class GExpansion:
    P: list[MPoly]  # Phat[0..N+1], the coefficient of 2*pi
    factorial_series: HSeries


def g_expansion(tp: TorusParams | tuple, N: int) -> GExpansion:
    """``Phat[k]`` and the assembled factorial series to order ``N``."""
    if not isinstance(tp, TorusParams):
        tp = TorusParams(*tp)
    if N < 2:
        raise ValueError("need N >= 2")
    K = N + 2
    Q = f_coeffs(tp, K)
    Q1 = [_lift(HSeries(("s",), [q], 0), "s1")[0] for q in Q]
    Q2 = [_lift(HSeries(("s",), [q], 0), "s2")[0] for q in Q]
    P = []
    for k in range(K + 1):
        acc = MPoly(S12)
        for a in range(1, k):
            b = k - a
            acc = acc + Q1[a] * Q2[b] * (trig_moment(a, b) * (-1) ** b)
        P.append(acc)
    body = HSeries(S12, [P[k] * math.factorial(k) for k in range(K + 1)], K)
    sh = two_sinh_h(MPoly.const(S12, 1), K, 1) * Fraction(1, 2)
    den = -(sh * sh)
    return GExpansion(P, series_div(body, den).truncate(N))


def lorentz_torus(tp: TorusParams | tuple, N: int) -> HSeries:
    """``lorentz_series`` of the torus knot at its native framing."""
    if not isinstance(tp, TorusParams):
        tp = TorusParams(*tp)
    return lorentz_series(KnotSpec("torus", native_framing(tp.m, tp.p), tp.m, tp.p), N)


# -- representation labels ---------------------------------------------------

@dataclass(frozen=True)
class RepLabel:
    group: str   # sl2r | sl2c
    series: str  # principal | discrete
    params: tuple

    def __str__(self):
        return f"{self.group}:{self.series}:" + ":".join(f"{k}={v}" for k, v in self.params)


def _parse_number(text: str) -> complex:
    t = text.strip().lower().replace("j", "i")
    if t.endswith("i"):
        core = t[:-1]
        if core in ("", "+"):
            return 1j
        if core == "-":
            return -1j
        if re.search(r"[0-9.][+-]", core):
            return complex(t.replace("i", "j"))
        return complex(0, float(core))
    return complex(float(t))


def parse_rep(text: str) -> RepLabel:
    """``sl2r:principal:s=2i:eps=0``, ``sl2r:discrete:m=-3``, ``sl2c:principal:m=1:rho=0.5``."""
    parts = text.strip().split(":")
    if len(parts) < 3:
        raise DomainError(f"cannot parse representation {text!r}")
    group, series = parts[0].lower(), parts[1].lower()
    params = []
    for item in parts[2:]:
        if "=" not in item:
            raise DomainError(f"bad parameter {item!r}")
        k, v = item.split("=", 1)
        params.append((k.strip(), v.strip()))
    return RepLabel(group, series, tuple(params))


def rep_to_color(r: RepLabel | str):
    """Colour values ``2z+1`` (SL2R) or the pair ``(2z+1, 2w+1)`` (SL2C)."""
    if isinstance(r, str):
        r = parse_rep(r)
    p = dict(r.params)
    if r.group == "sl2r":
        if r.series == "principal":
            s = _parse_number(p.get("s", ""))
            eps = int(p.get("eps", "0"))
            if s.real != 0:
                raise DomainError("principal series needs s in iR")
            if eps not in (0, 1):
                raise DomainError("eps must be 0 or 1")
            return s
        if r.series in ("discrete", "discrete_pos", "discrete_neg"):
            m = int(p.get("m", "x"))
            if m >= 0:
                raise DomainError("discrete series label needs m a negative integer")
            return complex(m)
    if r.group == "sl2c" and r.series == "principal":
        m = int(p.get("m", "x"))
        rho = float(p.get("rho", "x"))
        return (complex(m, rho), complex(-m, rho))
    raise DomainError(f"unsupported representation {r}")


def color_json(c) -> dict:
    if isinstance(c, tuple):
        return {"s1": {"re": c[0].real, "im": c[0].imag}, "s2": {"re": c[1].real, "im": c[1].imag}}
    return {"s": {"re": c.real, "im": c.imag}}


def sl2c_pair_is_conjugate_symmetric(pair) -> bool:
    a, b = pair
    return cmath.isclose(a, -b.conjugate())
