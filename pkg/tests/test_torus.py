from __future__ import annotations

import math
from fractions import Fraction

import pytest

from zjones.exact import HSeries, MPoly, eval_numeric
from zjones.knots import S, KnotSpecError
from zjones.torus import (ContourPoleError, SingularPrefactorError, TorusParams, f_coeffs,
                          gamma_half_ratio, jones_torus, kashaev_closed, kashaev_quadrature,
                          native_framing)

s = MPoly.var(S, "s")


def test_params():
    with pytest.raises(KnotSpecError):
        TorusParams(2, 4)
    with pytest.raises(KnotSpecError):
        TorusParams(1, 5)


def test_q_examples():
    Q = f_coeffs((2, 3), 4)
    assert Q[1] == MPoly.const(S, 1)
    assert Q[2] == s * s - Fraction(23, 36)


@pytest.mark.parametrize("mp", [(2, 3), (2, 5), (3, 4), (3, 5), (5, 7)])
def test_q_parity_degree(mp):
    Q = f_coeffs(mp, 8)
    assert Q[1] == MPoly.const(S, 1)
    for k in range(1, 9):
        assert Q[k].is_even_in("s") and Q[k].degree("s") <= 2 * k - 2


def test_q_at_trivial_colour():
    # sinh(a x) sinh(b x) with a b = 1, a^2 + b^2 = 13/6: (cosh((a+b)x) - cosh((a-b)x))/2
    Q = f_coeffs((2, 3), 5, s=1)
    plus, minus = Fraction(13, 6) + 2, Fraction(13, 6) - 2
    for k in range(1, 6):
        assert Q[k].constant_term() == (plus ** k - minus ** k) / (2 * math.factorial(2 * k))


def test_gamma_ratio():
    for k in range(6):
        assert abs(float(gamma_half_ratio(k)) - math.gamma(k + 0.5) / math.sqrt(math.pi)) < 1e-14


def test_trivial_colour_is_one():
    for mp in ((2, 3), (2, 5), (3, 4)):
        assert jones_torus(*mp, 14, 1) == HSeries.constant(S, 1, 14)


def test_first_order_framing():
    for m, p in ((2, 3), (2, 5), (3, 4), (3, 5)):
        j = jones_torus(m, p, 3)
        assert j[0] == MPoly.const(S, 1)
        assert j[1] == (s * s - 1) * Fraction(native_framing(m, p), 8)


def test_kashaev_closed_trivial_and_parity():
    for h in (0.3, -0.7, 0.2 + 0.4j):
        assert abs(kashaev_closed((2, 5), 1, h) - 1) < 1e-14
    assert abs(kashaev_closed((2, 3), 3, 0.25) - kashaev_closed((2, 3), -3, 0.25)) < 1e-14
    with pytest.raises(SingularPrefactorError):
        kashaev_closed((2, 3), 2, 0)


def test_closed_vs_series():
    j = jones_torus(2, 3, 40, 2)
    v, _ = eval_numeric(j, {"s": 2}, 0.2, 200)
    assert abs(v - kashaev_closed((2, 3), 2, 0.2)) < 1e-8
    j = jones_torus(3, 4, 40, 3)
    v, _ = eval_numeric(j, {"s": 3}, 0.05, 200)
    assert abs(v - kashaev_closed((3, 4), 3, 0.05)) < 1e-10


def test_quadrature():
    v, e = kashaev_quadrature((2, 3), 2, 0.2)
    assert abs(v - kashaev_closed((2, 3), 2, 0.2)) <= 1e-10 and e < 1e-10
    v, _ = kashaev_quadrature((2, 5), 1, 0.4 + 0.1j)
    assert abs(v - 1) < 1e-10
    v, _ = kashaev_quadrature((2, 3), 0.5, 0.2)
    assert math.isfinite(v.real) and abs(v.imag) < 1e-14
    with pytest.raises(ContourPoleError):
        kashaev_quadrature((2, 3), 0.5, -0.2)


def test_quadrature_matches_series_asymptotically():
    # at small h the divergent series is still an excellent asymptotic guide
    j = jones_torus(2, 3, 8, Fraction(1, 2))
    v, _ = eval_numeric(j, {"s": 0.5}, 0.02)
    q, _ = kashaev_quadrature((2, 3), 0.5, 0.02)
    assert abs(v - q) < 1e-9
