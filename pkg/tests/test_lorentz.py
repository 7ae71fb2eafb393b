from __future__ import annotations

from fractions import Fraction

import pytest

from zjones.exact import MPoly
from zjones.lorentz import (S12, DomainError, double_factorial_odd, g_expansion, lorentz_series,
                            lorentz_torus, parse_rep, rep_to_color, sl2c_pair_is_conjugate_symmetric,
                            trig_moment)


def test_double_factorial_and_moments():
    assert [double_factorial_odd(n) for n in range(5)] == [1, 1, 3, 15, 105]
    assert trig_moment(0, 0) == 1
    assert trig_moment(1, 0) == Fraction(1, 2)
    assert trig_moment(1, 1) == Fraction(1, 8)
    assert trig_moment(2, 0) == Fraction(3, 8)


def test_swap_symmetry():
    # h -> -h exchanges the two colours
    L = lorentz_series("trefoil", 6)
    swapped = L.rename(S12, {"s1": "s2", "s2": "s1"})
    assert L.mirror() == swapped


def test_trivial_colours():
    L = lorentz_series("fig8", 6)
    assert L.subs({"s1": 1, "s2": 1}).scalars() == [1, 0, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("mp", [(2, 3), (2, 5), (3, 4)])
def test_factorial_expansion_matches(mp):
    g = g_expansion(mp, 6)
    assert g.factorial_series == lorentz_torus(mp, 6)
    assert g.P[0].is_zero() and g.P[1].is_zero()


def test_g_expansion_order():
    with pytest.raises(ValueError):
        g_expansion((2, 3), 1)


def test_reps():
    assert rep_to_color("sl2r:principal:s=2i:eps=0") == 2j
    assert rep_to_color("sl2r:principal:s=-i") == -1j
    assert rep_to_color("sl2r:discrete:m=-3") == -3
    pair = rep_to_color("sl2c:principal:m=2:rho=0.25")
    assert pair == (2 + 0.25j, -2 + 0.25j)
    assert sl2c_pair_is_conjugate_symmetric(pair)
    assert str(parse_rep("sl2r:discrete:m=-1")) == "sl2r:discrete:m=-1"


@pytest.mark.parametrize("bad", ["sl2r:principal:s=2", "sl2r:principal:s=1i:eps=3",
                                 "sl2r:discrete:m=2", "su2:principal:m=1", "sl2r", "sl2r:discrete:m"])
def test_rep_errors(bad):
    with pytest.raises(DomainError):
        rep_to_color(bad)
