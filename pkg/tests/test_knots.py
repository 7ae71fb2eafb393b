from __future__ import annotations

from fractions import Fraction

import pytest

from zjones.exact import HSeries, MPoly, TruncationError
from zjones.knots import (PD_FIG8, PD_TREFOIL, PD_UNKNOT, KnotSpecError, PlanarDiagram, S,
                          UnsupportedDiagramError, fig8_f, frame_shift, habiro_D, habiro_sum,
                          jones_from_bracket, jones_habiro, kauffman_jones_oracle, knot_series,
                          mirror_and_frame, mm_report, normalize_by_unknot, parse_knot, pd_writhe,
                          qdim_series)

s = MPoly.var(S, "s")
ONE = lambda N: HSeries.constant(S, 1, N)


def test_parse_knot():
    assert str(parse_knot("trefoil@0")) == "trefoil@0"
    assert str(parse_knot("fig8")) == "fig8@0"
    k = parse_knot("torus(2,5)@-3")
    assert (k.kind, k.m, k.p, k.framing) == ("torus", 2, 5, -3)
    k = parse_knot("mirror(torus(2,3))@0")
    assert k.kind == "mirror" and k.inner.m == 2
    for bad in ("torus(2,4)", "torus(1,3)", "granny", "torus(2,3"):
        with pytest.raises(KnotSpecError):
            parse_knot(bad)


def test_habiro_D_basic():
    assert habiro_D(0, 5) == ONE(5)
    for n in range(1, 4):
        d = habiro_D(n, 9)
        assert d.valuation == 2 * n
        assert d.subs({"s": 1}) == HSeries(S, [], 9)


def test_habiro_D_first_factor():
    # {s}^2 - {1}^2 = (s^2 - 1) h^2 + (s^4 - 1) h^4 / 12 + ...
    d = habiro_D(1, 4)
    assert d == HSeries(S, [0, 0, s * s - 1, 0, (s ** 4 - 1) * Fraction(1, 12)], 4)


def test_habiro_D_printed_variant():
    # the product of simple-zero factors: (s-1)h + (s^3-1)h^3/24
    d = habiro_D(1, 3, printed=True)
    assert d == HSeries(S, [0, s - 1, 0, (s ** 3 - 1) * Fraction(1, 24)], 3)
    assert d.valuation == 1
    # odd in s: it would break the parity property
    assert d.map_coeffs(lambda c: c.scale_var("s", -1)) != d


def test_squared_factor_identity():
    # {s}^2 - {1}^2 = {s+1}{s-1}
    from zjones.exact import two_sinh_h
    assert habiro_D(1, 8) == two_sinh_h(s + 1, 8, 1) * two_sinh_h(s - 1, 8, 1)


def test_qdim():
    q = qdim_series(6)
    assert q[0] == MPoly.const(S, 1) and q[1].is_zero()
    assert q[2] == (s * s - 1) * Fraction(1, 24)
    assert q.subs({"s": 1}) == ONE(6)
    assert qdim_series(4, 0)[2] == MPoly.const(S, Fraction(-1, 24))


def test_trefoil_trivial_colour_and_low_orders():
    j = jones_habiro("trefoil", 10, s=1)
    assert j.series == ONE(10)
    # N=2 cyclotomic check: q^{-1} + q^{-3} - q^{-4} times qdim(2)
    from zjones.exact import exp_h
    expect = (exp_h(-1, 8) + exp_h(-3, 8) - exp_h(-4, 8)) * qdim_series(8, 2)
    assert jones_habiro("trefoil", 8, s=2).series == expect


def test_fig8_properties():
    j = jones_habiro("fig8", 12).series
    assert j[0] == MPoly.const(S, 1)
    assert j.map_coeffs(lambda c: c.scale_var("s", -1)) == j
    assert j.mirror() == j


def test_normalize_unknot():
    u = jones_habiro("unknot", 8)
    assert normalize_by_unknot(u).series == ONE(8)


def test_mirror_frame_involutions():
    j = jones_habiro("trefoil", 8)
    assert mirror_and_frame(mirror_and_frame(j, True, 0), True, 0).series == j.series
    assert mirror_and_frame(mirror_and_frame(j, False, 1), False, -1).series == j.series


def test_custom_f_list():
    N = 8
    f = [fig8_f(n, N) for n in range(N // 2 + 1)]
    assert jones_habiro(f, N).series == jones_habiro("fig8", N).series
    with pytest.raises(TruncationError):
        habiro_sum(f[:2], N)


def test_mm_report_detects_violation():
    j = jones_habiro("trefoil", 6)
    assert mm_report(j).ok
    bad = HSeries(S, list(j.series.coeffs[:3]) + [j.series[3] + s], 6)
    r = mm_report(bad)
    assert not r.ok and r.even[3] is False


def test_top_line_unknot():
    r = mm_report(qdim_series(6))
    assert r.top_line[0] == 1


def test_torus_framing_from_knot_string():
    raw = knot_series("torus(2,3)@12", 8).series
    from zjones.torus import jones_torus
    assert raw == jones_torus(2, 3, 8)
    assert knot_series("torus(2,3)@0", 8).series[1].is_zero()


def test_pd_writhe_and_bracket():
    assert pd_writhe(PD_TREFOIL) == -3
    assert pd_writhe(PD_FIG8) == 0
    assert jones_from_bracket(PD_UNKNOT) == {0: 1}
    # left-handed trefoil: V = -t^{-4} + t^{-3} + t^{-1} with t = A^{-4}
    assert jones_from_bracket(PD_TREFOIL) == {4: 1, 12: 1, 16: -1}
    assert jones_from_bracket(PD_FIG8) == {-8: 1, -4: -1, 0: 1, 4: -1, 8: 1}


def test_bracket_errors():
    with pytest.raises(UnsupportedDiagramError):
        jones_from_bracket(PlanarDiagram(PD_TREFOIL.crossings, 3))
    with pytest.raises(UnsupportedDiagramError):
        jones_from_bracket(PlanarDiagram(((1, 2, 3, 4),), None))


def test_oracle_unknot_and_figure_eight():
    assert kauffman_jones_oracle(PD_UNKNOT, 10) == qdim_series(10, 2)
    fig = jones_habiro("fig8", 12, s=2).series
    assert kauffman_jones_oracle(PD_FIG8, 12) == fig
    assert kauffman_jones_oracle(PD_FIG8, 12, mirror=True) == fig


def test_oracle_trefoil_calibration():
    tref = jones_habiro("trefoil", 12, s=2).series
    assert kauffman_jones_oracle(PD_TREFOIL, 12).agrees_with(tref)
    assert not kauffman_jones_oracle(PD_TREFOIL, 12, mirror=True).agrees_with(tref)


def test_integer_colour_partial_sums_settle():
    from zjones.exact import eval_numeric
    for sv in (1, 2, 3):
        f = jones_habiro("trefoil", 24, s=sv).series
        terms = [abs(float(c.constant_term()) * 0.1 ** n) for n, c in enumerate(f.coeffs)]
        assert max(terms[12:]) < 1e-6
