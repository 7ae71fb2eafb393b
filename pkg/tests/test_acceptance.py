"""Acceptance criteria A1-A15, one report line per criterion."""
from __future__ import annotations

from fractions import Fraction

import pytest

from zjones import acceptance, chords

from conftest import REPORT

IDS = list(acceptance.CRITERIA)


@pytest.mark.parametrize("cid", IDS)
def test_criterion(cid):
    c = acceptance.run(cid)
    REPORT.append(c.line())
    print("\n" + c.line())
    assert c.passed, c.line()


def test_all_criteria_present():
    assert IDS == [f"A{k}" for k in range(1, 16)]


def test_kappa_sign_negative_control(monkeypatch):
    # flipping the colour normalisation must break the framing match
    monkeypatch.setattr(chords, "KAPPA", Fraction(-1, 4))
    c = acceptance.run("A6")
    print("\n[kappa=-1/4] " + c.line())
    assert not c.passed


def test_frozen_framing_negative_control(monkeypatch):
    monkeypatch.setattr(acceptance.constants, "TREFOIL_TORUS_FRAMING", 11)
    assert not acceptance.run("A6").passed


def test_frozen_oracle_flag_negative_control(monkeypatch):
    monkeypatch.setattr(acceptance.constants, "ORACLE_MIRROR", True)
    assert not acceptance.run("A8").passed
