"""Calibration constants measured once and frozen as regression values."""
from __future__ import annotations

#: the (2,3) Gaussian-integral series equals the Habiro trefoil series with
#: this mirror flag and framing shift (framing unit: exp((s^2-1)h/8))
TREFOIL_TORUS_MIRROR = False
TREFOIL_TORUS_FRAMING = 12

#: Kauffman-bracket oracle orientation matching the Habiro trefoil at s = 2
#: for the standard PD code of the trefoil
ORACLE_MIRROR = False

#: Borel-plane singularity side, decided by the sign pattern of b_k
CUT_ON_NEGATIVE_AXIS = True

#: fitted Gevrey constants at s = 1/2, order 40 (regression values)
GEVREY_C = {"trefoil": 0.62878, "fig8": 0.50658}
