"""Exact z-coloured Jones series, sl2 weight systems and Borel resummation."""
from __future__ import annotations

__version__ = "0.1.0"
