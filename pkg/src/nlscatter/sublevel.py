"""Sublevel sets of ``f(s) = s - a - b s^(1+p)`` on the half-line.

``f`` increases up to ``s_bar = ((p+1) b)^(-1/p)`` and decreases after.
When ``f(s_bar) > 0``, equivalently
``a b^(1/p) < (p+1)^(-1/p) - (p+1)^(-1-1/p)``, the set ``{f <= 0}`` splits
into ``[0, c]`` and ``[d, inf)`` with ``c < s_bar < d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


def f_value(s, a: float, b: float, p: float):
    s = np.asarray(s, dtype=float)
    return s - a - b * s ** (1 + p)


def threshold(p: float) -> float:
    return (p + 1) ** (-1 / p) - (p + 1) ** (-1 - 1 / p)


@dataclass(frozen=True)
class SublevelStructure:
    a: float
    b: float
    p: float
    s_bar: float
    threshold_ok: bool
    c: Optional[float] = None
    d: Optional[float] = None

    def contains(self, s):
        """Membership in ``{f <= 0}`` as predicted from ``c, d``."""
        s = np.asarray(s, dtype=float)
        if not self.threshold_ok:
            return np.ones(s.shape, dtype=bool)
        return (s <= self.c) | (s >= self.d)


def _bisect(func, lo: float, hi: float) -> float:
    """Bisection run until the bracket stops shrinking in floating point."""
    flo = func(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = func(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid


def sublevel_structure(a: float, b: float, p: float) -> SublevelStructure:
    if a < 0 or not b > 0 or not p > 0:
        raise ValueError("need a >= 0, b > 0, p > 0")
    s_bar = ((p + 1) * b) ** (-1 / p)
    ok = a * b ** (1 / p) < threshold(p)
    if not ok:
        return SublevelStructure(a, b, p, s_bar, False)
    f = lambda s: float(f_value(s, a, b, p))
    c = 0.0 if a == 0 else _bisect(f, 0.0, s_bar)
    if a == 0:
        d = b ** (-1 / p)
    else:
        hi = 2.0 * s_bar
        while f(hi) > 0:
            hi *= 2.0
        d = _bisect(f, s_bar, hi)
    return SublevelStructure(a, b, p, s_bar, True, c, d)
