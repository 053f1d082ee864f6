"""Exponent bookkeeping for ``i u_t + Lap u = u |u|^p`` in dimension n."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[float, Fraction]


class Regime(str, enum.Enum):
    LONG_RANGE = "LongRange"
    SHORT_RANGE = "ShortRangeMassSubcritical"
    MASS_CRITICAL = "MassCritical"
    MASS_SUPERCRITICAL = "MassSupercritical"


def weight_exponent(n: int, p: Number) -> Number:
    """alpha(n, p) = 2 - n p / 2; exact for rational ``p``."""
    if isinstance(p, Rational):
        return 2 - Fraction(n) * p / 2
    return 2.0 - n * p / 2.0


def p_threshold(n: int) -> float:
    """Larger root of ``n x^2 + (n - 2) x - 4``.

    Uses ``8 / ((n-2) + sqrt(n^2 + 12n + 4))`` for n >= 2, which is the
    same root without the cancellation in ``2 - n + sqrt(...)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    disc = math.sqrt(n * n + 12 * n + 4)
    if n == 1:
        return (2 - n + disc) / (2 * n)
    return 8.0 / ((n - 2) + disc)


def threshold_residual(n: int, x: float) -> float:
    return n * x * x + (n - 2) * x - 4


def _bounds(n: int, p: Number):
    if isinstance(p, Rational):
        return Fraction(2, n), Fraction(4, n)
    return 2.0 / n, 4.0 / n


@dataclass(frozen=True)
class ExponentData:
    n: int
    p: Number
    alpha: Number
    regime: Regime
    p_threshold: float

    @property
    def short_range(self) -> bool:
        return self.regime is Regime.SHORT_RANGE


def classify_exponent(n: int, p: Number) -> ExponentData:
    if n < 1 or not p > 0:
        raise ValueError("need n >= 1 and p > 0")
    lo, hi = _bounds(n, p)
    if p <= lo:
        regime = Regime.LONG_RANGE
    elif p < hi:
        regime = Regime.SHORT_RANGE
    elif p == hi:
        regime = Regime.MASS_CRITICAL
    else:
        regime = Regime.MASS_SUPERCRITICAL
    return ExponentData(n, p, weight_exponent(n, p), regime, p_threshold(n))
