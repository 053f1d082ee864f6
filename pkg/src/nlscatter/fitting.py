"""Power-law fits and Richardson extrapolation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    stderr: float
    ci_low: float
    ci_high: float
    samples: int


def rate_fit(times: Sequence[float], values: Sequence[float], confidence: float = 0.95) -> RateFit:
    """Least-squares slope of ``log value`` against ``log time``."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size < 5 or t.size != v.size:
        raise ValueError("need at least 5 (time, value) pairs")
    if np.any(v <= 0) or np.any(t <= 0):
        raise ValueError("times and values must be strictly positive")
    lt, lv = np.log(t), np.log(v)
    res = stats.linregress(lt, lv)
    q = stats.t.ppf(0.5 + confidence / 2, t.size - 2)
    half = q * res.stderr
    return RateFit(float(res.slope), float(res.intercept), float(res.stderr),
                   float(res.slope - half), float(res.slope + half), int(t.size))


def richardson_limit(samples: Sequence[np.ndarray], ratio: float,
                     exponents: Sequence[float]) -> tuple[np.ndarray, float]:
    """Extrapolate ``h -> 0`` from samples at ``h, h/ratio, h/ratio^2, ...``.

    ``samples[j]`` is the quantity at step ``h / ratio**j`` and the error
    is assumed to expand in ``h**e`` for ``e`` in ``exponents`` (one fewer
    exponent than samples).  Returns the extrapolated value and the size
    of the last correction, the usual error indicator.
    """
    table = [np.asarray(s, dtype=complex) for s in samples]
    if len(exponents) != len(table) - 1:
        raise ValueError("need exactly len(samples) - 1 exponents")
    last = 0.0
    for e in exponents:
        f = ratio**e
        new = [(f * table[j + 1] - table[j]) / (f - 1) for j in range(len(table) - 1)]
        last = float(np.max(np.abs(new[-1] - table[-1])))
        table = new
    return table[0], last
