"""Uniform periodic lattices standing in for R^n.

A :class:`Grid` covers ``[-L, L)^dim`` with ``N`` points per axis.  The
paired wavenumber lattice is ``k_m = (pi/L) m`` with ``m`` in
``[-N/2, N/2)``; arrays on either lattice are stored in *sorted* order
(``x`` increasing, ``k`` increasing), never in raw FFT order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GridError(ValueError):
    """Invalid grid parameters."""


class GridMismatchError(ValueError):
    """Two objects that must share a grid do not."""


@dataclass(frozen=True)
class Grid:
    dim: int
    points_per_axis: int
    half_width: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise GridError(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if n < 16 or n & (n - 1):
            raise GridError(f"points_per_axis must be a power of two >= 16, got {n}")
        if not self.half_width > 0:
            raise GridError(f"half_width must be positive, got {self.half_width}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def dk(self) -> float:
        return np.pi / self.half_width

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def k_cell_volume(self) -> float:
        return self.dk**self.dim

    @cached_property
    def x(self) -> np.ndarray:
        """1-D coordinates ``x_j = -L + j dx``."""
        n = self.points_per_axis
        return -self.half_width + self.spacing * np.arange(n)

    @cached_property
    def k(self) -> np.ndarray:
        """1-D sorted wavenumbers ``(pi/L) m``."""
        n = self.points_per_axis
        return self.dk * np.arange(-(n // 2), n // 2)

    @cached_property
    def x_mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.x] * self.dim), indexing="ij"))

    @cached_property
    def k_mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.k] * self.dim), indexing="ij"))

    @cached_property
    def r2(self) -> np.ndarray:
        """|x|^2 on the lattice."""
        return sum(c**2 for c in self.x_mesh)

    @cached_property
    def k2(self) -> np.ndarray:
        """|k|^2 on the sorted wavenumber lattice."""
        return sum(c**2 for c in self.k_mesh)

    @cached_property
    def k2_fft(self) -> np.ndarray:
        """|k|^2 in raw FFT ordering, for the integrators' inner loops."""
        return np.fft.ifftshift(self.k2)

    @cached_property
    def phase_correction(self) -> np.ndarray:
        """``(-1)^m`` from the lattice offset ``-L``, sorted ordering."""
        n = self.points_per_axis
        sign = np.where(np.arange(-(n // 2), n // 2) % 2 == 0, 1.0, -1.0)
        out = sign
        for _ in range(self.dim - 1):
            out = np.multiply.outer(out, sign)
        return out


def make_grid(dim: int, points_per_axis: int, half_width: float) -> Grid:
    return Grid(int(dim), int(points_per_axis), float(half_width))
