"""Immutable containers for samples on a :class:`~nlscatter.grid.Grid`."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridMismatchError


def _frozen_complex(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != shape:
        raise ValueError(f"values have shape {arr.shape}, grid expects {shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex samples of u, w or v at one time on ``grid``."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_complex(self.values, self.grid.shape))
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_function(cls, grid: Grid, func, time: float = 0.0) -> "WaveField":
        return cls(grid, func(*grid.x_mesh), time)

    @classmethod
    def zeros(cls, grid: Grid, time: float = 0.0) -> "WaveField":
        return cls(grid, np.zeros(grid.shape), time)

    def with_values(self, values, time: float | None = None) -> "WaveField":
        return WaveField(self.grid, values, self.time if time is None else time)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def __add__(self, other: "WaveField") -> "WaveField":
        require_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "WaveField") -> "WaveField":
        require_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar) -> "WaveField":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def conj(self) -> "WaveField":
        return self.with_values(np.conj(self.values))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Samples of the unitary Fourier transform on the sorted k-lattice."""

    grid: Grid
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen_complex(self.coefficients, self.grid.shape))

    def as_field(self, dual: Grid | None = None) -> WaveField:
        """View the coefficients as a field on the k-lattice.

        The k-lattice of a grid with ``N`` points and half-width ``L`` is
        itself a uniform lattice of half-width ``N pi / (2L)``; ``dual``
        defaults to that grid.
        """
        dual = dual or dual_grid(self.grid)
        return WaveField(dual, self.coefficients)


def dual_grid(grid: Grid) -> Grid:
    """The grid whose x-lattice coincides with ``grid``'s k-lattice."""
    return Grid(grid.dim, grid.points_per_axis, grid.points_per_axis * grid.dk / 2)


def require_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"grid mismatch: {a.grid} vs {b.grid}")
