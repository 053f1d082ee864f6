import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nlscatter.field import WaveField
from nlscatter.grid import make_grid

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")


def gaussian(grid, width=1.0, amplitude=1.0, center=0.0, velocity=0.0):
    vals = np.full(grid.shape, complex(amplitude))
    for x in grid.x_mesh:
        vals = vals * np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * velocity * x)
    return WaveField(grid, vals)


def random_smooth(grid, seed, modes=8):
    """Random band-limited field: low modes only, so every audit passes."""
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.shape, dtype=complex)
    centre = grid.points_per_axis // 2
    sl = tuple(slice(centre - modes, centre + modes) for _ in range(grid.dim))
    shape = (2 * modes,) * grid.dim
    coeffs[sl] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    from nlscatter.spectral import ifft_sorted
    return WaveField(grid, ifft_sorted(coeffs, grid))


@pytest.fixture
def grid1():
    return make_grid(1, 1024, 40 * np.pi)


@pytest.fixture
def small_grid():
    return make_grid(1, 512, 20.0)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
