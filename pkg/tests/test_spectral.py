import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlscatter.field import Spectrum, WaveField
from nlscatter.grid import GridError, GridMismatchError, make_grid
from nlscatter.spectral import (apply_multiplier, forward_transform, gradient,
                                inverse_transform, spectral_l2_norm)
from nlscatter import diagnostics as dg

from conftest import gaussian, random_smooth


class TestGrid:
    def test_small_grid_arithmetic(self):
        g = make_grid(1, 16, 8.0)
        assert g.spacing == 1.0
        np.testing.assert_allclose(g.k, np.pi / 8 * np.arange(-8, 8), rtol=0, atol=1e-15)
        assert g.x[0] == -8.0

    def test_forty_pi_spacing(self):
        g = make_grid(1, 1024, 40 * math.pi)
        assert g.spacing == pytest.approx(80 * math.pi / 1024, rel=1e-15)

    def test_two_dimensional(self):
        g = make_grid(2, 256, 20.0)
        assert g.shape == (256, 256)
        assert g.dk == pytest.approx(math.pi / 20)

    @pytest.mark.parametrize("args", [(3, 64, 1.0), (1, 100, 1.0), (1, 8, 1.0),
                                      (1, 64, 0.0), (1, 64, -2.0), (0, 64, 1.0)])
    def test_rejects_bad_parameters(self, args):
        with pytest.raises(GridError):
            make_grid(*args)

    @given(st.integers(4, 12), st.floats(0.1, 1e3))
    def test_spacing_times_points(self, log_n, L):
        g = make_grid(1, 2**log_n, L)
        assert g.spacing * g.points_per_axis == pytest.approx(2 * L, rel=1e-15)

    @given(st.integers(4, 12))
    def test_lattice_symmetric_but_for_nyquist(self, log_n):
        k = make_grid(1, 2**log_n, 3.0).k
        assert np.allclose(k[1:], -k[1:][::-1])
        assert k[0] == pytest.approx(-k[-1] - make_grid(1, 2**log_n, 3.0).dk)


class TestTransform:
    def test_zero(self, grid1):
        spec = forward_transform(WaveField.zeros(grid1))
        assert not np.any(spec.coefficients)

    def test_gaussian_pair(self, grid1):
        spec = forward_transform(gaussian(grid1))
        err = np.max(np.abs(spec.coefficients - np.exp(-grid1.k**2 / 2)))
        assert err <= 1e-10

    def test_lattice_mode_is_a_spike(self, grid1):
        m0 = 7
        k0 = grid1.k[grid1.points_per_axis // 2 + m0]
        h = WaveField(grid1, np.exp(1j * k0 * grid1.x))
        c = forward_transform(h).coefficients
        peak = np.argmax(np.abs(c))
        assert peak == grid1.points_per_axis // 2 + m0
        others = np.delete(c, peak)
        assert np.max(np.abs(others)) < 1e-9
        assert abs(c[peak]) * math.sqrt(grid1.dk) == pytest.approx(dg.l2_norm(h), rel=1e-12)

    @given(st.integers(0, 10_000), st.sampled_from([1, 2]))
    def test_plancherel_and_round_trip(self, seed, dim):
        g = make_grid(dim, 64 if dim == 2 else 256, 10.0)
        rng = np.random.default_rng(seed)
        h = WaveField(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
        spec = forward_transform(h)
        norm = dg.l2_norm(h)
        assert abs(spectral_l2_norm(spec) - norm) <= 1e-12 * norm
        back = inverse_transform(spec)
        assert dg.l2_norm(back - h) <= 1e-12 * norm

    def test_grid_mismatch(self, grid1):
        other = make_grid(1, 512, 40 * math.pi)
        with pytest.raises(GridMismatchError):
            gaussian(grid1) - gaussian(other)


class TestMultiplier:
    def test_identity(self, grid1):
        spec = forward_transform(gaussian(grid1))
        out = apply_multiplier(spec, lambda k: np.ones_like(k))
        assert np.array_equal(out.coefficients, spec.coefficients)

    def test_derivative_of_gaussian(self, grid1):
        spec = apply_multiplier(forward_transform(gaussian(grid1)), lambda k: 1j * k)
        d = inverse_transform(spec).values
        x = grid1.x
        assert np.max(np.abs(d - (-x * np.exp(-x**2 / 2)))) <= 1e-9

    def test_laplacian_eigenfunction(self, grid1):
        k0 = grid1.k[grid1.points_per_axis // 2 + 5]
        h = WaveField(grid1, np.exp(1j * k0 * grid1.x))
        spec = apply_multiplier(forward_transform(h), lambda k: k**2)
        np.testing.assert_allclose(inverse_transform(spec).values, k0**2 * h.values, atol=1e-12)

    def test_non_finite_multiplier_rejected(self, grid1):
        with pytest.raises(ValueError), np.errstate(divide="ignore"):
            apply_multiplier(forward_transform(gaussian(grid1)), lambda k: 1 / k)

    @given(st.floats(0.5, 2.0), st.floats(-3, 3))
    def test_resolved_bump_gradient(self, width, centre):
        g = make_grid(1, 1024, 30.0)   # >= 16 points across any width >= 0.5
        x = g.x
        h = WaveField(g, np.exp(-((x - centre) ** 2) / (2 * width**2)))
        exact = -(x - centre) / width**2 * h.values
        assert np.max(np.abs(gradient(h)[0] - exact)) <= 1e-8

    def test_gradient_norm_identity(self):
        g = make_grid(2, 128, 12.0)
        h = random_smooth(g, 3)
        quad = dg.kinetic_quadrature(h)
        assert dg.kinetic(h) == pytest.approx(quad, rel=1e-12)
