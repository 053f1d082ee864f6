import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlscatter import diagnostics as dg
from nlscatter.exponents import classify_exponent
from nlscatter.field import Spectrum, WaveField
from nlscatter.grid import make_grid
from nlscatter.propagators import (EquationSpec, StepPolicy, Variant, evolve, free_flow,
                                   harmonic_flow)
from nlscatter.resample import ChirpResampler, ResolutionError, SupportError
from nlscatter.spectral import forward_transform, laplacian
from nlscatter.transforms import (inverse_pseudo_conformal_transform, lens_apply, lens_invert,
                                  mdfm_factor, mdfm_profile, pseudo_conformal_transform,
                                  time_map, time_map_inverse)

from conftest import gaussian, random_smooth

CUBIC = classify_exponent(1, 3)


class TestTimeMap:
    def test_values(self):
        assert time_map(0.0) == 0.0
        assert time_map(0.5) == pytest.approx(math.pi / 8, rel=1e-15)
        assert math.pi / 4 - time_map(1e6) < 1e-6

    @given(st.floats(-1e3, 1e3))
    def test_mutually_inverse(self, s):
        assert time_map_inverse(time_map(s)) == pytest.approx(s, rel=1e-12, abs=1e-14)

    @given(st.floats(-0.78, 0.78))
    def test_inverse_round_trip(self, t):
        assert time_map(time_map_inverse(t)) == pytest.approx(t, abs=1e-14)

    @given(st.floats(0, 100), st.floats(0.01, 100))
    def test_monotone(self, s, ds):
        assert time_map(s + ds) > time_map(s)

    def test_inverse_domain(self):
        with pytest.raises(ValueError):
            time_map_inverse(math.pi / 4)


class TestPseudoConformal:
    def test_unit_time_is_conjugate_chirp(self, small_grid):
        u = gaussian(small_grid, velocity=0.3)
        w = pseudo_conformal_transform(u.with_values(u.values, time=1.0), 1.0)
        expected = np.conj(u.values) * np.exp(1j * small_grid.r2 / 4)
        assert np.max(np.abs(w.values - expected)) < 1e-10
        assert w.time == 1.0

    @given(st.integers(0, 500), st.floats(1.0, 2.0))
    def test_isometry(self, seed, s):
        g = make_grid(1, 512, 40.0)
        u = random_smooth(g, seed, modes=6)
        u = WaveField(g, u.values * np.exp(-(g.x**2) / 8))   # localize well inside the box
        w = pseudo_conformal_transform(u, s)
        assert dg.l2_norm(w) == pytest.approx(dg.l2_norm(u), rel=1e-8)

    def test_gaussian_closed_form(self):
        g = make_grid(1, 1024, 40.0)
        s, t = 2.0, 0.5
        u = gaussian(g, width=1.5)
        w = pseudo_conformal_transform(u, s)
        x = g.x
        exact = t**-0.5 * np.exp(-((x / t) ** 2) / (2 * 1.5**2)) * np.exp(1j * x**2 / (4 * t))
        assert np.max(np.abs(w.values - exact)) <= 1e-7
        assert w.time == t

    def test_inverse(self, small_grid):
        u = gaussian(small_grid, velocity=0.5)
        s = 1.7
        w = pseudo_conformal_transform(u.with_values(u.values, time=s), s)
        back = inverse_pseudo_conformal_transform(w, w.time)
        assert back.time == pytest.approx(s)
        assert dg.l2_norm(back - u) / dg.l2_norm(u) < 1e-9

    def test_negative_branch_mirrors(self, small_grid):
        u = gaussian(small_grid, velocity=0.4)
        wp = pseudo_conformal_transform(u, 1.5)
        wm = pseudo_conformal_transform(u, -1.5)
        assert wm.time == pytest.approx(-1 / 1.5)
        assert dg.l2_norm(wm) == pytest.approx(dg.l2_norm(wp), rel=1e-10)

    def test_support_flagged(self):
        g = make_grid(1, 512, 20.0)
        u = gaussian(g, width=3.0)
        with pytest.raises(SupportError):
            pseudo_conformal_transform(u, 0.25)   # target only sees |x| < 5

    def test_resolution_flagged(self):
        g = make_grid(1, 64, 20.0)
        u = WaveField(g, np.exp(1j * 4.0 * g.x) * np.exp(-(g.x**2) / 20))
        with pytest.raises(ResolutionError):
            ChirpResampler(g, g, 1.0).audit(u)

    def test_weighted_equation_weakly(self):
        # transformed physical snapshots solve the weighted equation weakly
        g = make_grid(1, 4096, 100.0)
        t, d = 0.5, 1e-3
        ts = (t - d, t, t + d)
        ss = [1 / tau for tau in ts]
        spec = EquationSpec(Variant.PHYSICAL, CUBIC)
        tr = evolve(spec, gaussian(g), 0.0, max(ss), StepPolicy(1e-3), sample_times=ss)
        target = make_grid(1, 2048, 50.0)
        w = [pseudo_conformal_transform(tr.snapshot_at(s), s, target) for s in ss]
        wm, w0, wp = (f.values for f in w)
        dwdt = (wp - wm) / (2 * d)
        bump = np.exp(-(target.x**2))
        nonlin = t ** (-CUBIC.alpha) * w0 * np.abs(w0) ** 3
        lap = laplacian(w[1])
        terms = [1j * dwdt, lap, -nonlin]
        pair = lambda f: np.sum(f * bump) * target.spacing
        scale = sum(abs(pair(f)) for f in terms)
        assert abs(sum(pair(f) for f in terms)) / scale <= 1e-3


class TestLens:
    def test_identity_at_zero(self, small_grid):
        G = gaussian(small_grid, velocity=0.7)
        assert dg.l2_norm(lens_apply(G, 0.0) - G) < 1e-11

    def test_round_trip_and_isometry(self, small_grid):
        G = gaussian(small_grid, velocity=0.5)
        t = math.pi / 8
        F = lens_apply(G, t)
        assert dg.l2_norm(F) == pytest.approx(dg.l2_norm(G), rel=1e-8)
        assert dg.l2_norm(lens_invert(F, t) - G) / dg.l2_norm(G) <= 1e-8
        assert lens_invert(F, t).time == pytest.approx(0.5)

    def test_domain(self, small_grid):
        with pytest.raises(ValueError):
            lens_apply(gaussian(small_grid), math.pi / 4)

    @pytest.mark.parametrize("s", [0.25, 0.5, 1.0])
    def test_conjugates_free_to_harmonic(self, s):
        g = make_grid(1, 2048, 40.0)
        phi = gaussian(g)
        t = time_map(s)
        err = dg.l2_norm(lens_apply(free_flow(phi, s), t) - harmonic_flow(phi, t, 1e-4))
        assert err <= 1e-5

    def test_composition_with_nonlinear_runs(self):
        g = make_grid(1, 4096, 100.0)
        aux = make_grid(1, 512, 20.0)
        ss = [0.5, 1.0, 2.0]
        phys = evolve(EquationSpec(Variant.PHYSICAL, CUBIC), gaussian(g), 0.0, 2.0,
                      StepPolicy(2e-3), sample_times=ss)
        ts = [time_map(s) for s in ss]
        lens = evolve(EquationSpec(Variant.LENS, CUBIC), gaussian(aux), 0.0, max(ts),
                      StepPolicy(1e-3), sample_times=ts)
        for s, t in zip(ss, ts):
            mapped = lens_apply(phys.snapshot_at(s), t, target=aux)
            direct = lens.snapshot_at(t)
            assert dg.l2_norm(mapped - direct) / dg.l2_norm(direct) <= 1e-4


class TestProfile:
    def test_zero(self, small_grid):
        spec = Spectrum(small_grid, np.zeros(small_grid.shape))
        assert not np.any(mdfm_profile(spec, 3.0).values)

    def test_factor_branch(self):
        assert mdfm_factor(0.5, 1) == pytest.approx((1j) ** -0.5)
        assert abs(mdfm_factor(7.0, 2)) == pytest.approx(1 / 14)
        with pytest.raises(ValueError):
            mdfm_profile(forward_transform(gaussian(make_grid(1, 64, 8.0))), 0.0)

    @given(st.integers(0, 300), st.floats(2.0, 20.0))
    def test_norm_equality(self, seed, t):
        src = make_grid(1, 256, 20.0)
        h = random_smooth(src, seed, modes=6)
        h = WaveField(src, h.values * np.exp(-(src.x**2) / 4))
        spec = forward_transform(h)
        target = make_grid(1, 4096, 12.0 * t)
        prof = mdfm_profile(spec, t, target)
        assert dg.l2_norm(prof) == pytest.approx(dg.l2_norm(spec.as_field()), rel=1e-10)

    def test_converges_to_free_wave(self):
        g = make_grid(1, 8192, 600.0)
        phi = gaussian(g, velocity=0.5)
        spec = forward_transform(phi)
        errs = [dg.l2_norm(free_flow(phi, t) - mdfm_profile(spec, t, g)) for t in (10, 20, 50)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 1e-2
