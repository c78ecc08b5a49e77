import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdkp import spectral
from fdkp.spectral import Grid, SpectralField


@pytest.fixture
def grid2d():
    return Grid(64, 32, 10.0, 5.0)


class TestGrid:
    def test_spacing_and_area(self, grid2d):
        assert grid2d.x[1] - grid2d.x[0] == pytest.approx(10.0 / 64)
        assert grid2d.y[1] - grid2d.y[0] == pytest.approx(5.0 / 32)
        assert grid2d.area == pytest.approx(50.0)

    def test_wavenumbers(self, grid2d):
        assert grid2d.kx[0] == 0.0
        assert grid2d.kx[1] == pytest.approx(2.0 * np.pi / 10.0)
        assert grid2d.ky[-1] == pytest.approx(-2.0 * np.pi / 5.0)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            Grid(48, 1, 10.0, 1.0)
        with pytest.raises(ValueError):
            Grid(64, 24, 10.0, 1.0)

    def test_one_dimensional_grid(self):
        g = Grid(128, 1, 40.0, 1.0)
        assert g.real_shape == (1, 128)


class TestSpectralField:
    def test_round_trip(self, grid2d):
        rng = np.random.default_rng(0)
        data = rng.standard_normal(grid2d.real_shape)
        f = SpectralField(grid2d, real=data)
        back = SpectralField(grid2d, spec=f.spec.copy())
        assert np.max(np.abs(back.real - data)) < 1e-13

    def test_mean_is_zero_mode(self, grid2d):
        f = SpectralField.from_function(grid2d, lambda x, y: 3.0 + 0.0 * x)
        assert f.spec[0, 0] == pytest.approx(3.0)

    def test_arithmetic(self, grid2d):
        f = SpectralField.from_function(grid2d, lambda x, y: np.sin(x))
        g = (f + f) * 0.5 - f
        assert np.max(np.abs(g.real)) < 1e-14


class TestDerivatives:
    def test_x_derivative_exact_on_modes(self, grid2d):
        k = 2.0 * np.pi * 3 / 10.0
        f = SpectralField.from_function(grid2d, lambda x, y: np.sin(k * x))
        df = spectral.apply_multiplier(f, spectral.derivative_x_symbol(grid2d))
        X, _ = grid2d.meshgrid()
        assert np.max(np.abs(df.real - k * np.cos(k * X))) < 1e-12

    def test_y_derivative_exact_on_modes(self, grid2d):
        l = 2.0 * np.pi * 2 / 5.0
        f = SpectralField.from_function(grid2d, lambda x, y: np.cos(l * y))
        df = spectral.apply_multiplier(f, spectral.derivative_y_symbol(grid2d))
        _, Y = grid2d.meshgrid()
        assert np.max(np.abs(df.real + l * np.sin(l * Y))) < 1e-12

    def test_nyquist_zeroed_in_odd_derivative(self, grid2d):
        sym = spectral.derivative_x_symbol(grid2d)
        assert np.all(sym[:, -1] == 0.0)


class TestIntegrals:
    def test_integral_of_constant(self, grid2d):
        f = SpectralField.from_function(grid2d, lambda x, y: 2.0 + 0.0 * x)
        assert spectral.integral(f) == pytest.approx(2.0 * grid2d.area)

    def test_parseval(self, grid2d):
        rng = np.random.default_rng(1)
        data = rng.standard_normal(grid2d.real_shape)
        f = SpectralField(grid2d, real=data)
        direct = np.sum(data ** 2) * grid2d.area / (64 * 32)
        assert spectral.quadratic_integral(f) == pytest.approx(direct,
                                                               rel=1e-12)

    def test_quartic_integral(self, grid2d):
        f = SpectralField.from_function(grid2d,
                                        lambda x, y: np.cos(2 * np.pi * x / 10))
        # integral of cos^4 = (3/8) * area
        assert spectral.quartic_integral(f) == pytest.approx(
            0.375 * grid2d.area, rel=1e-12)


class TestDealiasing:
    def test_cubic_exact_for_single_mode(self):
        # cos^3 = (3 cos + cos 3)/4: padded evaluation must reproduce the
        # analytic coefficients with no aliased residue
        g = Grid(32, 1, 2.0 * np.pi, 1.0)
        f = SpectralField.from_function(g, lambda x, y: np.cos(3 * x))
        cube = spectral.cubic_dealias(f)
        X, _ = g.meshgrid()
        expect = 0.75 * np.cos(3 * X) + 0.25 * np.cos(9 * X)
        assert np.max(np.abs(cube.real - expect)) < 1e-13

    def test_aliasing_actually_removed(self):
        # mode 13 cubed reaches mode 39 > nyquist: naive pointwise cubing
        # aliases it back; the dealiased product must drop it instead
        g = Grid(64, 1, 2.0 * np.pi, 1.0)
        f = SpectralField.from_function(g, lambda x, y: np.cos(13 * x))
        cube = spectral.cubic_dealias(f)
        naive = SpectralField(g, real=f.real ** 3)
        alias_mode = 64 - 39  # where 39 folds on the coarse grid
        assert abs(naive.spec[0, alias_mode]) > 1e-3
        assert abs(cube.spec[0, alias_mode]) < 1e-15

    def test_pad_round_trip(self, grid2d):
        rng = np.random.default_rng(2)
        f = SpectralField(grid2d, real=rng.standard_normal(grid2d.real_shape))
        fine = spectral.padded_samples(f)
        back = spectral._truncate_spec(np.fft.rfft2(fine, norm="forward"),
                                       grid2d)
        # round trip exact except the dropped nyquist row/column
        spec = f.spec.copy()
        spec[grid2d.ny // 2, :] = 0.0
        spec[:, -1] = 0.0
        assert np.max(np.abs(back - spec)) < 1e-14


class TestZeroMass:
    def test_projects_kx_zero_column(self, grid2d):
        f = SpectralField.from_function(grid2d,
                                        lambda x, y: 1.0 + np.cos(2 * np.pi * y / 5))
        p = spectral.zero_mass_project(f)
        assert np.all(p.spec[:, 0] == 0.0)
        assert spectral.x_mean_removed(f) > 0.0
        assert spectral.x_mean_removed(p) == 0.0

    def test_idempotent(self, grid2d):
        f = SpectralField.from_function(grid2d, lambda x, y: np.cos(x) + 2.0)
        p1 = spectral.zero_mass_project(f)
        p2 = spectral.zero_mass_project(p1)
        assert np.max(np.abs(p1.spec - p2.spec)) == 0.0


class TestSnapshots:
    def test_round_trip(self, tmp_path, grid2d):
        rng = np.random.default_rng(3)
        f = SpectralField(grid2d, real=rng.standard_normal(grid2d.real_shape))
        path = tmp_path / "snap.bin"
        spectral.save_snapshot(path, f, time=1.5, model_tag="mkdv")
        loaded, meta = spectral.load_snapshot(path)
        assert meta["time"] == 1.5
        assert meta["model"] == "mkdv"
        assert loaded.grid == grid2d
        assert np.max(np.abs(loaded.real - f.real)) == 0.0


@settings(max_examples=30, deadline=None)
@given(ik=st.integers(0, 31), il=st.integers(-15, 15),
       amp=st.floats(-5.0, 5.0))
def test_single_mode_round_trip_property(ik, il, amp):
    g = Grid(64, 32, 7.0, 3.0)
    k = 2.0 * np.pi * ik / 7.0
    l = 2.0 * np.pi * il / 3.0
    f = SpectralField.from_function(g, lambda x, y: amp * np.cos(k * x + l * y))
    back = SpectralField(g, spec=f.spec.copy())
    assert np.max(np.abs(back.real - f.real)) < 1e-12 * max(1.0, abs(amp))
