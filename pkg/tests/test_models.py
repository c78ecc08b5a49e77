import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdkp import kernels, models, spectral
from fdkp.errors import WrongModelOrder
from fdkp.models import ModelSpec
from fdkp.spectral import Grid, SpectralField


def _kern():
    return kernels.whitham_shallow()


def _spec_for(tag, mu=6.0, nu=1.0):
    kernel = _kern() if tag in models.KERNEL_TAGS else None
    return ModelSpec(tag, mu=mu, nu=nu, kernel=kernel)


class TestModelSpec:
    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError):
            ModelSpec("not_a_model")

    def test_kernel_required(self):
        with pytest.raises(ValueError):
            ModelSpec("whitham_fdkp", nu=1.0)

    def test_negative_mu_rejected(self):
        with pytest.raises(ValueError):
            ModelSpec("mkdv", mu=-1.0, nu=1.0)

    def test_zero_mu_allowed_for_linearized_runs(self):
        ModelSpec("mkdv", mu=0.0, nu=1.0)

    def test_kp_family_membership(self):
        assert _spec_for("cubic_kp").is_kp_family
        assert not _spec_for("mkdv").is_kp_family
        assert not _spec_for("whitham_fdkp").is_kp_family


class TestLinearPhaseSymbols:
    """Each symbol checked against an independently written formula."""

    K, L = 0.7, 0.4

    def _sym(self, tag):
        m = _spec_for(tag)
        return float(models.linear_phase_symbol(m, np.array(self.K),
                                                np.array(self.L)))

    def test_cubic_kp(self):
        k, l = self.K, self.L
        assert self._sym("cubic_kp") == pytest.approx(
            k - k ** 3 + l ** 2 / (2 * k), rel=1e-14)

    def test_whitham_fdkp(self):
        k, l = self.K, self.L
        expect = k * kernels.p_symbol(_kern(), k, l)
        assert self._sym("whitham_fdkp") == pytest.approx(expect, rel=1e-14)
        assert self._sym("bbm_fdkp") == pytest.approx(expect, rel=1e-14)

    def test_simplified_whitham_kp(self):
        k, l = self.K, self.L
        mm = kernels.m_symbol(_kern(), k, l)
        expect = (1.0 - mm / 2.0) * (k + l ** 2 / (2 * k))
        assert self._sym("simplified_whitham_kp") == pytest.approx(
            expect, rel=1e-14)

    def test_whitham_kp_local(self):
        k, l = self.K, self.L
        assert self._sym("whitham_kp_local") == pytest.approx(
            (1 - k ** 2) * (k + l ** 2 / (2 * k)), rel=1e-14)

    def test_bbm_kp(self):
        k, l = self.K, self.L
        assert self._sym("bbm_kp") == pytest.approx(
            (k + l ** 2 / (2 * k)) / (1 + k ** 2), rel=1e-14)

    def test_one_dimensional_tags(self):
        k = self.K
        assert self._sym("mkdv") == pytest.approx(k - k ** 3, rel=1e-14)
        assert self._sym("cubic_bbm") == pytest.approx(k / (1 + k ** 2),
                                                       rel=1e-14)
        assert self._sym("modified_whitham") == pytest.approx(
            k * np.sqrt(kernels.beta_hat(_kern(), k, 0.0)), rel=1e-14)
        assert self._sym("mod_fornberg_whitham") == pytest.approx(
            k / (1 + k ** 2), rel=1e-14)

    def test_fornberg_whitham_2d(self):
        k, l = self.K, self.L
        assert self._sym("fornberg_whitham_2d") == pytest.approx(
            (k + l ** 2 / (2 * k)) / (1 + k ** 2), rel=1e-14)

    def test_transverse_term_vanishes_at_zero_k(self):
        for tag in models.KP_FAMILY:
            m = _spec_for(tag)
            val = models.linear_phase_symbol(m, np.array(0.0), np.array(2.0))
            assert float(val) == 0.0

    def test_parent_is_second_order(self):
        with pytest.raises(WrongModelOrder):
            models.linear_phase_symbol(
                _spec_for("parent_nonlocal"), np.array(1.0), np.array(0.0))


class TestMassSymbol:
    def test_bbm_trick_masses(self):
        k, l = 1.3, 0.2
        m = _spec_for("bbm_kp")
        assert float(models.mass_symbol(m, np.array(k), np.array(l))) == \
            pytest.approx(1 + k ** 2, rel=1e-14)
        m = _spec_for("bbm_fdkp")
        mm = kernels.m_symbol(_kern(), k, l)
        assert float(models.mass_symbol(m, np.array(k), np.array(l))) == \
            pytest.approx(np.sqrt(1 + mm), rel=1e-14)

    def test_unit_mass_otherwise(self):
        m = _spec_for("cubic_kp")
        assert float(models.mass_symbol(m, np.array(1.3), np.array(0.2))) == 1.0


class TestNonlinearFlux:
    def test_single_mode_cubic_flux(self):
        # flux = -(mu/3) d/dx (v^3); for v = cos(x): v^3 = (3cos x + cos 3x)/4
        g = Grid(64, 1, 2 * np.pi, 1.0)
        m = _spec_for("mkdv")
        f = SpectralField.from_function(g, lambda x, y: np.cos(x))
        flux = models.nonlinear_flux(m, f)
        X, _ = g.meshgrid()
        expect = -(6.0 / 3.0) * (-0.75 * np.sin(X) - 0.75 * np.sin(3 * X))
        assert np.max(np.abs(flux.real - expect)) < 1e-12

    def test_bbm_mass_division(self):
        g = Grid(64, 1, 2 * np.pi, 1.0)
        f = SpectralField.from_function(g, lambda x, y: np.cos(x))
        plain = models.nonlinear_flux(_spec_for("mkdv"), f)
        massed = models.nonlinear_flux(_spec_for("cubic_bbm"), f)
        # each fourier mode divided by (1 + k^2)
        k = g.kx
        ratio = plain.spec[0, :] / np.where(np.abs(plain.spec[0, :]) > 1e-13,
                                            massed.spec[0, :], 1.0)
        assert abs(ratio[1] - (1 + k[1] ** 2)) < 1e-10
        assert abs(ratio[3] - (1 + k[3] ** 2)) < 1e-10

    def test_rhs_is_linear_plus_flux(self):
        g = Grid(64, 8, 10.0, 4.0)
        m = _spec_for("cubic_kp")
        rng = np.random.default_rng(5)
        f = SpectralField(g, real=0.1 * rng.standard_normal(g.real_shape))
        total = models.rhs(m, f).spec
        lam = models.linear_phase_symbol(m, g.KX, g.KY)
        lin = -1j * lam * f.spec
        flux = models.nonlinear_flux(m, f).spec
        assert np.max(np.abs(total - lin - flux)) < 1e-13


class TestParentModel:
    def test_symbols(self):
        m = _spec_for("parent_nonlocal")
        mass, stiff = models.parent_symbols(m, 1.2, 0.5)
        r2 = 1.2 ** 2 + 0.5 ** 2
        assert stiff == pytest.approx(r2, rel=1e-14)
        assert mass == pytest.approx(
            1.0 / kernels.beta_hat(_kern(), np.sqrt(r2)), rel=1e-12)

    def test_linear_rhs_single_mode(self):
        # w_tt hat = -beta * (k^2+l^2) w hat when the cubic bracket is absent
        g = Grid(32, 16, 8.0, 4.0)
        m = ModelSpec("parent_nonlocal", mu=0.0, kernel=_kern())
        k = 2 * np.pi * 2 / 8.0
        w = SpectralField.from_function(g, lambda x, y: np.cos(k * x))
        wt = SpectralField.zeros(g)
        dw, dwt = models.parent_rhs(m, w, wt)
        assert np.max(np.abs(dw.real - wt.real)) == 0.0
        beta = kernels.beta_hat(_kern(), k)
        expect = -beta * k ** 2 * w.real
        assert np.max(np.abs(dwt.real - expect)) < 1e-12

    def test_bracket_is_cubic(self):
        # scaling the displacement by s scales the nonlinear acceleration s^3
        g = Grid(32, 16, 8.0, 4.0)
        m = _spec_for("parent_nonlocal")
        rng = np.random.default_rng(11)
        w1 = SpectralField(g, real=0.01 * rng.standard_normal(g.real_shape))
        w2 = w1 * 2.0
        wt = SpectralField.zeros(g)
        lin = ModelSpec("parent_nonlocal", mu=0.0, kernel=_kern())
        nl1 = models.parent_rhs(m, w1, wt)[1].real - \
            models.parent_rhs(lin, w1, wt)[1].real
        nl2 = models.parent_rhs(m, w2, wt)[1].real - \
            models.parent_rhs(lin, w2, wt)[1].real
        assert np.max(np.abs(nl2 - 8.0 * nl1)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(tag=st.sampled_from(sorted(models.FIRST_ORDER_TAGS)),
       ik=st.integers(1, 10), il=st.integers(-5, 5))
def test_linear_rhs_matches_symbol_property(tag, ik, il):
    """mu = 0 rhs of a single mode is exactly -i Lambda vhat."""
    g = Grid(32, 16, 9.0, 6.0)
    kernel = _kern() if tag in models.KERNEL_TAGS else None
    m = ModelSpec(tag, mu=0.0, nu=1.0, kernel=kernel)
    k = 2 * np.pi * ik / 9.0
    l = 2 * np.pi * il / 6.0
    f = SpectralField.from_function(g, lambda x, y: np.cos(k * x + l * y))
    got = models.rhs(m, f).spec
    lam = models.linear_phase_symbol(m, g.KX, g.KY)
    expect = -1j * np.asarray(lam) * f.spec
    assert np.max(np.abs(got - expect)) < 1e-12
