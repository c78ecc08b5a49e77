"""The eleven wave models: linear phase symbols, mass operators and
nonlinear fluxes, exposed as a uniform semi-discrete right-hand side.

First-order models evolve the strain v = w_x as vhat_t = -i Lam(k,l) vhat
plus a cubic flux.  The parent nonlocal equation is second order in time
and is stepped as the system (w, w_t).  All l^2/(2k) terms are defined as
0 at k = 0; the KP-family models pair this convention with a zero-mass
projection of the data.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels, spectral
from .errors import WrongModelOrder
from .kernels import KernelSpec
from .spectral import SpectralField

PARENT_NONLOCAL = "parent_nonlocal"
CUBIC_KP = "cubic_kp"
WHITHAM_FDKP = "whitham_fdkp"
BBM_FDKP = "bbm_fdkp"
SIMPLIFIED_WHITHAM_KP = "simplified_whitham_kp"
WHITHAM_KP_LOCAL = "whitham_kp_local"
BBM_KP = "bbm_kp"
MKDV = "mkdv"
CUBIC_BBM = "cubic_bbm"
MODIFIED_WHITHAM = "modified_whitham"
MOD_FORNBERG_WHITHAM = "mod_fornberg_whitham"
FORNBERG_WHITHAM_2D = "fornberg_whitham_2d"

ALL_TAGS = (
    PARENT_NONLOCAL, CUBIC_KP, WHITHAM_FDKP, BBM_FDKP, SIMPLIFIED_WHITHAM_KP,
    WHITHAM_KP_LOCAL, BBM_KP, MKDV, CUBIC_BBM, MODIFIED_WHITHAM,
    MOD_FORNBERG_WHITHAM, FORNBERG_WHITHAM_2D,
)
FIRST_ORDER_TAGS = tuple(t for t in ALL_TAGS if t != PARENT_NONLOCAL)

# models whose l^2/(2k) (or D_x^{-1}) structure demands zero-mass data
KP_FAMILY = (CUBIC_KP, SIMPLIFIED_WHITHAM_KP, WHITHAM_KP_LOCAL, BBM_KP,
             FORNBERG_WHITHAM_2D)

# tags whose symbols involve the kernel
KERNEL_TAGS = (PARENT_NONLOCAL, WHITHAM_FDKP, BBM_FDKP,
               SIMPLIFIED_WHITHAM_KP, MODIFIED_WHITHAM)

# BBM-style models: the cubic flux is divided by the mass symbol
_BBM_MASS_TAGS = (BBM_FDKP, BBM_KP, CUBIC_BBM)


@dataclass(frozen=True)
class ModelSpec:
    tag: str
    mu: float = 1.0
    nu: float | None = None
    kernel: KernelSpec | None = None

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown model tag {self.tag!r}")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative (0 disables the "
                             "nonlinearity)")
        if self.tag in KERNEL_TAGS and self.kernel is None:
            raise ValueError(f"model {self.tag} requires a kernel")
        if self.nu is not None and self.nu <= 0:
            raise ValueError("nu must be positive where used")

    @property
    def nu_value(self):
        if self.nu is not None:
            return self.nu
        if self.kernel is None:
            raise ValueError(f"model {self.tag} has neither nu nor kernel")
        return kernels.nu_coefficient(self.kernel)

    @property
    def is_kp_family(self):
        return self.tag in KP_FAMILY


def _l2_over_2k(k, l):
    """l^2 / (2k) with the zero-mass convention 0 at k = 0."""
    ksafe = np.where(k == 0.0, 1.0, k)
    return np.where(k == 0.0, 0.0, l * l / (2.0 * ksafe))


def kp_special_p_symbol(nu, k, l):
    """Symbol 1 - nu k^2 + l^2/(2 k^2) of the special local operator that
    collapses the Whitham-type full dispersion model onto the cubic KP
    equation; the k = 0 ray takes the zero-mass convention value 0."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    ksafe = np.where(k == 0.0, 1.0, k)
    out = np.where(k == 0.0, 0.0,
                   1.0 - nu * k * k + l * l / (2.0 * ksafe * ksafe))
    return float(out) if out.ndim == 0 else out


def linear_phase_symbol(model, k, l=0.0):
    """Phase symbol Lam(k,l) of a first-order model: vhat_t = -i Lam vhat.

    Odd in k, even in l.  Raises WrongModelOrder for the second-order
    parent equation.
    """
    if model.tag == PARENT_NONLOCAL:
        raise WrongModelOrder("the parent equation is second order in time")
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    tag = model.tag
    if tag in (WHITHAM_FDKP, BBM_FDKP):
        out = k * kernels.p_symbol(model.kernel, k, l)
    elif tag == CUBIC_KP:
        nu = model.nu_value
        out = k - nu * k ** 3 + _l2_over_2k(k, l)
    elif tag == SIMPLIFIED_WHITHAM_KP:
        m = kernels.m_symbol(model.kernel, k, l)
        out = (1.0 - 0.5 * m) * (k + _l2_over_2k(k, l))
    elif tag == WHITHAM_KP_LOCAL:
        nu = model.nu_value
        out = (1.0 - nu * k * k) * (k + _l2_over_2k(k, l))
    elif tag == BBM_KP:
        nu = model.nu_value
        out = (k + _l2_over_2k(k, l)) / (1.0 + nu * k * k)
    elif tag == MKDV:
        nu = model.nu_value
        out = k - nu * k ** 3
    elif tag == CUBIC_BBM:
        nu = model.nu_value
        out = k / (1.0 + nu * k * k)
    elif tag == MODIFIED_WHITHAM:
        b = kernels.check_positive(model.kernel, k, 0.0)
        out = k * np.sqrt(b)
    elif tag == MOD_FORNBERG_WHITHAM:
        out = k / (1.0 + k * k)
    elif tag == FORNBERG_WHITHAM_2D:
        out = (k + _l2_over_2k(k, l)) / (1.0 + k * k)
    else:  # pragma: no cover
        raise ValueError(tag)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def mass_symbol(model, k, l=0.0):
    """Mass (left-operator) symbol dividing the cubic flux; 1 except for
    the BBM-style models."""
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    if model.tag == BBM_FDKP:
        out = np.sqrt(1.0 + kernels.m_symbol(model.kernel, k, l))
    elif model.tag in (BBM_KP, CUBIC_BBM):
        out = 1.0 + model.nu_value * k * k
    else:
        out = np.ones(np.broadcast(k, l).shape)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def parent_symbols(model, k, l=0.0):
    """(mass, stiffness) symbols of the parent equation: mass = 1 + m,
    stiffness = k^2 + l^2; omega^2 = stiffness / mass."""
    if model.tag != PARENT_NONLOCAL:
        raise WrongModelOrder(f"parent_symbols needs {PARENT_NONLOCAL}")
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    mass = 1.0 + np.asarray(kernels.m_symbol(model.kernel, k, l))
    stiff = k * k + l * l
    if mass.ndim == 0:
        return float(mass), float(stiff)
    return mass, np.broadcast_to(stiff, mass.shape).astype(float)


class ModelEvaluator:
    """Grid-bound right-hand-side evaluator with precomputed symbols.

    Owns its scratch arrays; use one evaluator per worker.
    """

    def __init__(self, model, grid):
        self.model = model
        self.grid = grid
        KX, KY = grid.KX, grid.KY
        self.ikx = spectral.derivative_x_symbol(grid)
        if model.tag == PARENT_NONLOCAL:
            self.beta = np.asarray(kernels.beta_hat(model.kernel, KX, KY))
            self.stiffness = KX ** 2 + KY ** 2
            self.iky = spectral.derivative_y_symbol(grid)
            self.lam = None
        else:
            self.lam = np.asarray(linear_phase_symbol(model, KX, KY))
            self.inv_mass = 1.0 / np.asarray(mass_symbol(model, KX, KY))

    def flux_spec(self, vhat):
        """Cubic flux -(mu/3) ik (v^3)hat / mass on raw coefficients."""
        grid, model = self.grid, self.model
        v = np.fft.irfft2(spectral._pad_spec(vhat, grid),
                          s=self._fine_shape(), norm="forward")
        cube = spectral.dealiased_product_spec(v * v * v, grid)
        out = -(model.mu / 3.0) * self.ikx * cube
        out *= self.inv_mass
        return out

    def rhs_spec(self, vhat):
        """Semi-discrete time derivative on raw coefficients."""
        return -1j * self.lam * vhat + self.flux_spec(vhat)

    def _fine_shape(self):
        g = self.grid
        return (2 * g.ny if g.ny > 1 else 1, 2 * g.nx)

    def parent_rhs_spec(self, what, wthat):
        """Right-hand side of the first-order system for (w, w_t):
        returns (w_t hat, w_tt hat)."""
        grid, model = self.grid, self.model
        fine = self._fine_shape()

        def fine_samples(symbol):
            return np.fft.irfft2(spectral._pad_spec(symbol * what, grid),
                                 s=fine, norm="forward")

        wx = fine_samples(self.ikx)
        wy = fine_samples(self.iky)
        wxx = fine_samples(self.ikx ** 2)
        wxy = fine_samples(self.ikx * self.iky)
        wyy = fine_samples(self.iky ** 2)
        bracket = ((3.0 * wx ** 2 + wy ** 2) * wxx
                   + 4.0 * wx * wy * wxy
                   + (wx ** 2 + 3.0 * wy ** 2) * wyy)
        nl = spectral.dealiased_product_spec(bracket, grid)
        wtt = self.beta * (-self.stiffness * what
                           + (2.0 * model.mu / 3.0) * nl)
        return wthat, wtt


def nonlinear_flux(model, field):
    """Nonlinear contribution to v_t (first-order models) as a field."""
    ev = ModelEvaluator(model, field.grid)
    if model.tag == PARENT_NONLOCAL:
        raise WrongModelOrder("use parent_rhs for the second-order model")
    return SpectralField(field.grid, spec=ev.flux_spec(field.spec))


def rhs(model, field):
    """Semi-discrete time derivative of a first-order model as a field."""
    ev = ModelEvaluator(model, field.grid)
    if model.tag == PARENT_NONLOCAL:
        raise WrongModelOrder("use parent_rhs for the second-order model")
    return SpectralField(field.grid, spec=ev.rhs_spec(field.spec))


def parent_rhs(model, w, wt):
    """Time derivative of the (w, w_t) system as a pair of fields."""
    ev = ModelEvaluator(model, w.grid)
    dw, dwt = ev.parent_rhs_spec(w.spec, wt.spec)
    return (SpectralField(w.grid, spec=dw.copy()),
            SpectralField(w.grid, spec=dwt))
