"""Closed-form line solitary waves and transverse perturbation seeding.

Only the local simplified families (modified KdV and cubic BBM) have
closed-form sech solitary waves; the full dispersion models are seeded
with these as approximate initial data.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainTooNarrow, IncommensurateWavenumber, SubcriticalSpeed
from .spectral import SpectralField

MKDV_FAMILY = "mkdv"
BBM_FAMILY = "bbm"


@dataclass(frozen=True)
class SolitonParams:
    """Parameters of the sech solitary wave v = alpha sech(kappa (x - ct)).

    mkdv family: alpha^2 = 6(c-1)/mu, kappa^2 = (c-1)/nu.
    bbm family:  alpha^2 = 6(c-1)/mu, kappa^2 = (c-1)/(nu c).
    """

    family: str
    c: float
    mu: float
    nu: float
    alpha: float
    kappa: float


def soliton_params(family, c, mu, nu):
    """Build SolitonParams from (family, c, mu, nu); requires c > 1."""
    if family not in (MKDV_FAMILY, BBM_FAMILY):
        raise ValueError(f"unknown soliton family {family!r}")
    if c <= 1.0:
        raise SubcriticalSpeed(f"solitary waves require c > 1, got c = {c}")
    if mu <= 0 or nu <= 0:
        raise ValueError("mu and nu must be positive")
    alpha = np.sqrt(6.0 * (c - 1.0) / mu)
    if family == MKDV_FAMILY:
        kappa = np.sqrt((c - 1.0) / nu)
    else:
        kappa = np.sqrt((c - 1.0) / (nu * c))
    return SolitonParams(family, float(c), float(mu), float(nu),
                         float(alpha), float(kappa))


def _wrapped_xi(grid, x0):
    """Traveling-frame coordinate x - x0 folded into [-Lx/2, Lx/2)."""
    X, _ = grid.meshgrid()
    return (X - x0 + 0.5 * grid.lx) % grid.lx - 0.5 * grid.lx


def _check_tail(params, grid):
    tail = params.alpha / np.cosh(params.kappa * grid.lx / 2.0)
    if tail >= 1e-12:
        raise DomainTooNarrow(
            f"sech tail {tail:.3g} at Lx/2 exceeds 1e-12; "
            f"need Lx >= 56/kappa = {56.0 / params.kappa:.3g}"
        )


def soliton_profile(params, xi):
    """R-scaled profile alpha sech(kappa xi)."""
    return params.alpha / np.cosh(params.kappa * xi)


def line_soliton_field(params, grid, x0=None, zero_mass=False):
    """y-uniform field alpha sech(kappa (x - x0)); x0 defaults to the
    domain center.  ``zero_mass=True`` removes the x-mean (KP-family use).
    """
    if x0 is None:
        x0 = 0.5 * grid.lx
    if params.alpha != 0.0:
        _check_tail(params, grid)
    xi = _wrapped_xi(grid, x0)
    field = SpectralField(grid, real=soliton_profile(params, xi))
    if zero_mass:
        from .spectral import zero_mass_project
        field = zero_mass_project(field)
    return field


def z0_profile(params, xi):
    """Translation-mode perturbation shape R'(xi), normalized to unit max."""
    u = params.kappa * xi
    z = -np.tanh(u) / np.cosh(u)   # R'/kappa
    return z / np.max(np.abs(z))


def z1_profile(params, xi):
    """First-order perturbation shape (arbitrary overall scale removed by
    unit-max normalization; the free translation-mode coefficient is 0).

    mkdv family: (kappa xi - coth(kappa xi)) R'(xi), which by
    tanh*coth = 1 equals -kappa sech(u) (u tanh u - 1) -- smooth at 0.
    bbm family: (kappa^2 nu - 1) xi R'(xi) + R'(xi) coth(kappa xi)/kappa,
    whose second term is -sech(u).
    """
    u = params.kappa * xi
    sech = 1.0 / np.cosh(u)
    if params.family == MKDV_FAMILY:
        z = -sech * (u * np.tanh(u) - 1.0)
    else:
        k2nu = params.kappa ** 2 * params.nu
        z = (k2nu - 1.0) * u * (-sech * np.tanh(u)) - sech
    return z / np.max(np.abs(z))


def transverse_mode_number(grid, lam, tol=1e-9):
    """Integer n >= 1 with lam = 2 pi n / Ly, or raise."""
    n = lam * grid.ly / (2.0 * np.pi)
    n_round = int(round(n))
    if n_round < 1 or abs(n - n_round) > tol:
        raise IncommensurateWavenumber(
            f"lambda = {lam:g} is not 2*pi*n/Ly for integer n >= 1 "
            f"(Ly = {grid.ly:g})"
        )
    return n_round


def perturbed_soliton(params, grid, lam, delta, profile="z0", x0=None):
    """Line soliton plus delta * z(x - x0) * cos(lam y): a real standing
    seed of the e^{+-i lam y} perturbation pair."""
    if x0 is None:
        x0 = 0.5 * grid.lx
    base = line_soliton_field(params, grid, x0=x0)
    if delta == 0.0:
        return base
    transverse_mode_number(grid, lam)
    xi = _wrapped_xi(grid, x0)
    if profile == "z0":
        z = z0_profile(params, xi)
    elif profile == "z1":
        z = z1_profile(params, xi)
    else:
        raise ValueError(f"unknown perturbation profile {profile!r}")
    _, Y = grid.meshgrid()
    return SpectralField(grid, real=base.real + delta * z * np.cos(lam * Y))
