"""Transverse instability of line solitary waves, three ways.

1. Closed-form first-order eigenvalue coefficients from the perturbation
   expansion (omega1_squared, solvability_residual, inner_product_table).
2. A discrete generalized eigenvalue pencil for the linearized
   fourth-order ODE on a periodic Fourier-collocation grid (build_pencil,
   growth_rates, fit_omega1).
3. Growth-rate measurement from direct simulation of a perturbed line
   soliton (measure_growth).
"""

from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from .errors import (DomainTooNarrow, EigensolveFailure, NoGrowthWindow,
                     SubcriticalSpeed)
from .waves import transverse_mode_number

WHITHAM = "whitham"
BBM = "bbm"


def _check_family(family):
    if family not in (WHITHAM, BBM):
        raise ValueError(f"unknown stability family {family!r}")


def _check_speed(c):
    if c <= 1.0:
        raise SubcriticalSpeed(f"need c > 1, got c = {c}")


def omega1_squared(family, c):
    """First-order eigenvalue squared of the long-wavelength expansion.

    whitham family: (2/3)(c-1)(c-4) -- positive (unstable) for c > 4.
    bbm family: -6 c^2 (c-1) / (4(2c+1)(c-1) + 3) -- negative for all
    c > 1 (no first-order instability).
    """
    _check_family(family)
    _check_speed(c)
    if family == WHITHAM:
        return (2.0 / 3.0) * (c - 1.0) * (c - 4.0)
    return -6.0 * c ** 2 * (c - 1.0) / (4.0 * (2.0 * c + 1.0) * (c - 1.0) + 3.0)


def solvability_residual(family, c, nu, omega1):
    """Residual of the order-lambda^2 solvability condition with a0 = 1;
    zero iff omega1 satisfies the condition."""
    _check_family(family)
    _check_speed(c)
    if family == WHITHAM:
        kappa = np.sqrt((c - 1.0) / nu)
        return (kappa / 3.0 - omega1 ** 2 / (2.0 * kappa ** 3 * nu ** 2)
                - 1.0 / (kappa * nu))
    kappa = np.sqrt((c - 1.0) / (nu * c))
    k2nu = kappa ** 2 * nu
    return (omega1 ** 2 * (k2nu - 3.0) / (6.0 * kappa * nu * c ** 2)
            - omega1 ** 2 * (k2nu + 1.0) / (2.0 * kappa ** 3 * nu ** 2 * c ** 2)
            - 1.0 / (kappa * nu * c))


def _antiderivative_of_sech(kappa, xi):
    """Odd antiderivative r of R = sech(kappa xi): the gudermannian
    (2/kappa) atan(tanh(kappa xi / 2))."""
    return (2.0 / kappa) * np.arctan(np.tanh(0.5 * kappa * xi))


def inner_product_table(kappa, nu=1.0, omega1=1.0, a0=1.0,
                        half_width_over_kappa=40.0):
    """The nine inner products of the perturbation analysis, computed by
    adaptive quadrature on |kappa xi| <= 40, next to their closed forms.

    Returns a list of (name, computed, closed_form) tuples.  The z1 row
    uses the explicit first-order profile with free translation
    coefficient 0 and the supplied (nu, omega1) scale.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    W = half_width_over_kappa / kappa

    def R(xi):
        return 1.0 / np.cosh(kappa * xi)

    def Rp(xi):
        u = kappa * xi
        return -kappa * np.tanh(u) / np.cosh(u)

    def Rpp(xi):
        u = kappa * xi
        return kappa ** 2 * (np.tanh(u) ** 2 - 1.0 / np.cosh(u) ** 2) / np.cosh(u)

    def r(xi):
        return _antiderivative_of_sech(kappa, xi)

    s = omega1 * a0 / (2.0 * kappa ** 3 * nu)

    def z1p(xi):
        # z1 = s * kappa * sech(u) (u tanh u - 1), using tanh*coth = 1 to
        # remove the apparent coth singularity; differentiate in u
        u = kappa * xi
        sech = 1.0 / np.cosh(u)
        th = np.tanh(u)
        g = -sech * th * (u * th - 1.0) + sech * (th + u * sech ** 2)
        return s * kappa ** 2 * g

    def quad(f):
        val, _ = scipy.integrate.quad(f, -W, W, limit=400)
        return val

    rows = [
        ("<R,R>", quad(lambda x: R(x) * R(x)), 2.0 / kappa),
        ("<R',R>", quad(lambda x: Rp(x) * R(x)), 0.0),
        ("<R'',R>", quad(lambda x: Rpp(x) * R(x)), -2.0 * kappa / 3.0),
        ("<kxi R',R>", quad(lambda x: kappa * x * Rp(x) * R(x)), -1.0),
        # R' coth(kappa xi) = -kappa sech: smooth, no singularity to patch
        ("<R'coth,R>", quad(lambda x: -kappa * R(x) ** 2), -2.0),
        ("<z0,r>", quad(lambda x: a0 * Rp(x) * r(x)), -2.0 * a0 / kappa),
        ("<z0',r>", quad(lambda x: a0 * Rpp(x) * r(x)), 0.0),
        ("<z0'',r>", quad(lambda x: a0 * _rppp(kappa, x) * r(x)),
         2.0 * kappa * a0 / 3.0),
        ("<z1',r>", quad(lambda x: z1p(x) * r(x)),
         omega1 * a0 / (2.0 * kappa ** 3 * nu)),
    ]
    return rows


def _rppp(kappa, xi):
    """Third derivative of sech(kappa xi)."""
    u = kappa * xi
    sech = 1.0 / np.cosh(u)
    th = np.tanh(u)
    return kappa ** 3 * sech * th * (5.0 * sech ** 2 - th ** 2)


@dataclass
class EigenPencil:
    """Generalized problem A z = Omega B z on the zero-mean subspace of a
    1D periodic Fourier-collocation grid."""
    family: str
    c: float
    nu: float
    lam: float
    n_modes: int
    length: float
    kappa: float
    A: np.ndarray
    B: np.ndarray
    basis: np.ndarray
    xi: np.ndarray


def _fourier_diff_matrices(n, length):
    """Dense differentiation matrices D, D2, D3 from FFT collocation;
    Nyquist is zeroed in the odd-order matrices."""
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
    k_odd = k.copy()
    k_odd[n // 2] = 0.0
    eye = np.eye(n)
    F = np.fft.fft(eye, axis=0)

    def mat(sym):
        return np.real(np.fft.ifft(sym[:, None] * F, axis=0))

    D = mat(1j * k_odd)
    D2 = mat(-(k ** 2).astype(complex))
    D3 = mat(-1j * k_odd ** 3)
    return D, D2, D3


def sech_operator_matrix(kappa, n, length):
    """Discrete L = d^2/dxi^2 + kappa^2 (6 sech^2(kappa xi) - 1) on the
    periodic grid centered at xi = 0."""
    _, D2, _ = _fourier_diff_matrices(n, length)
    xi = -0.5 * length + np.arange(n) * length / n
    pot = kappa ** 2 * (6.0 / np.cosh(kappa * xi) ** 2 - 1.0)
    return D2 + np.diag(pot), xi


def build_pencil(family, c, nu, lam, n_modes=512, length=None):
    """Assemble the matrices of the linearized transverse-perturbation
    ODE restricted to zero-mean grid functions.

    whitham: [nu D^2 L - (nu lam^2/2) D^2 - (lam^2/2) I] z = -Omega D z.
    bbm: [D^2 L - lam^2/(2 nu c) I] z = Omega [(1/c) D^3 - 1/(nu c) D] z.
    """
    _check_family(family)
    _check_speed(c)
    if family == WHITHAM:
        kappa = np.sqrt((c - 1.0) / nu)
    else:
        kappa = np.sqrt((c - 1.0) / (nu * c))
    if length is None:
        length = max(56.0 / kappa, 80.0)
    if length < 56.0 / kappa:
        raise DomainTooNarrow(
            f"length {length:g} < 56/kappa = {56.0 / kappa:g}")
    n = n_modes
    D, D2, D3 = _fourier_diff_matrices(n, length)
    Lmat, xi = sech_operator_matrix(kappa, n, length)
    eye = np.eye(n)
    if family == WHITHAM:
        A = nu * (D2 @ Lmat) - (nu * lam ** 2 / 2.0) * D2 - (lam ** 2 / 2.0) * eye
        B = -D
    else:
        A = D2 @ Lmat - (lam ** 2 / (2.0 * nu * c)) * eye
        B = (1.0 / c) * D3 - (1.0 / (nu * c)) * D
    # Deflate the translation mode R': the discrete residual of L on R'
    # otherwise splits the Omega = 0 Jordan pair into a spurious
    # +-sqrt(eps) real pair that pollutes the leading growth rate.
    u = kappa * xi
    rp = -kappa * np.tanh(u) / np.cosh(u)
    resid = D2 @ (Lmat @ rp)
    if family == WHITHAM:
        resid = nu * resid
    A = A - np.outer(resid, rp) / (rp @ rp)
    # zero-mean restriction: drops the constant mode that makes B singular
    # and mirrors the decay condition of the line problem
    basis = scipy.linalg.null_space(np.ones((1, n)))
    A_r = basis.T @ A @ basis
    B_r = basis.T @ B @ basis
    return EigenPencil(family, c, nu, lam, n, length, kappa,
                       A_r, B_r, basis, xi)


def growth_rates(pencil, with_vectors=False):
    """Eigenvalues Omega of the pencil, sorted by descending real part.

    The spectrum is closed under conjugation (real matrices); non-finite
    eigenvalues from the restriction are dropped.
    """
    try:
        vals, vecs = scipy.linalg.eig(pencil.A, pencil.B, right=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigensolveFailure(str(exc)) from exc
    finite = np.isfinite(vals)
    vals = vals[finite]
    vecs = vecs[:, finite]
    order = np.argsort(-vals.real)
    vals = vals[order]
    if with_vectors:
        return vals, pencil.basis @ vecs[:, order]
    return vals


def leading_growth_rate(family, c, nu, lam, n_modes=512, length=None):
    pencil = build_pencil(family, c, nu, lam, n_modes, length)
    return float(growth_rates(pencil)[0].real)


def fit_omega1(family, c, nu, lambda_list, n_modes=512, length=None,
               length_scales=(1.0, 1.25, 1.5, 1.75)):
    """Estimate the first-order coefficient of Omega = a lam + b lam^2 by
    least squares on the leading real parts of the pencil spectra.

    On a periodic grid the soliton branch collides with discrete
    radiation modes and sheds small spurious real "bubbles" whose
    position moves with the domain length, while genuine eigenvalues of
    the line problem persist.  Each rate is therefore taken as the
    minimum leading real part over an ensemble of domain lengths
    (length * length_scales).
    """
    lams = np.asarray(list(lambda_list), dtype=float)
    if lams.size < 3:
        raise ValueError("need at least 3 transverse wavenumbers")
    if np.any(lams > 0.2):
        raise ValueError("fit restricted to lambda <= 0.2")
    if length is None:
        if family == WHITHAM:
            kappa = np.sqrt((c - 1.0) / nu)
        else:
            kappa = np.sqrt((c - 1.0) / (nu * c))
        length = max(56.0 / kappa, 80.0)
    rates = np.array([
        min(leading_growth_rate(family, c, nu, lam, n_modes, s * length)
            for s in length_scales)
        for lam in lams])
    design = np.column_stack([lams, lams ** 2])
    coef, *_ = np.linalg.lstsq(design, rates, rcond=None)
    return float(coef[0])


def transverse_band_series(trajectory, lam):
    """L2-over-x amplitude of the ky = +-lam band in each snapshot, plus
    the max-abs of the band field (linearity monitor)."""
    grid = trajectory.grid
    n = transverse_mode_number(grid, lam)
    amps = []
    maxima = []
    for f in trajectory.fields:
        spec = f.spec
        band = np.zeros_like(spec)
        band[n, :] = spec[n, :]
        band[grid.ny - n, :] = spec[grid.ny - n, :]
        power = np.sum(grid.parseval_weights * np.abs(band) ** 2) * grid.area
        amps.append(np.sqrt(power))
        pert = np.fft.irfft2(band, s=grid.real_shape, norm="forward")
        maxima.append(float(np.max(np.abs(pert))))
    return np.asarray(trajectory.times), np.asarray(amps), np.asarray(maxima)


def measure_growth(trajectory, lam, alpha=None, linear_fraction=0.05,
                   floor_factor=10.0, min_points=5):
    """Fit the exponential growth rate of the seeded transverse mode.

    Fits log A(t) over the window where the band stays in the linear
    regime (max perturbation below linear_fraction * alpha) and above
    floor_factor times the initial amplitude.  Returns (rate, r_squared,
    t_start, t_end).
    """
    times, amps, maxima = transverse_band_series(trajectory, lam)
    if alpha is None:
        alpha = float(np.max(np.abs(trajectory.fields[0].real)))
    floor = floor_factor * amps[0]
    ceil = linear_fraction * alpha
    mask = (amps > floor) & (maxima < ceil) & (amps > 0)
    if np.count_nonzero(mask) < min_points:
        raise NoGrowthWindow(
            f"only {np.count_nonzero(mask)} usable points between the noise "
            f"floor and the linear-regime bound")
    t = times[mask]
    logA = np.log(amps[mask])
    design = np.column_stack([t, np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(design, logA, rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((logA - fitted) ** 2))
    ss_tot = float(np.sum((logA - logA.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return float(coef[0]), r2, float(t[0]), float(t[-1])
