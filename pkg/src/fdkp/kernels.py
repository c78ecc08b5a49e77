"""Kernel symbols of the nonlocal medium and quantities derived from them.

A kernel is described entirely by its radial Fourier symbol ``bhat``,
normalized so that bhat(0,0) = 1.  Everything downstream -- the symbols
m and p, the long-wave dispersion coefficient nu, and the dispersion
relations -- is computed from bhat alone; the physical-space kernel is
never materialized.
"""

import warnings

import numpy as np

from .errors import NonPositiveSymbol, SingularLongWave

WHITHAM_SHALLOW = "whitham_shallow"
GREEN_EXPONENTIAL = "green_exponential"
CUSTOM = "custom"

_FAMILIES = (WHITHAM_SHALLOW, GREEN_EXPONENTIAL, CUSTOM)


def _tanhc(r):
    """tanh(r)/r with the removable singularity at r = 0 patched by series."""
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < 1e-4
    rs = np.where(small, 1.0, r)
    out = np.tanh(rs) / rs
    r2 = r * r
    # degree-6 Taylor polynomial of tanh(r)/r
    series = 1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 15.0 - 17.0 * r2 * r2 * r2 / 315.0
    return np.where(small, series, out)


class KernelSpec:
    """Radial Fourier symbol bhat defining the nonlocal medium.

    family is one of ``whitham_shallow`` (bhat = tanh(r)/r),
    ``green_exponential`` (bhat = 1/(1+r^2)^2) or ``custom`` with a
    user-supplied radial function bhat0(r) satisfying bhat0(0) = 1.
    """

    def __init__(self, family, radial=None, name=None):
        if family not in _FAMILIES:
            raise ValueError(f"unknown kernel family {family!r}")
        if family == CUSTOM:
            if radial is None:
                raise ValueError("custom kernels require a radial callback")
            v0 = float(np.asarray(radial(0.0)))
            if abs(v0 - 1.0) > 1e-12:
                raise ValueError(f"custom kernel violates bhat(0)=1: got {v0}")
        self.family = family
        self.radial = radial
        self.name = name or family

    def __repr__(self):
        return f"KernelSpec({self.name})"


def whitham_shallow():
    return KernelSpec(WHITHAM_SHALLOW)


def green_exponential():
    return KernelSpec(GREEN_EXPONENTIAL)


def custom_radial(radial, name="custom"):
    return KernelSpec(CUSTOM, radial=radial, name=name)


def beta_hat(kernel, k, l=0.0):
    """Evaluate the kernel symbol bhat at wavenumbers (k, l).

    The symbol is radial: only r = sqrt(k^2 + l^2) matters.  Accepts
    scalars or arrays with broadcasting.
    """
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    r = np.hypot(k, l)
    if kernel.family == WHITHAM_SHALLOW:
        out = _tanhc(r)
    elif kernel.family == GREEN_EXPONENTIAL:
        out = 1.0 / (1.0 + r * r) ** 2
    else:
        out = np.asarray(kernel.radial(r), dtype=float)
    if out.ndim == 0:
        return float(out)
    return out


def check_positive(kernel, k, l=0.0):
    """Raise NonPositiveSymbol unless bhat > 0 at every queried wavenumber."""
    b = np.asarray(beta_hat(kernel, k, l))
    if np.any(b <= 0.0):
        raise NonPositiveSymbol(
            f"kernel {kernel.name} has non-positive symbol (min {b.min():g})"
        )
    return b


def m_symbol(kernel, k, l=0.0):
    """Symbol m(k,l) = 1/bhat(k,l) - 1 of the operator that carries the
    nonlocality; m(0,0) = 0 by normalization."""
    b = check_positive(kernel, k, l)
    out = 1.0 / b - 1.0
    if out.ndim == 0:
        return float(out)
    return out


def p_symbol(kernel, k, l=0.0):
    """Symbol p(k,l) = sqrt((1 + l^2/k^2) * bhat(k,l)) of the full
    dispersion operator.

    The k = 0 ray is genuinely singular; by convention the value there is
    0.  Dynamics never exercises the convention because zero-mass data is
    enforced for the models that carry l^2/k^2 terms.
    """
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    b = np.asarray(beta_hat(kernel, k, l))
    if np.any(b < 0.0):
        raise NonPositiveSymbol(f"kernel {kernel.name} has negative symbol")
    ksafe = np.where(k == 0.0, 1.0, k)
    out = np.sqrt((1.0 + (l / ksafe) ** 2) * b)
    out = np.where(k == 0.0, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def nu_coefficient(kernel, h=1e-3):
    """Long-wave dispersion coefficient nu = -(1/4) d^2 bhat/dk^2 (0,0).

    Computed by central differences on bhat(., 0) with one Richardson
    extrapolation level (steps h and h/2), giving a fourth-order result.
    Numerical differentiation is used even for the built-in kernels, so
    custom kernels are supported uniformly.
    """

    def second(hh):
        return (beta_hat(kernel, hh) - 2.0 * beta_hat(kernel, 0.0)
                + beta_hat(kernel, -hh)) / (hh * hh)

    d2 = (4.0 * second(h / 2.0) - second(h)) / 3.0
    nu = -0.25 * d2
    if nu < 0.0:
        warnings.warn(
            f"kernel {kernel.name} has nu = {nu:g} < 0; models assume nu > 0",
            stacklevel=2,
        )
    return nu


def omega(kernel, k, l=0.0, mode="full", nu=None):
    """Dispersion relation omega(k, l).

    ``mode='full'`` evaluates the exact positive branch
    sqrt((k^2 + l^2) * bhat); ``mode='kp-longwave'`` evaluates the
    truncated long-wave expansion k (1 - nu k^2 + l^2 / (2 k^2)), which
    is singular at k = 0 -- exactly the singularity the full dispersion
    models remove.
    """
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    if mode == "full":
        b = np.asarray(beta_hat(kernel, k, l))
        if np.any(b < 0.0):
            raise NonPositiveSymbol(f"kernel {kernel.name} has negative symbol")
        out = np.sqrt((k * k + l * l) * b)
        return float(out) if out.ndim == 0 else out
    if mode == "kp-longwave":
        if nu is None:
            nu = nu_coefficient(kernel)
        if np.any(k == 0.0):
            raise SingularLongWave("long-wave dispersion is singular at k = 0")
        out = k * (1.0 - nu * k * k + 0.5 * (l / k) ** 2)
        return float(out) if out.ndim == 0 else out
    raise ValueError(f"unknown dispersion mode {mode!r}")
