"""Periodic grid, transforms, multipliers and dealiased cubic products.

Fields live on a rectangular periodic grid with shape (ny, nx): rows are
y, columns are x.  Spectral coefficients use the real-to-complex layout
of ``numpy.fft.rfft2`` with ``norm='forward'``, so the (0,0) coefficient
equals the field mean.  kx is non-negative (half spectrum), ky follows
standard FFT ordering with the Nyquist mode present.
"""

import json
import os

import numpy as np

from .errors import NonFiniteSymbol


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


class Grid:
    """Uniform periodic grid on [0, Lx) x [0, Ly).

    nx, ny are mode counts (powers of two, >= 4; ny = 1 means 1D).
    """

    def __init__(self, nx, ny=1, lx=2.0 * np.pi, ly=2.0 * np.pi):
        if not (_is_pow2(nx) and nx >= 4):
            raise ValueError(f"nx must be a power of two >= 4, got {nx}")
        if not (ny == 1 or (_is_pow2(ny) and ny >= 4)):
            raise ValueError(f"ny must be 1 or a power of two >= 4, got {ny}")
        if lx <= 0 or ly <= 0:
            raise ValueError("domain lengths must be positive")
        self.nx = nx
        self.ny = ny
        self.lx = float(lx)
        self.ly = float(ly)
        self.x = np.arange(nx) * self.lx / nx
        self.y = np.arange(ny) * self.ly / ny
        self.kx = 2.0 * np.pi * np.fft.rfftfreq(nx, d=self.lx / nx)
        self.ky = 2.0 * np.pi * np.fft.fftfreq(ny, d=self.ly / ny)
        # broadcastable wavenumber arrays over the spectral shape
        self.KX = self.kx[None, :] * np.ones((ny, 1))
        self.KY = self.ky[:, None] * np.ones((1, nx // 2 + 1))
        # quadrature weights for Parseval sums over the half spectrum
        w = np.full(nx // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        self.parseval_weights = w[None, :] * np.ones((ny, 1))

    @property
    def spec_shape(self):
        return (self.ny, self.nx // 2 + 1)

    @property
    def real_shape(self):
        return (self.ny, self.nx)

    @property
    def area(self):
        return self.lx * self.ly

    def meshgrid(self):
        """Physical-space coordinate arrays X, Y of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y)

    def __eq__(self, other):
        return (isinstance(other, Grid) and self.nx == other.nx
                and self.ny == other.ny and self.lx == other.lx
                and self.ly == other.ly)

    def __repr__(self):
        return f"Grid(nx={self.nx}, ny={self.ny}, lx={self.lx:g}, ly={self.ly:g})"


class SpectralField:
    """A real periodic field with lazily synchronized dual representation.

    Treat instances as immutable: operations return new fields.  Either
    representation may be supplied; the other is computed on demand and
    cached.
    """

    __slots__ = ("grid", "_real", "_spec")

    def __init__(self, grid, real=None, spec=None):
        if real is None and spec is None:
            raise ValueError("need real samples or spectral coefficients")
        if real is not None:
            real = np.asarray(real, dtype=float)
            if real.shape != grid.real_shape:
                raise ValueError(f"real shape {real.shape} != {grid.real_shape}")
        if spec is not None:
            spec = np.asarray(spec, dtype=complex)
            if spec.shape != grid.spec_shape:
                raise ValueError(f"spec shape {spec.shape} != {grid.spec_shape}")
        self.grid = grid
        self._real = real
        self._spec = spec

    @classmethod
    def from_function(cls, grid, f):
        X, Y = grid.meshgrid()
        return cls(grid, real=f(X, Y))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, real=np.zeros(grid.real_shape))

    @property
    def real(self):
        if self._real is None:
            self._real = np.fft.irfft2(self._spec, s=self.grid.real_shape,
                                       norm="forward")
        return self._real

    @property
    def spec(self):
        if self._spec is None:
            self._spec = np.fft.rfft2(self._real, norm="forward")
        return self._spec

    def copy(self):
        return SpectralField(self.grid,
                             None if self._real is None else self._real.copy(),
                             None if self._spec is None else self._spec.copy())

    def __add__(self, other):
        return SpectralField(self.grid, real=self.real + other.real)

    def __sub__(self, other):
        return SpectralField(self.grid, real=self.real - other.real)

    def __mul__(self, scalar):
        return SpectralField(self.grid, real=self.real * scalar)

    __rmul__ = __mul__


def transform_forward(field):
    """Force the spectral representation to be valid."""
    field.spec
    return field


def transform_inverse(field):
    """Force the real-space representation to be valid."""
    field.real
    return field


def symbol_values(grid, symbol):
    """Evaluate a multiplier symbol on the grid's spectral lattice.

    ``symbol`` is either an array of the spectral shape or a callable of
    (k, l) arrays.  Non-finite values raise NonFiniteSymbol.
    """
    vals = symbol(grid.KX, grid.KY) if callable(symbol) else np.asarray(symbol)
    vals = np.broadcast_to(vals, grid.spec_shape)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSymbol("multiplier symbol is not finite on the grid")
    return vals


def apply_multiplier(field, symbol):
    """Apply a Fourier multiplier: each coefficient scaled by symbol(k,l)."""
    vals = symbol_values(field.grid, symbol)
    return SpectralField(field.grid, spec=vals * field.spec)


def derivative_x_symbol(grid):
    """Multiplier values for d/dx; the Nyquist column is zeroed, as usual
    for odd-order spectral derivatives."""
    vals = 1j * grid.KX.astype(complex)
    vals[:, -1] = 0.0
    return vals


def derivative_y_symbol(grid):
    vals = 1j * grid.KY.astype(complex)
    if grid.ny > 1:
        vals[grid.ny // 2, :] = 0.0
    return vals


def zero_mass_project(field):
    """Zero every coefficient with kx = 0 (all transverse modes of the
    x-mean).  Idempotent."""
    spec = field.spec.copy()
    spec[:, 0] = 0.0
    return SpectralField(field.grid, spec=spec)


def x_mean_removed(field):
    """Largest |coefficient| on the kx = 0 column; diagnostic for how much
    zero_mass_project changes the field."""
    return float(np.max(np.abs(field.spec[:, 0])))


def _pad_spec(spec, grid, factor=2):
    """Zero-pad a spectral array to a grid refined by ``factor``.

    Nyquist row/column of the coarse grid are dropped; smooth dynamics
    keeps them negligible and dealiased products are band-limited anyway.
    """
    ny, nxh = grid.ny, grid.nx // 2 + 1
    fnx = factor * grid.nx
    fny = factor * ny if ny > 1 else 1
    out = np.zeros((fny, fnx // 2 + 1), dtype=complex)
    if ny == 1:
        out[0, :nxh - 1] = spec[0, :nxh - 1]
        return out
    h = ny // 2
    out[:h, :nxh - 1] = spec[:h, :nxh - 1]
    out[fny - h + 1:, :nxh - 1] = spec[h + 1:, :nxh - 1]
    return out


def _truncate_spec(fine, grid, factor=2):
    """Inverse of _pad_spec: gather the coarse band, zero Nyquist row/col."""
    ny, nxh = grid.ny, grid.nx // 2 + 1
    out = np.zeros(grid.spec_shape, dtype=complex)
    if ny == 1:
        out[0, :nxh - 1] = fine[0, :nxh - 1]
        return out
    h = ny // 2
    fny = fine.shape[0]
    out[:h, :nxh - 1] = fine[:h, :nxh - 1]
    out[h + 1:, :nxh - 1] = fine[fny - h + 1:, :nxh - 1]
    return out


def padded_samples(field, factor=2):
    """Real samples of the field on a ``factor`` x refined grid."""
    grid = field.grid
    fine = _pad_spec(field.spec, grid, factor)
    fny = factor * grid.ny if grid.ny > 1 else 1
    return np.fft.irfft2(fine, s=(fny, factor * grid.nx), norm="forward")


def dealiased_product_spec(fields_real_fine, grid, factor=2):
    """Spectral coefficients of a pointwise product formed on the fine grid."""
    prod = np.prod(fields_real_fine, axis=0) if isinstance(
        fields_real_fine, list) else fields_real_fine
    fine = np.fft.rfft2(prod, norm="forward")
    return _truncate_spec(fine, grid, factor)


def cubic_dealias(field):
    """Alias-free v^3 via zero padding by 2 in each dimension.

    Padding by 2 is exact for cubic products (the only nonlinearity in
    scope); the result is band-limited to the original grid.
    """
    grid = field.grid
    v = padded_samples(field)
    spec = dealiased_product_spec(v ** 3, grid)
    return SpectralField(grid, spec=spec)


def integral(field):
    """Domain integral of the field (mean times area)."""
    return float(field.spec[0, 0].real) * field.grid.area


def quadratic_integral(field, symbol=None):
    """Integral of s-weighted square: sum over modes of s(k,l) |vhat|^2
    by Parseval.  ``symbol=None`` gives the plain L2 integral of v^2."""
    grid = field.grid
    power = np.abs(field.spec) ** 2
    if symbol is not None:
        power = symbol_values(grid, symbol) * power
    return float(np.sum(grid.parseval_weights * power)) * grid.area


def quartic_integral(field):
    """Integral of v^4 evaluated on the 2x refined grid (alias-free)."""
    v = padded_samples(field)
    return float(np.mean(v ** 4)) * field.grid.area


def save_snapshot(path, field, time=0.0, model_tag=""):
    """Write real samples as little-endian float64, row-major, with a JSON
    sidecar header describing the grid."""
    grid = field.grid
    data = np.ascontiguousarray(field.real, dtype="<f8")
    data.tofile(path)
    header = {
        "nx": grid.nx, "ny": grid.ny, "lx": grid.lx, "ly": grid.ly,
        "time": time, "model": model_tag,
        "layout": "row-major y-then-x", "dtype": "<f8",
    }
    with open(str(path) + ".json", "w") as fh:
        json.dump(header, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_snapshot(path):
    """Read a snapshot written by save_snapshot; returns (field, header)."""
    with open(str(path) + ".json") as fh:
        header = json.load(fh)
    grid = Grid(header["nx"], header["ny"], header["lx"], header["ly"])
    data = np.fromfile(path, dtype="<f8").reshape(grid.real_shape)
    return SpectralField(grid, real=data), header
