"""Pseudo-spectral simulation and transverse-instability analysis for
full dispersion Kadomtsev-Petviashvili models of nonlocal elastic waves."""

from . import kernels, models, solver, spectral, stability, waves
from .kernels import KernelSpec, beta_hat, green_exponential, m_symbol, \
    nu_coefficient, omega, p_symbol, whitham_shallow
from .models import ModelSpec, linear_phase_symbol, parent_symbols
from .solver import InvariantReport, StepperConfig, invariants, run, step
from .spectral import Grid, SpectralField, apply_multiplier, cubic_dealias, \
    zero_mass_project
from .stability import build_pencil, fit_omega1, growth_rates, \
    inner_product_table, measure_growth, omega1_squared, solvability_residual
from .waves import SolitonParams, line_soliton_field, perturbed_soliton, \
    soliton_params

__version__ = "0.1.0"
