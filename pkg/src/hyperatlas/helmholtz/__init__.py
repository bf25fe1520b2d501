"""Separated Helmholtz equations, their integration and product modes."""

from hyperatlas.helmholtz.integrate import FactorSolution, frobenius_start, integrate_ode
from hyperatlas.helmholtz.modes import Basis, ModeField, ModeReport, build_mode, draw_spec, verify_mode
from hyperatlas.helmholtz.special import (
    bessel_i,
    bessel_i_prime,
    bessel_j,
    bessel_k,
    bessel_k_prime,
    hyperspherical_radial,
    spherical_harmonic,
)
from hyperatlas.helmholtz.systems import ModeSpec, SeparatedODE, separated_odes

__all__ = [
    "Basis",
    "FactorSolution",
    "ModeField",
    "ModeReport",
    "ModeSpec",
    "SeparatedODE",
    "bessel_i",
    "bessel_i_prime",
    "bessel_j",
    "bessel_k",
    "bessel_k_prime",
    "build_mode",
    "draw_spec",
    "frobenius_start",
    "hyperspherical_radial",
    "integrate_ode",
    "separated_odes",
    "spherical_harmonic",
    "verify_mode",
]
