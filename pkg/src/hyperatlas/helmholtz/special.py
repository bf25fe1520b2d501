"""Special functions used by the closed-form separated factors.

Modified and ordinary Bessel functions are thin wrappers over
``scipy.special`` restricted to a documented envelope. The hyperspherical
radial function and the real spherical harmonics are computed here.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import special as sp

from hyperatlas.errors import DegenerateModeWarning

BESSEL_MAX_ORDER = 5.0
BESSEL_MAX_ARG = 30.0
RADIAL_MAX_ELL = 10
HARMONIC_MAX_ELL = 4


def _check_bessel(nu, z, allow_zero=False):
    nu = float(nu)
    z = np.asarray(z, dtype=float)
    if not 0.0 <= nu <= BESSEL_MAX_ORDER:
        raise ValueError(f"order {nu} outside the supported range [0, {BESSEL_MAX_ORDER}]")
    low_ok = np.all(z >= 0) if allow_zero else np.all(z > 0)
    if not low_ok or np.any(z > BESSEL_MAX_ARG):
        raise ValueError(f"argument outside the supported range (0, {BESSEL_MAX_ARG}]")
    return nu, z


def bessel_i(nu, z):
    """Modified Bessel function of the first kind, I_nu(z)."""
    nu, z = _check_bessel(nu, z)
    return sp.iv(nu, z)


def bessel_k(nu, z):
    """Modified Bessel function of the second kind, K_nu(z)."""
    nu, z = _check_bessel(nu, z)
    return sp.kv(nu, z)


def bessel_i_prime(nu, z):
    nu, z = _check_bessel(nu, z)
    return sp.ivp(nu, z)


def bessel_k_prime(nu, z):
    nu, z = _check_bessel(nu, z)
    return sp.kvp(nu, z)


def bessel_j(ell, z):
    """Bessel function J_ell(z) of integer order ell >= 0."""
    if int(ell) != ell or ell < 0:
        raise ValueError(f"bessel_j needs an integer order >= 0, got {ell}")
    _, z = _check_bessel(float(ell), z, allow_zero=True)
    return sp.jv(int(ell), z)


def hyperspherical_radial(ell: int, k2: float, chi):
    """Regular radial factor of the H^3 polar chart.

    ``sinh(chi)^ell * (d/d cosh chi)^(ell+1) cosh(beta chi)`` with
    ``beta^2 = 1 - k2``; for ``k2 > 1`` this is ``cos(q chi)`` with
    ``q^2 = k2 - 1``. Normalisation constant 1. Solves
    ``X'' + 2 coth(chi) X' + (k2 - ell(ell+1)/sinh^2 chi) X = 0``.

    The repeated derivative comes from the recurrence
    ``(x^2-1) f_{n+2} = -(2n+1) x f_{n+1} - (n^2 - beta^2) f_n`` in
    ``x = cosh chi``; it loses about two digits per order near ``chi = 0``,
    hence the ``ell <= 10`` envelope and ``chi`` bounded away from 0.
    ``k2 == 1`` gives the zero function and raises a warning.
    """
    if int(ell) != ell or not 0 <= ell <= RADIAL_MAX_ELL:
        raise ValueError(f"ell must be an integer in [0, {RADIAL_MAX_ELL}], got {ell}")
    ell = int(ell)
    chi = np.asarray(chi, dtype=float)
    if np.any(chi <= 0):
        raise ValueError("chi must be positive")
    b2 = 1.0 - float(k2)
    s = np.sinh(chi)
    x = np.cosh(chi)
    if b2 > 0:
        beta = math.sqrt(b2)
        f0 = np.cosh(beta * chi)
        f1 = beta * np.sinh(beta * chi) / s
    elif b2 < 0:
        q = math.sqrt(-b2)
        f0 = np.cos(q * chi)
        f1 = -q * np.sin(q * chi) / s
    else:
        warnings.warn(
            "k2 = 1: cosh(0 * chi) is constant and every derivative vanishes",
            DegenerateModeWarning,
            stacklevel=2,
        )
        return np.zeros_like(chi)[()]
    fs = [f0, f1]
    s2 = s * s
    for n in range(ell):
        fs.append(-((2 * n + 1) * x * fs[n + 1] + (n * n - b2) * fs[n]) / s2)
    return (s**ell * fs[ell + 1])[()]


def assoc_legendre(ell: int, m: int, x):
    """P_ell^m(x) for 0 <= m <= ell, without the Condon-Shortley phase."""
    x = np.asarray(x, dtype=float)
    somx2 = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    pmm = np.ones_like(x)
    for i in range(1, m + 1):
        pmm = pmm * (2 * i - 1) * somx2
    if ell == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if ell == m + 1:
        return pm1
    for l in range(m + 2, ell + 1):
        pm1, pmm = ((2 * l - 1) * x * pm1 - (l + m - 1) * pmm) / (l - m), pm1
    return pm1


def harmonic_norm(ell: int, m: int) -> float:
    m = abs(m)
    n = math.sqrt((2 * ell + 1) / (4 * math.pi) * math.factorial(ell - m) / math.factorial(ell + m))
    return n if m == 0 else math.sqrt(2.0) * n


def spherical_harmonic(ell: int, m: int, theta, phi):
    """Real orthonormal spherical harmonic Y_{ell m}.

    ``m > 0`` carries ``cos(m phi)``, ``m < 0`` carries ``sin(|m| phi)``.
    """
    if int(ell) != ell or not 0 <= ell <= HARMONIC_MAX_ELL:
        raise ValueError(f"ell must be an integer in [0, {HARMONIC_MAX_ELL}], got {ell}")
    if int(m) != m or abs(m) > ell:
        raise ValueError(f"m must be an integer with |m| <= ell, got {m}")
    ell, m = int(ell), int(m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = assoc_legendre(ell, abs(m), np.cos(theta))
    if m > 0:
        ang = np.cos(m * phi)
    elif m < 0:
        ang = np.sin(-m * phi)
    else:
        ang = np.ones_like(phi)
    return (harmonic_norm(ell, m) * p * ang)[()]
