"""Separated ordinary differential equations for every separable chart.

Each chart's Helmholtz equation ``lap Psi + k2 Psi = 0`` splits under a
product ansatz into one equation ``u'' + p(t) u' + q(t) u = 0`` per
coordinate. The separation constants are named ``lam`` (lambda) and ``ell``,
and ``m`` is the azimuthal index of the spherical chart.

Sign conventions of the separation constants:

* exponential group: the flat 2-D factor carries eigenvalue ``-lam^2`` in
  every chart, so the elliptic (Mathieu) and parabolic (Weber) pairs read
  ``U'' + (a^2 lam^2 sinh^2 u - ell^2) U = 0``,
  ``V'' + (a^2 lam^2 sin^2 v + ell^2) V = 0`` and
  ``N'' + (lam^2 eta^2 - ell^2) N = 0``, ``Xi'' + (lam^2 xi^2 + ell^2) Xi = 0``.
* hyperbolic group: the 2-D factor carries ``-lam^2``, the circle factor
  ``-ell^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from hyperatlas import charts
from hyperatlas.errors import AdmissibilityError, NotSeparableError


@dataclass(frozen=True)
class ModeSpec:
    chart: str
    k2: float
    lam: float = 0.0
    ell: float = 0.0
    m: int = 0
    scale: float = 1.0

    def __post_init__(self):
        desc = charts.get_chart(self.chart)
        if not desc.separable:
            raise NotSeparableError(
                f"{desc.id} is not separable: the Helmholtz equation does not split into ordinary equations"
            )
        for name in ("k2", "lam", "ell", "scale"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise AdmissibilityError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if int(self.m) != self.m:
            raise AdmissibilityError("m must be an integer")
        object.__setattr__(self, "m", int(self.m))
        if self.scale <= 0:
            raise AdmissibilityError("scale must be positive")
        for rule in ADMISSIBILITY.get(desc.id, ()):
            rule(self)

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "k2": self.k2,
            "lambda": self.lam,
            "ell": self.ell,
            "m": self.m,
            "scale": self.scale,
        }


def _integer(name, nonneg=False):
    def rule(spec):
        v = getattr(spec, name)
        if v != int(v) or (nonneg and v < 0):
            kind = "a non-negative integer" if nonneg else "an integer"
            raise AdmissibilityError(
                f"{spec.chart}: {name} must be {kind} (periodic angle), got {v:g}"
            )

    return rule


def _m_within_ell(spec):
    if abs(spec.m) > spec.ell:
        raise AdmissibilityError(f"|m| = {abs(spec.m)} exceeds ell = {spec.ell:g}")


# constants tied to a periodic angle must be integers; the sphere factor of
# the two polar charts needs ell >= 0 integer and |m| <= ell
ADMISSIBILITY = {
    "polar2": (_integer("lam"),),
    "spherical-polar": (_integer("ell", nonneg=True), _m_within_ell),
    "semi-spherical-polar": (_integer("ell", nonneg=True),),
    "hyperbolic3": (_integer("ell"),),
    "polar-hyperbolic": (_integer("ell"),),
    "polar-exponential": (_integer("ell"),),
}


@dataclass(frozen=True)
class SeparatedODE:
    """``u'' + p(t) u' + q(t) u = 0`` for one factor of a product mode.

    ``regular_point``/``regular_exponent`` describe a regular singular point
    where a Frobenius start ``t^s`` selects the solution that stays finite.
    ``constant`` holds ``(p, q)`` when both coefficients are constant.
    ``bessel`` holds ``(c, nu2, beta)`` when the solutions are
    ``e^(c t) Z_nu(beta e^t)`` with ``nu^2 = nu2``.
    """

    coordinate: str
    factor: str
    p: Callable = field(repr=False)
    q: Callable = field(repr=False)
    singular_points: tuple = ()
    regular_point: float | None = None
    regular_exponent: float | None = None
    constant: tuple | None = None
    bessel: tuple | None = None
    default_ic: tuple | None = None

    def residual(self, t, u, du, d2u):
        return d2u + self.p(t) * du + self.q(t) * u


def _const(coord, factor, p, q, **kw):
    return SeparatedODE(
        coord, factor, lambda t, p=p: p + 0.0 * t, lambda t, q=q: q + 0.0 * t,
        constant=(float(p), float(q)), **kw,
    )


def _trig(coord, factor, c2, **kw):
    """u'' + c2 u = 0."""
    return _const(coord, factor, 0.0, c2, **kw)


def _exp_sigma(coord, factor, c, kappa, beta):
    """Sigma'' - 2c Sigma' + (kappa - beta^2 e^{2 sigma}) Sigma = 0."""
    b2 = beta * beta
    if b2 == 0:
        return _const(coord, factor, -2.0 * c, kappa)
    return SeparatedODE(
        coord, factor,
        lambda t, c=c: -2.0 * c + 0.0 * t,
        lambda t: kappa - b2 * np.exp(2.0 * t),
        bessel=(c, c * c - kappa, abs(beta)),
    )


def _radial_R(k2, lam):
    """R'' + 2 tanh(rho) R' + (k2 - lam^2/cosh^2 rho) R = 0."""
    L2 = lam * lam
    return SeparatedODE(
        "rho", "R",
        lambda t: 2.0 * np.tanh(t),
        lambda t: k2 - L2 / np.cosh(t) ** 2,
    )


def _sym_pair(const, coupling, p_factor=1.0, extra=0.0):
    """U'' + f tanh 2u U' + (const -/+ coupling/cosh 2u - extra/cosh^2 2u) U = 0."""
    pu = lambda t: p_factor * np.tanh(2.0 * t)
    qU = lambda t: const - coupling / np.cosh(2.0 * t) - extra / np.cosh(2.0 * t) ** 2
    qV = lambda t: const + coupling / np.cosh(2.0 * t) - extra / np.cosh(2.0 * t) ** 2
    return (
        SeparatedODE("u", "U", pu, qU),
        SeparatedODE("v", "V", pu, qV),
    )


def _polar2(s):
    L2 = s.lam**2
    X = SeparatedODE(
        "chi", "X",
        lambda t: 1.0 / np.tanh(t),
        lambda t: s.k2 - L2 / np.sinh(t) ** 2,
        singular_points=(0.0,), regular_point=0.0, regular_exponent=abs(s.lam),
    )
    return [X, _trig("phi", "Phi", L2)]


def _hyperbolic2(s):
    L2 = s.lam**2
    R = SeparatedODE(
        "rho", "R", lambda t: np.tanh(t), lambda t: s.k2 - L2 / np.cosh(t) ** 2
    )
    return [R, _trig("omega", "W", L2)]


def _exponential2(s):
    return [_exp_sigma("sigma", "Sigma", 0.5, s.k2, s.lam), _trig("mu", "Theta", s.lam**2)]


def _symmetric2(s):
    return list(_sym_pair(s.k2, s.lam**2))


def _radial_X(s):
    L = s.ell * (s.ell + 1.0)
    return SeparatedODE(
        "chi", "X",
        lambda t: 2.0 / np.tanh(t),
        lambda t: s.k2 - L / np.sinh(t) ** 2,
        singular_points=(0.0,), regular_point=0.0, regular_exponent=s.ell,
    )


def _spherical(s):
    L = s.ell * (s.ell + 1.0)
    m2 = float(s.m * s.m)
    Th = SeparatedODE(
        "theta", "Theta",
        lambda t: 1.0 / np.tan(t),
        lambda t: L - m2 / np.sin(t) ** 2,
        singular_points=(0.0, np.pi), regular_point=0.0, regular_exponent=abs(s.m),
    )
    am = abs(s.m)
    ph_ic = (0.0, 1.0, 0.0) if s.m >= 0 else (0.0, 0.0, float(am))
    return [_radial_X(s), Th, _trig("phi", "Phi", m2, default_ic=ph_ic)]


def _semi(s):
    L = s.ell * (s.ell + 1.0)
    L2 = s.lam**2
    q = np.pi / 4
    Th = SeparatedODE(
        "theta", "Theta",
        lambda t: -np.tan(2.0 * t),
        lambda t: L + L2 / np.cos(2.0 * t),
        singular_points=(-q, q),
    )
    Ph = SeparatedODE(
        "phi", "Phi",
        lambda t: -np.tan(2.0 * t),
        lambda t: L - L2 / np.cos(2.0 * t),
        singular_points=(-q, q),
    )
    return [_radial_X(s), Th, Ph]


def _hyperbolic3(s):
    L2, l2 = s.lam**2, s.ell**2
    R = SeparatedODE(
        "rho", "R",
        lambda t: (np.sinh(t) ** 2 + np.cosh(t) ** 2) / (np.sinh(t) * np.cosh(t)),
        lambda t: s.k2 - L2 / np.cosh(t) ** 2 - l2 / np.sinh(t) ** 2,
        singular_points=(0.0,), regular_point=0.0, regular_exponent=abs(s.ell),
    )
    return [R, _trig("omega", "Omega", L2), _trig("phi", "Phi", l2)]


def _bihyperbolic(s):
    L2, l2 = s.lam**2, s.ell**2
    G = SeparatedODE(
        "gamma", "Gamma", lambda t: np.tanh(t), lambda t: L2 - l2 / np.cosh(t) ** 2
    )
    return [_radial_R(s.k2, s.lam), _trig("omega", "Omega", l2), G]


def _polar_hyp(s):
    L2, l2 = s.lam**2, s.ell**2
    Xi = SeparatedODE(
        "varsigma", "Xi",
        lambda t: 1.0 / np.tanh(t),
        lambda t: L2 - l2 / np.sinh(t) ** 2,
        singular_points=(0.0,), regular_point=0.0, regular_exponent=abs(s.ell),
    )
    return [_radial_R(s.k2, s.lam), Xi, _trig("phi", "Phi", l2)]


def _exp_hyp(s):
    return [
        _radial_R(s.k2, s.lam),
        _exp_sigma("sigma", "Sigma", 0.5, s.lam**2, s.ell),
        _trig("mu", "M", s.ell**2),
    ]


def _sym_hyp(s):
    return [_radial_R(s.k2, s.lam), *_sym_pair(s.lam**2, s.ell**2)]


def _smodel(s):
    return _exp_sigma("sigma", "Sigma", 1.0, s.k2, s.lam)


def _exponential3(s):
    return [_smodel(s), _trig("mu", "M", s.ell**2), _trig("nu", "N", s.lam**2 - s.ell**2)]


def _polar_exp(s):
    L2, l2 = s.lam**2, s.ell**2
    R = SeparatedODE(
        "rho", "R",
        lambda t: 1.0 / t,
        lambda t: L2 - l2 / (t * t),
        singular_points=(0.0,), regular_point=0.0, regular_exponent=abs(s.ell),
    )
    return [_smodel(s), R, _trig("phi", "Phi", l2)]


def _elliptic_exp(s):
    c = (s.scale * s.lam) ** 2
    l2 = s.ell**2
    U = SeparatedODE("u", "U", lambda t: 0.0 * t, lambda t: c * np.sinh(t) ** 2 - l2)
    V = SeparatedODE("v", "V", lambda t: 0.0 * t, lambda t: c * np.sin(t) ** 2 + l2)
    return [_smodel(s), U, V]


def _parabolic_exp(s):
    L2, l2 = s.lam**2, s.ell**2
    Xi = SeparatedODE("xi", "Xi", lambda t: 0.0 * t, lambda t: L2 * t * t + l2)
    N = SeparatedODE("eta", "N", lambda t: 0.0 * t, lambda t: L2 * t * t - l2)
    return [_smodel(s), Xi, N]


def _symmetric3(s):
    U, V = _sym_pair(s.k2, s.ell**2, p_factor=2.0, extra=s.lam**2)
    return [_trig("chi", "X", s.lam**2), U, V]


_SYSTEMS = {
    "polar2": _polar2,
    "hyperbolic2": _hyperbolic2,
    "exponential2": _exponential2,
    "symmetric2": _symmetric2,
    "spherical-polar": _spherical,
    "semi-spherical-polar": _semi,
    "hyperbolic3": _hyperbolic3,
    "bi-hyperbolic": _bihyperbolic,
    "polar-hyperbolic": _polar_hyp,
    "exponential-hyperbolic": _exp_hyp,
    "symmetric-hyperbolic": _sym_hyp,
    "exponential3": _exponential3,
    "polar-exponential": _polar_exp,
    "elliptic-exponential": _elliptic_exp,
    "parabolic-exponential": _parabolic_exp,
    "symmetric3": _symmetric3,
}


def separated_odes(spec: ModeSpec) -> list:
    """One separated equation per chart coordinate, in chart coordinate order."""
    desc = charts.get_chart(spec.chart)
    if not desc.separable:
        raise NotSeparableError(f"{desc.id} is not separable")
    odes = _SYSTEMS[desc.id](spec)
    assert [o.coordinate for o in odes] == list(desc.coord_names)
    return odes


# interior boxes used when no grid is given: clear of coordinate singularities
# and small enough that a 21-point grid resolves every factor
DEFAULT_BOX = {
    "polar2": ((0.3, 2.0), (0.2, 6.0)),
    "hyperbolic2": ((-1.5, 1.5), (-1.5, 1.5)),
    "exponential2": ((-1.0, 1.0), (-1.0, 1.0)),
    "symmetric2": ((-1.0, 1.0), (-1.0, 1.0)),
    "spherical-polar": ((0.3, 2.0), (0.3, np.pi - 0.3), (0.2, 6.0)),
    "semi-spherical-polar": ((0.3, 2.0), (-0.6, 0.6), (-0.6, 0.6)),
    "hyperbolic3": ((0.3, 1.8), (-1.5, 1.5), (0.2, 6.0)),
    "bi-hyperbolic": ((-1.2, 1.2), (-1.2, 1.2), (-1.2, 1.2)),
    "polar-hyperbolic": ((-1.5, 1.5), (0.3, 1.8), (0.2, 6.0)),
    "exponential-hyperbolic": ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
    "symmetric-hyperbolic": ((-1.0, 1.0), (-0.9, 0.9), (-0.9, 0.9)),
    "exponential3": ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
    "polar-exponential": ((-1.0, 1.0), (0.3, 1.7), (0.2, 6.0)),
    "elliptic-exponential": ((-1.0, 1.0), (0.3, 1.2), (-2.5, 2.5)),
    "parabolic-exponential": ((-1.0, 1.0), (-1.2, 1.2), (0.3, 1.3)),
    "symmetric3": ((-1.0, 1.0), (-0.9, 0.9), (-0.9, 0.9)),
}
