"""Registry of coordinate charts on H^2 and H^3.

Every chart maps a box of coordinates onto (part of) the hyperboloid, has an
analytic inverse, and a diagonal line element. All functions here are
vectorised over leading axes: coordinates live on the last axis.

Default domain boxes are sized so that ``x^{n+1}`` stays below about 40 on
the whole box, where the hyperboloid constraint still holds to 1e-12 in
double precision. Use :func:`get_chart(...).with_domain` to widen a box.

The charts are partial where the parametrisation takes a positive square
root: ``semi-spherical-polar`` only covers ``x^3 >= 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from hyperatlas.ambient import AmbientPoint, constraint_residual
from hyperatlas.errors import DomainError, RangeError

TWO_PI = 2.0 * np.pi
SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class MetricAtPoint:
    """Diagonal of a line element at one point.

    ``degenerate`` marks entries that vanish (coordinate singularities such as
    the polar axis). ``off_diagonal`` is the largest off-diagonal magnitude,
    which is only non-zero for numerically pulled-back metrics.
    """

    dim: int
    g: tuple
    degenerate: tuple = ()
    off_diagonal: float = 0.0

    @property
    def is_degenerate(self) -> bool:
        return any(self.degenerate)


@dataclass(frozen=True)
class ChartPoint:
    chart: str
    coords: tuple
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        desc = get_chart(self.chart)
        if len(self.coords) != desc.dim:
            raise ValueError(
                f"chart {self.chart!r} takes {desc.dim} coordinates, got {len(self.coords)}"
            )


@dataclass(frozen=True)
class ChartDescriptor:
    id: str
    dim: int
    coord_names: tuple
    domain: tuple
    periodic: tuple
    separable: bool
    metric_signature_note: str
    forward: Callable = field(repr=False, compare=False)
    inverse: Callable = field(repr=False, compare=False)
    metric: Callable = field(repr=False, compare=False)
    scaled: bool = False

    def with_domain(self, **bounds) -> "ChartDescriptor":
        """Copy of the chart with some coordinate intervals replaced."""
        dom = list(self.domain)
        for name, interval in bounds.items():
            dom[self.coord_names.index(name)] = tuple(float(b) for b in interval)
        return replace(self, domain=tuple(dom))

    def check_domain(self, coords) -> None:
        c = np.asarray(coords, dtype=float)
        for i, (name, (lo, hi), per) in enumerate(
            zip(self.coord_names, self.domain, self.periodic)
        ):
            if per:
                continue
            ci = c[..., i]
            if not np.all(np.isfinite(ci)):
                raise DomainError(f"{self.id}: non-finite {name}", coordinate=name)
            if np.any(ci < lo) or np.any(ci > hi):
                bad = ci[(ci < lo) | (ci > hi)].ravel()[0]
                raise DomainError(
                    f"{self.id}: {name} = {bad:g} outside [{lo:g}, {hi:g}]",
                    coordinate=name,
                )

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "dim": self.dim,
            "coord_names": list(self.coord_names),
            "domain": [list(iv) for iv in self.domain],
            "separable": self.separable,
        }


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _cols(c, n):
    c = np.asarray(c, dtype=float)
    return [c[..., i] for i in range(n)]


def _angle(y, x):
    return np.mod(np.arctan2(y, x), TWO_PI)


# --- H^2 -----------------------------------------------------------------


def _polar2(c, a=1.0):
    chi, phi = _cols(c, 2)
    s = np.sinh(chi)
    return _stack(s * np.cos(phi), s * np.sin(phi), np.cosh(chi))


def _polar2_inv(x, a=1.0):
    x1, x2, _ = _cols(x, 3)
    return _stack(np.arcsinh(np.hypot(x1, x2)), _angle(x2, x1))


def _polar2_g(c, a=1.0):
    chi, _ = _cols(c, 2)
    return _stack(np.ones_like(chi), np.sinh(chi) ** 2)


def _hyperbolic2(c, a=1.0):
    rho, om = _cols(c, 2)
    ch = np.cosh(rho)
    return _stack(np.sinh(rho), ch * np.sinh(om), ch * np.cosh(om))


def _hyperbolic2_inv(x, a=1.0):
    x1, x2, _ = _cols(x, 3)
    return _stack(np.arcsinh(x1), np.arcsinh(x2 / np.sqrt(1.0 + x1 * x1)))


def _hyperbolic2_g(c, a=1.0):
    rho, _ = _cols(c, 2)
    return _stack(np.ones_like(rho), np.cosh(rho) ** 2)


def _exp_embed(sigma, w):
    """Embed (sigma, w) with w in R^k as (e^-s w, sinh s + e^-s |w|^2/2, cosh s + ...)."""
    e = np.exp(-sigma)
    half = 0.5 * e * sum(wi * wi for wi in w)
    return _stack(*(e * wi for wi in w), np.sinh(sigma) + half, np.cosh(sigma) + half)


def _exp_split(x):
    """Inverse of :func:`_exp_embed`: returns sigma and the flat coordinates w."""
    x = np.asarray(x, dtype=float)
    w = x[..., :-2]
    xs, xt = x[..., -2], x[..., -1]
    # x^{n+1} - x^n = e^-sigma, written without cancellation
    sigma = np.log((xt + xs) / (1.0 + np.sum(w * w, axis=-1)))
    return sigma, w * np.exp(sigma)[..., None]


def _exponential2(c, a=1.0):
    sigma, mu = _cols(c, 2)
    return _exp_embed(sigma, [mu])


def _exponential2_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    return _stack(sigma, w[..., 0])


def _exponential2_g(c, a=1.0):
    sigma, _ = _cols(c, 2)
    return _stack(np.ones_like(sigma), np.exp(-2.0 * sigma))


def _sym_forward(u, v):
    """(sqrt2 cosh u sinh v, sqrt2 cosh v sinh u, sqrt(cosh 2u cosh 2v))."""
    return (
        SQRT2 * np.cosh(u) * np.sinh(v),
        SQRT2 * np.cosh(v) * np.sinh(u),
        np.sqrt(np.cosh(2 * u) * np.cosh(2 * v)),
    )


def _quad_root(b, c):
    """Non-negative root of t^2 + b t - c = 0 for c >= 0, cancellation free."""
    disc = np.sqrt(b * b + 4.0 * c)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(b >= 0, 2.0 * c / (b + disc), 0.5 * (disc - b))
    return np.where(c == 0, np.maximum(-b, 0.0), t)


def _sym_inverse(x1, x2):
    """Invert x1 = sqrt2 cosh u sinh v, x2 = sqrt2 cosh v sinh u."""
    s1, s2 = 0.5 * x1 * x1, 0.5 * x2 * x2
    d = s1 - s2
    p = _quad_root(1.0 + d, s2)  # sinh^2 u
    q = _quad_root(1.0 - d, s1)  # sinh^2 v
    return np.sign(x2) * np.arcsinh(np.sqrt(p)), np.sign(x1) * np.arcsinh(np.sqrt(q))


def _sym_g(u, v):
    c2u, c2v = np.cosh(2 * u), np.cosh(2 * v)
    return (c2u + c2v) / c2u, (c2u + c2v) / c2v


def _symmetric2(c, a=1.0):
    u, v = _cols(c, 2)
    return _stack(*_sym_forward(u, v))


def _symmetric2_inv(x, a=1.0):
    x1, x2, _ = _cols(x, 3)
    return _stack(*_sym_inverse(x1, x2))


def _symmetric2_g(c, a=1.0):
    u, v = _cols(c, 2)
    return _stack(*_sym_g(u, v))


# --- H^3: polar group -----------------------------------------------------


def _spherical(c, a=1.0):
    chi, th, ph = _cols(c, 3)
    s = np.sinh(chi)
    st = np.sin(th)
    return _stack(s * np.cos(ph) * st, s * np.sin(ph) * st, s * np.cos(th), np.cosh(chi))


def _spherical_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    rxy = np.hypot(x1, x2)
    return _stack(np.arcsinh(np.hypot(rxy, x3)), np.arctan2(rxy, x3), _angle(x2, x1))


def _spherical_g(c, a=1.0):
    chi, th, _ = _cols(c, 3)
    s2 = np.sinh(chi) ** 2
    return _stack(np.ones_like(chi), s2, s2 * np.sin(th) ** 2)


def _semi(c, a=1.0):
    chi, th, ph = _cols(c, 3)
    s = np.sinh(chi)
    cc = np.clip(np.cos(2 * th) * np.cos(2 * ph), 0.0, None)
    return _stack(
        SQRT2 * s * np.cos(th) * np.sin(ph),
        SQRT2 * s * np.sin(th) * np.cos(ph),
        s * np.sqrt(cc),
        np.cosh(chi),
    )


def _semi_root(b, c):
    """Smaller root of t^2 - b t + c = 0, cancellation free."""
    disc = np.sqrt(np.clip(b * b - 4.0 * c, 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = 2.0 * c / (b + disc)
    return np.where(c == 0, 0.0, t)


def _semi_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    r = np.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
    if np.any(x3 < -1e-12 * np.maximum(1.0, r)):
        raise RangeError("semi-spherical-polar covers only x^3 >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        n1 = np.where(r > 0, x1 / r, 0.0)
        n2 = np.where(r > 0, x2 / r, 0.0)
    s1, s2 = 0.5 * n1 * n1, 0.5 * n2 * n2
    d = s2 - s1
    sin2_th = _semi_root(1.0 + d, s2)
    sin2_ph = _semi_root(1.0 - d, s1)
    th = np.sign(n2) * np.arcsin(np.sqrt(np.clip(sin2_th, 0.0, 0.5)))
    ph = np.sign(n1) * np.arcsin(np.sqrt(np.clip(sin2_ph, 0.0, 0.5)))
    return _stack(np.arcsinh(r), th, ph)


def _semi_g(c, a=1.0):
    chi, th, ph = _cols(c, 3)
    s2 = np.sinh(chi) ** 2
    c2t, c2p = np.cos(2 * th), np.cos(2 * ph)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _stack(np.ones_like(chi), s2 * (c2t + c2p) / c2t, s2 * (c2t + c2p) / c2p)


# --- H^3: hyperbolic group ------------------------------------------------


def _hyperbolic3(c, a=1.0):
    rho, om, ph = _cols(c, 3)
    s, ch = np.sinh(rho), np.cosh(rho)
    return _stack(s * np.cos(ph), s * np.sin(ph), ch * np.sinh(om), ch * np.cosh(om))


def _hyperbolic3_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    rxy = np.hypot(x1, x2)
    return _stack(np.arcsinh(rxy), np.arcsinh(x3 / np.sqrt(1.0 + rxy * rxy)), _angle(x2, x1))


def _hyperbolic3_g(c, a=1.0):
    rho, _, _ = _cols(c, 3)
    return _stack(np.ones_like(rho), np.cosh(rho) ** 2, np.sinh(rho) ** 2)


def _bihyperbolic(c, a=1.0):
    rho, om, ga = _cols(c, 3)
    ch = np.cosh(rho)
    cg = ch * np.cosh(ga)
    return _stack(np.sinh(rho), ch * np.sinh(ga), cg * np.sinh(om), cg * np.cosh(om))


def _bihyperbolic_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    ch = np.sqrt(1.0 + x1 * x1)
    ga = np.arcsinh(x2 / ch)
    return _stack(np.arcsinh(x1), np.arcsinh(x3 / (ch * np.cosh(ga))), ga)


def _bihyperbolic_g(c, a=1.0):
    rho, _, ga = _cols(c, 3)
    c2 = np.cosh(rho) ** 2
    return _stack(np.ones_like(rho), c2 * np.cosh(ga) ** 2, c2)


def _polar_hyp(c, a=1.0):
    rho, vs, ph = _cols(c, 3)
    ch = np.cosh(rho)
    s = ch * np.sinh(vs)
    return _stack(s * np.cos(ph), s * np.sin(ph), np.sinh(rho), ch * np.cosh(vs))


def _polar_hyp_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    ch = np.sqrt(1.0 + x3 * x3)
    return _stack(np.arcsinh(x3), np.arcsinh(np.hypot(x1, x2) / ch), _angle(x2, x1))


def _polar_hyp_g(c, a=1.0):
    rho, vs, _ = _cols(c, 3)
    c2 = np.cosh(rho) ** 2
    return _stack(np.ones_like(rho), c2, c2 * np.sinh(vs) ** 2)


def _exp_hyp(c, a=1.0):
    rho, sigma, mu = _cols(c, 3)
    ch = np.cosh(rho)
    e = _exp_embed(sigma, [mu])
    return _stack(ch * e[..., 0], np.sinh(rho), ch * e[..., 1], ch * e[..., 2])


def _exp_hyp_inv(x, a=1.0):
    x = np.asarray(x, dtype=float)
    rho = np.arcsinh(x[..., 1])
    h2 = x[..., [0, 2, 3]] / np.cosh(rho)[..., None]
    sigma, w = _exp_split(h2)
    return _stack(rho, sigma, w[..., 0])


def _exp_hyp_g(c, a=1.0):
    rho, sigma, _ = _cols(c, 3)
    c2 = np.cosh(rho) ** 2
    return _stack(np.ones_like(rho), c2, c2 * np.exp(-2.0 * sigma))


def _sym_hyp(c, a=1.0):
    rho, u, v = _cols(c, 3)
    ch = np.cosh(rho)
    # x^1 carries sinh u, x^2 carries sinh v: swapped relative to symmetric2
    y1, y2, y3 = _sym_forward(u, v)
    return _stack(ch * y2, ch * y1, np.sinh(rho), ch * y3)


def _sym_hyp_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    ch = np.sqrt(1.0 + x3 * x3)
    u, v = _sym_inverse(x2 / ch, x1 / ch)
    return _stack(np.arcsinh(x3), u, v)


def _sym_hyp_g(c, a=1.0):
    rho, u, v = _cols(c, 3)
    c2 = np.cosh(rho) ** 2
    gu, gv = _sym_g(u, v)
    return _stack(np.ones_like(rho), c2 * gu, c2 * gv)


# --- H^3: exponential group -------------------------------------------------


def _exponential3(c, a=1.0):
    sigma, mu, nu = _cols(c, 3)
    return _exp_embed(sigma, [mu, nu])


def _exponential3_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    return _stack(sigma, w[..., 0], w[..., 1])


def _exponential3_g(c, a=1.0):
    sigma, _, _ = _cols(c, 3)
    e2 = np.exp(-2.0 * sigma)
    return _stack(np.ones_like(sigma), e2, e2)


def _polar_exp(c, a=1.0):
    sigma, rho, ph = _cols(c, 3)
    return _exp_embed(sigma, [rho * np.cos(ph), rho * np.sin(ph)])


def _polar_exp_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    return _stack(sigma, np.hypot(w[..., 0], w[..., 1]), _angle(w[..., 1], w[..., 0]))


def _polar_exp_g(c, a=1.0):
    sigma, rho, _ = _cols(c, 3)
    e2 = np.exp(-2.0 * sigma)
    return _stack(np.ones_like(sigma), e2, e2 * rho * rho)


def _elliptic_exp(c, a=1.0):
    sigma, u, v = _cols(c, 3)
    return _exp_embed(sigma, [a * np.cosh(u) * np.cos(v), a * np.sinh(u) * np.sin(v)])


def _elliptic_exp_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    z = np.arccosh((w[..., 0] + 1j * w[..., 1]) / a)
    u, v = np.real(z), np.imag(z)
    # arccosh puts the real part >= 0; flip branch when it returns u < 0
    v = np.where(u < 0, -v, v)
    u = np.abs(u)
    v = np.where(v >= np.pi, v - TWO_PI, v)
    return _stack(sigma, u, v)


def _elliptic_exp_g(c, a=1.0):
    sigma, u, v = _cols(c, 3)
    h = a * a * np.exp(-2.0 * sigma) * (np.sinh(u) ** 2 + np.sin(v) ** 2)
    return _stack(np.ones_like(sigma), h, h)


def _parabolic_exp(c, a=1.0):
    sigma, xi, et = _cols(c, 3)
    return _exp_embed(sigma, [xi * et, 0.5 * (et * et - xi * xi)])


def _parabolic_exp_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    z = np.sqrt(2.0 * (w[..., 1] + 1j * w[..., 0]))
    return _stack(sigma, np.imag(z), np.real(z))


def _parabolic_exp_g(c, a=1.0):
    sigma, xi, et = _cols(c, 3)
    h = np.exp(-2.0 * sigma) * (et * et + xi * xi)
    return _stack(np.ones_like(sigma), h, h)


def _bipolar_exp(c, a=1.0):
    sigma, xi, et = _cols(c, 3)
    den = np.cosh(et) - np.cos(xi)
    return _exp_embed(sigma, [a * np.sinh(et) / den, a * np.sin(xi) / den])


def _bipolar_exp_inv(x, a=1.0):
    sigma, w = _exp_split(x)
    w1, w2 = w[..., 0], w[..., 1]
    et = 0.5 * np.log(((w1 + a) ** 2 + w2 * w2) / ((w1 - a) ** 2 + w2 * w2))
    xi = _angle(2.0 * a * w2, w1 * w1 + w2 * w2 - a * a)
    return _stack(sigma, xi, et)


def _bipolar_exp_g(c, a=1.0):
    sigma, xi, et = _cols(c, 3)
    h = a * a * np.exp(-2.0 * sigma) / (np.cosh(et) - np.cos(xi)) ** 2
    return _stack(np.ones_like(sigma), h, h)


# --- H^3: symmetric -------------------------------------------------------


def _symmetric3(c, a=1.0):
    chi, u, v = _cols(c, 3)
    y1, y2, y3 = _sym_forward(u, v)
    return _stack(y1, y2, y3 * np.sinh(chi), y3 * np.cosh(chi))


def _symmetric3_inv(x, a=1.0):
    x1, x2, x3, _ = _cols(x, 4)
    r = np.sqrt(1.0 + x1 * x1 + x2 * x2)
    u, v = _sym_inverse(x1, x2)
    return _stack(np.arcsinh(x3 / r), u, v)


def _symmetric3_g(c, a=1.0):
    chi, u, v = _cols(c, 3)
    gu, gv = _sym_g(u, v)
    return _stack(np.cosh(2 * u) * np.cosh(2 * v) + 0 * chi, gu, gv)


# --- registry ----------------------------------------------------------------

_Q = np.pi / 4


def _mk(id_, names, domain, periodic, fwd, inv, g, note, separable=True, scaled=False):
    dim = len(names)
    return ChartDescriptor(
        id=id_,
        dim=dim,
        coord_names=tuple(names),
        domain=tuple(tuple(float(b) for b in iv) for iv in domain),
        periodic=tuple(periodic),
        separable=separable,
        metric_signature_note=note,
        forward=fwd,
        inverse=inv,
        metric=g,
        scaled=scaled,
    )


_P = (0.0, TWO_PI)

_CHARTS = (
    _mk("polar2", ("chi", "phi"), [(0, 4), _P], (False, True),
        _polar2, _polar2_inv, _polar2_g, "dchi^2 + sinh^2 chi dphi^2"),
    _mk("hyperbolic2", ("rho", "omega"), [(-2.2, 2.2), (-2.2, 2.2)], (False, False),
        _hyperbolic2, _hyperbolic2_inv, _hyperbolic2_g, "drho^2 + cosh^2 rho domega^2"),
    _mk("exponential2", ("sigma", "mu"), [(-2, 2), (-2, 2)], (False, False),
        _exponential2, _exponential2_inv, _exponential2_g, "dsigma^2 + e^(-2 sigma) dmu^2"),
    _mk("symmetric2", ("u", "v"), [(-1.7, 1.7), (-1.7, 1.7)], (False, False),
        _symmetric2, _symmetric2_inv, _symmetric2_g,
        "(cosh 2u + cosh 2v)(du^2/cosh 2u + dv^2/cosh 2v)"),
    _mk("spherical-polar", ("chi", "theta", "phi"), [(0, 4), (0, np.pi), _P],
        (False, False, True), _spherical, _spherical_inv, _spherical_g,
        "dchi^2 + sinh^2 chi (dtheta^2 + sin^2 theta dphi^2)"),
    _mk("semi-spherical-polar", ("chi", "theta", "phi"), [(0, 4), (-_Q, _Q), (-_Q, _Q)],
        (False, False, False), _semi, _semi_inv, _semi_g,
        "dchi^2 + sinh^2 chi (cos 2theta + cos 2phi)(dtheta^2/cos 2theta + dphi^2/cos 2phi)"),
    _mk("hyperbolic3", ("rho", "omega", "phi"), [(0, 2.2), (-2.2, 2.2), _P],
        (False, False, True), _hyperbolic3, _hyperbolic3_inv, _hyperbolic3_g,
        "drho^2 + cosh^2 rho domega^2 + sinh^2 rho dphi^2"),
    _mk("bi-hyperbolic", ("rho", "omega", "gamma"), [(-1.7, 1.7)] * 3,
        (False, False, False), _bihyperbolic, _bihyperbolic_inv, _bihyperbolic_g,
        "drho^2 + cosh^2 rho (dgamma^2 + cosh^2 gamma domega^2)"),
    _mk("polar-hyperbolic", ("rho", "varsigma", "phi"), [(-2.2, 2.2), (0, 2.2), _P],
        (False, False, True), _polar_hyp, _polar_hyp_inv, _polar_hyp_g,
        "drho^2 + cosh^2 rho (dvarsigma^2 + sinh^2 varsigma dphi^2)"),
    _mk("exponential-hyperbolic", ("rho", "sigma", "mu"), [(-1.5, 1.5)] * 3,
        (False, False, False), _exp_hyp, _exp_hyp_inv, _exp_hyp_g,
        "drho^2 + cosh^2 rho (dsigma^2 + e^(-2 sigma) dmu^2)"),
    _mk("symmetric-hyperbolic", ("rho", "u", "v"), [(-1.5, 1.5), (-1.2, 1.2), (-1.2, 1.2)],
        (False, False, False), _sym_hyp, _sym_hyp_inv, _sym_hyp_g,
        "drho^2 + cosh^2 rho (1 + cosh 2v/cosh 2u) du^2 + cosh^2 rho (1 + cosh 2u/cosh 2v) dv^2"),
    _mk("exponential3", ("sigma", "mu", "nu"), [(-2, 2), (-1.5, 1.5), (-1.5, 1.5)],
        (False, False, False), _exponential3, _exponential3_inv, _exponential3_g,
        "dsigma^2 + e^(-2 sigma)(dmu^2 + dnu^2)"),
    _mk("polar-exponential", ("sigma", "rho", "phi"), [(-2, 2), (0, 2), _P],
        (False, False, True), _polar_exp, _polar_exp_inv, _polar_exp_g,
        "dsigma^2 + e^(-2 sigma)(drho^2 + rho^2 dphi^2)"),
    _mk("elliptic-exponential", ("sigma", "u", "v"), [(-2, 2), (0, 1.5), (-np.pi, np.pi)],
        (False, False, True), _elliptic_exp, _elliptic_exp_inv, _elliptic_exp_g,
        "dsigma^2 + a^2 e^(-2 sigma)(sinh^2 u + sin^2 v)(du^2 + dv^2)", scaled=True),
    _mk("parabolic-exponential", ("sigma", "xi", "eta"), [(-2, 2), (-1.5, 1.5), (0, 1.5)],
        (False, False, False), _parabolic_exp, _parabolic_exp_inv, _parabolic_exp_g,
        "dsigma^2 + e^(-2 sigma)(eta^2 + xi^2)(deta^2 + dxi^2)"),
    _mk("symmetric3", ("chi", "u", "v"), [(-1.5, 1.5), (-1.2, 1.2), (-1.2, 1.2)],
        (False, False, False), _symmetric3, _symmetric3_inv, _symmetric3_g,
        "cosh 2u cosh 2v dchi^2 + (1 + cosh 2v/cosh 2u) du^2 + (1 + cosh 2u/cosh 2v) dv^2"),
    _mk("bipolar-exponential", ("sigma", "xi", "eta"),
        [(-1.5, 1.5), (0.7, TWO_PI - 0.7), (-2, 2)], (False, False, False),
        _bipolar_exp, _bipolar_exp_inv, _bipolar_exp_g,
        "dsigma^2 + a^2 e^(-2 sigma)(cosh eta - cos xi)^-2 (deta^2 + dxi^2)",
        separable=False, scaled=True),
)

_REGISTRY = {c.id: c for c in _CHARTS}

CHART_IDS = tuple(c.id for c in _CHARTS)


def get_chart(chart) -> ChartDescriptor:
    if isinstance(chart, ChartDescriptor):
        return chart
    try:
        return _REGISTRY[chart]
    except KeyError:
        raise KeyError(f"unknown chart {chart!r}; known: {', '.join(CHART_IDS)}") from None


def list_charts(dim: int | None = None) -> list:
    """Chart descriptors in table order (H^2 first), optionally filtered by dimension."""
    if dim is not None and dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    return [c for c in _CHARTS if dim is None or c.dim == dim]


def catalog_json(dim: int | None = None) -> str:
    return json.dumps(
        {"schema": 1, "charts": [c.to_json() for c in list_charts(dim)]}, indent=2
    )


def forward(chart, coords, scale: float = 1.0, check: bool = True) -> np.ndarray:
    """Vectorised chart map; ``coords[..., dim]`` -> ``x[..., dim + 1]``."""
    desc = get_chart(chart)
    c = np.asarray(coords, dtype=float)
    if c.shape[-1] != desc.dim:
        raise ValueError(f"{desc.id} takes {desc.dim} coordinates, got {c.shape[-1]}")
    if check:
        desc.check_domain(c)
    return desc.forward(c, scale)


def inverse(chart, x, scale: float = 1.0) -> np.ndarray:
    """Vectorised inverse chart map on hyperboloid points ``x[..., dim + 1]``."""
    desc = get_chart(chart)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != desc.dim + 1:
        raise ValueError(f"{desc.id} needs {desc.dim + 1} ambient coordinates")
    return desc.inverse(x, scale)


def metric_diag(chart, coords, scale: float = 1.0) -> np.ndarray:
    """Closed-form diagonal metric entries, vectorised."""
    desc = get_chart(chart)
    return desc.metric(np.asarray(coords, dtype=float), scale)


def to_ambient(p: ChartPoint, check: bool = True) -> AmbientPoint:
    return AmbientPoint(forward(p.chart, p.coords, p.scale, check=check))


def from_ambient(chart, p, scale: float = 1.0) -> ChartPoint:
    """Chart coordinates of a hyperboloid point.

    At coordinate singularities the undetermined angles are set to 0
    (e.g. the polar chart returns ``phi = 0`` at the origin).
    """
    desc = get_chart(chart)
    x = p.coords if isinstance(p, AmbientPoint) else np.asarray(p, dtype=float)
    if x.shape != (desc.dim + 1,):
        raise RangeError(f"{desc.id} is a chart on H^{desc.dim}")
    if x[-1] < 1.0 or abs(constraint_residual(x)) > 1e-9 * max(1.0, x[-1] ** 2):
        raise RangeError("point is not on the upper hyperboloid sheet")
    c = desc.inverse(x, scale)
    if not np.all(np.isfinite(c)):
        raise RangeError(f"point lies outside the image of {desc.id}")
    return ChartPoint(desc.id, tuple(c), scale)


def metric(p: ChartPoint) -> MetricAtPoint:
    desc = get_chart(p.chart)
    g = desc.metric(np.asarray(p.coords), p.scale)
    g = tuple(float(v) for v in g)
    return MetricAtPoint(desc.dim, g, tuple(not (v > 0) for v in g))


def sample_interior(chart, n: int, rng, margin: float = 0.05) -> np.ndarray:
    """Uniform samples from the domain box shrunk by ``margin`` of each side length."""
    desc = get_chart(chart)
    lo = np.array([iv[0] for iv in desc.domain])
    hi = np.array([iv[1] for iv in desc.domain])
    span = hi - lo
    return rng.uniform(lo + margin * span, hi - margin * span, size=(n, desc.dim))
