"""Finite-difference differential geometry on the charts.

Jacobians and metric pullbacks are taken from the chart maps themselves, so
they check the closed-form line elements independently. The Laplace-Beltrami
operator deliberately uses the closed-form metric: a Helmholtz residual then
certifies the tabulated line element and the separated equations together.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from hyperatlas import charts
from hyperatlas.ambient import eta
from hyperatlas.charts import MetricAtPoint
from hyperatlas.errors import DomainError

JACOBIAN_STEP = 1e-5
LAPLACIAN_STEP = 1e-3
OFF_DIAGONAL_TOL = 1e-6


@dataclass(frozen=True)
class ScalarField:
    """A function of chart coordinates, vectorised over ``coords[..., dim]``."""

    chart: str
    eval: Callable = field(repr=False)
    scale: float = 1.0

    def __call__(self, coords):
        return self.eval(np.asarray(coords, dtype=float))


@dataclass
class ResidualReport:
    grid_shape: tuple
    max_abs_residual: float
    rms_residual: float
    reference_scale: float
    relative_max: float
    coords: np.ndarray = field(default=None, repr=False)
    residuals: np.ndarray = field(default=None, repr=False)

    def summary(self) -> dict:
        return {
            "grid_shape": list(self.grid_shape),
            "max_abs_residual": self.max_abs_residual,
            "rms_residual": self.rms_residual,
            "reference_scale": self.reference_scale,
            "relative_max": self.relative_max,
        }

    def to_json(self) -> str:
        return json.dumps({"schema": 1, **self.summary()}, indent=2)

    def to_csv(self, names=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        dim = self.coords.shape[-1]
        w.writerow(list(names or [f"c{i + 1}" for i in range(dim)]) + ["residual"])
        for c, r in zip(self.coords.reshape(-1, dim), self.residuals.ravel()):
            w.writerow([repr(float(v)) for v in c] + [repr(float(r))])
        return buf.getvalue()


def _check_step(h):
    if not h >= 1e-12:
        raise ValueError(f"finite-difference step {h!r} underflows (must be >= 1e-12)")


def numerical_jacobian(chart, coords, h: float = JACOBIAN_STEP, scale: float = 1.0):
    """Central-difference Jacobian ``J[i, j] = dx^i/du^j``; shape ``(..., dim+1, dim)``."""
    _check_step(h)
    desc = charts.get_chart(chart)
    c = np.asarray(coords, dtype=float)
    cols = []
    for j in range(desc.dim):
        e = np.zeros(desc.dim)
        e[j] = h
        xp = charts.forward(desc, c + e, scale)
        xm = charts.forward(desc, c - e, scale)
        cols.append((xp - xm) / (2.0 * h))
    return np.stack(cols, axis=-1)


def pullback_matrix(chart, coords, h: float = JACOBIAN_STEP, scale: float = 1.0):
    """Full ``J^T eta J`` at one or many points; shape ``(..., dim, dim)``."""
    desc = charts.get_chart(chart)
    J = numerical_jacobian(desc, coords, h, scale)
    return np.einsum("...ai,ab,...bj->...ij", J, eta(desc.dim), J)


def pullback_metric(chart, coords, h: float = JACOBIAN_STEP, scale: float = 1.0) -> MetricAtPoint:
    """Induced metric at one point, with the largest off-diagonal entry reported."""
    desc = charts.get_chart(chart)
    G = pullback_matrix(desc, coords, h, scale)
    g = np.diag(G)
    off = float(np.max(np.abs(G - np.diag(g)))) if desc.dim > 1 else 0.0
    return MetricAtPoint(
        desc.dim,
        tuple(float(v) for v in g),
        tuple(bool(abs(v) < 1e-14) for v in g),
        off,
    )


def metric_deviation(chart, coords, h: float = JACOBIAN_STEP, scale: float = 1.0, metric=None):
    """Relative deviation of closed form vs pullback, and off-diagonal size, per point.

    ``metric`` overrides the closed-form diagonal (used for negative controls).
    Returns two arrays shaped like the leading axes of ``coords``.
    """
    desc = charts.get_chart(chart)
    c = np.asarray(coords, dtype=float)
    G = pullback_matrix(desc, c, h, scale)
    g_num = np.diagonal(G, axis1=-2, axis2=-1)
    g_closed = (metric or desc.metric)(c, scale)
    rel = np.max(np.abs(g_closed - g_num) / np.abs(g_closed), axis=-1)
    off = np.abs(G - g_num[..., None] * np.eye(desc.dim))
    return rel, np.max(off, axis=(-2, -1))


def _check_stencil(desc, c, h):
    for i, (name, (lo, hi), per) in enumerate(
        zip(desc.coord_names, desc.domain, desc.periodic)
    ):
        if per:
            continue
        ci = c[..., i]
        if np.any(ci - 2 * h < lo) or np.any(ci + 2 * h > hi):
            raise DomainError(
                f"{desc.id}: Laplacian stencil leaves the domain in {name}",
                coordinate=name,
            )


def laplace_beltrami(f: ScalarField, coords, h: float = LAPLACIAN_STEP):
    """Second-order ``sum_mu g^{-1/2} d_mu(sqrt(g) g^{mu mu} d_mu f)`` for diagonal metrics.

    Nested central differences: the inner derivative is taken at ``u +- h``,
    so the stencil reaches ``u +- 2h`` along each axis. Vectorised over the
    leading axes of ``coords``; returns a float for a single point.
    """
    _check_step(h)
    desc = charts.get_chart(f.chart)
    c = np.asarray(coords, dtype=float)
    _check_stencil(desc, c, h)
    a = f.scale

    def coef(x):
        g = desc.metric(x, a)
        return np.sqrt(np.prod(g, axis=-1))[..., None] / g

    f0 = f(c)
    sqrt_g = np.sqrt(np.prod(desc.metric(c, a), axis=-1))
    total = np.zeros(np.shape(f0))
    for mu in range(desc.dim):
        e = np.zeros(desc.dim)
        e[mu] = h
        fp2, fm2 = f(c + 2 * e), f(c - 2 * e)
        ap = coef(c + e)[..., mu]
        am = coef(c - e)[..., mu]
        dp = (fp2 - f0) / (2 * h)
        dm = (f0 - fm2) / (2 * h)
        total = total + (ap * dp - am * dm) / (2 * h)
    out = total / sqrt_g
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Grid:
    """Tensor grid over a coordinate box, ``n`` points per axis (endpoints included)."""

    box: tuple
    n: tuple

    def __post_init__(self):
        box = tuple(tuple(float(b) for b in iv) for iv in self.box)
        n = self.n if isinstance(self.n, tuple) else (int(self.n),) * len(box)
        if len(n) != len(box):
            raise ValueError("grid: one point count per axis")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "n", tuple(int(k) for k in n))

    @property
    def shape(self):
        return self.n

    @property
    def axes(self):
        return [np.linspace(lo, hi, k) for (lo, hi), k in zip(self.box, self.n)]

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``"lo:hi:n,lo:hi:n[,...]"``."""
        box, n = [], []
        for part in text.split(","):
            lo, hi, k = part.split(":")
            box.append((float(lo), float(hi)))
            n.append(int(k))
        return cls(tuple(box), tuple(n))


def helmholtz_residual(f: ScalarField, k2: float, grid: Grid, h: float = LAPLACIAN_STEP) -> ResidualReport:
    """Residual of ``lap f + k2 f`` on a grid.

    The reference scale is ``max |k2 f|``; for ``k2 == 0`` it is ``max |f|``;
    if ``f`` vanishes on the grid, ``relative_max`` is the absolute residual.
    """
    if any(k < 1 for k in grid.n):
        raise ValueError("empty grid")
    pts = grid.points()
    vals = f(pts)
    res = laplace_beltrami(f, pts, h) + k2 * vals
    res = np.asarray(res)
    max_abs = float(np.max(np.abs(res)))
    rms = float(np.sqrt(np.mean(res * res)))
    ref = float(np.max(np.abs(k2 * vals))) if k2 != 0 else float(np.max(np.abs(vals)))
    rel = max_abs / ref if ref > 0 else max_abs
    return ResidualReport(grid.shape, max_abs, rms, ref, rel, pts, res)
