"""Klein and Poincare ball models and hyperboloid geodesics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hyperatlas.ambient import AmbientPoint, minkowski_dot
from hyperatlas.errors import DegenerateInputError, RangeError


@dataclass(frozen=True, eq=False)
class DiskPoint:
    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        if y.ndim != 1 or y.size not in (2, 3):
            raise ValueError(f"expected 2 or 3 coordinates, got shape {y.shape}")
        if not y @ y < 1.0:
            raise RangeError(f"|y| = {np.sqrt(y @ y):g} is not inside the unit ball")
        y.flags.writeable = False
        object.__setattr__(self, "y", y)

    @property
    def dim(self) -> int:
        return self.y.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.y, dtype=dtype)


def _x(p):
    return p.coords if isinstance(p, AmbientPoint) else np.asarray(p, dtype=float)


def _y(d):
    return d.y if isinstance(d, DiskPoint) else np.asarray(d, dtype=float)


def klein_coords(x) -> np.ndarray:
    """Central projection ``x^mu / x^{n+1}``, vectorised over leading axes."""
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / x[..., -1:]


def poincare_coords(x) -> np.ndarray:
    """Projection ``x^mu / (1 + x^{n+1})``, vectorised over leading axes."""
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / (1.0 + x[..., -1:])


def klein(p) -> DiskPoint:
    return DiskPoint(klein_coords(_x(p)))


def poincare(p) -> DiskPoint:
    return DiskPoint(poincare_coords(_x(p)))


def _check_ball(y):
    r2 = np.sum(y * y, axis=-1)
    if np.any(r2 >= 1.0):
        raise RangeError("disk coordinates must satisfy |y| < 1")
    return r2


def klein_inverse_coords(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    t = 1.0 / np.sqrt(1.0 - _check_ball(y))
    return np.concatenate([y * t[..., None], t[..., None]], axis=-1)


def poincare_inverse_coords(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    r2 = _check_ball(y)
    d = 1.0 - r2
    return np.concatenate([2.0 * y / d[..., None], ((1.0 + r2) / d)[..., None]], axis=-1)


def klein_inverse(y) -> AmbientPoint:
    return AmbientPoint(klein_inverse_coords(_y(y)))


def poincare_inverse(y) -> AmbientPoint:
    return AmbientPoint(poincare_inverse_coords(_y(y)))


def klein_to_poincare(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return y / (1.0 + np.sqrt(1.0 - np.sum(y * y, axis=-1)))[..., None]


def distance(p, q) -> float:
    return float(np.arccosh(max(1.0, -minkowski_dot(_x(p), _x(q)))))


def geodesic_coords(p, q, t) -> np.ndarray:
    """Points ``cosh(t d) p + sinh(t d) w`` of the geodesic from p (t=0) to q (t=1).

    ``w`` is the unit tangent at p obtained by Minkowski Gram-Schmidt of q
    against p, and ``d`` the hyperbolic distance. ``t`` may be an array.
    """
    a, b = _x(p), _x(q)
    if a.shape != b.shape:
        raise ValueError("points of different dimension")
    c = -float(minkowski_dot(a, b))
    # sqrt(c^2 - 1) from the chord, stable for nearby points
    diff = b - a
    chord2 = float(minkowski_dot(diff, diff))  # = 2(c - 1)
    s2 = chord2 * (1.0 + 0.25 * chord2)  # = c^2 - 1
    if s2 <= 1e-28:
        raise DegenerateInputError("geodesic endpoints coincide")
    s = np.sqrt(s2)
    d = np.arcsinh(s)
    w = (b - c * a) / s
    t = np.asarray(t, dtype=float)[..., None]
    return np.cosh(t * d) * a + np.sinh(t * d) * w


def geodesic(p, q, t: float) -> AmbientPoint:
    return AmbientPoint(geodesic_coords(p, q, t))


def circumcircle(a, b, c):
    """Centre and radius of the circle through three planar points.

    Returns ``None`` when the points are collinear to working precision.
    """
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    scale = max(np.abs([ax, ay, bx, by, cx, cy]).max(), 1e-300) ** 2
    if abs(d) < 1e-14 * scale:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    centre = np.array([ux, uy])
    return centre, float(np.hypot(ax - ux, ay - uy))


def line_deviation(points) -> float:
    """Largest distance of planar/spatial points from the line through the first and last."""
    pts = np.asarray(points, dtype=float)
    a, b = pts[0], pts[-1]
    u = (b - a) / np.linalg.norm(b - a)
    rel = pts - a
    perp = rel - np.outer(rel @ u, u)
    return float(np.max(np.linalg.norm(perp, axis=-1)))
