"""Minkowski space, the upper hyperboloid sheet, and its isometry generators.

Hyperbolic n-space (n = 2, 3) is the sheet ``x . x = -1``, ``x[n] >= 1`` of
R^{n,1} with the form ``diag(1, ..., 1, -1)``. Curvature radius is fixed to 1.

Points with ``x[n]`` beyond roughly 30 cannot hold the constraint to 1e-12 in
absolute terms (the rounding of ``x[n]**2`` alone exceeds it), so the
constructors check the constraint relative to ``max(1, x[n]**2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONSTRAINT_TOL = 1e-12


def eta(dim: int) -> np.ndarray:
    """Minkowski form of R^{dim,1}."""
    return np.diag([1.0] * dim + [-1.0])


def minkowski_dot(x, y) -> np.ndarray:
    """Minkowski product along the last axis of two coordinate arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]


def constraint_residual(x) -> np.ndarray:
    """``x . x + 1`` along the last axis."""
    return minkowski_dot(x, x) + 1.0


@dataclass(frozen=True, eq=False)
class AmbientPoint:
    """A point of H^dim stored by its dim+1 Minkowski coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1 or c.size not in (3, 4):
            raise ValueError(f"expected 3 or 4 coordinates, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coordinate")
        if c[-1] < 1.0 - 1e-9:
            raise ValueError(f"x^{c.size} = {c[-1]:g} < 1: not on the upper sheet")
        err = abs(float(constraint_residual(c)))
        if err > CONSTRAINT_TOL * max(1.0, c[-1] ** 2):
            raise ValueError(f"point violates x.x = -1 by {err:.3g}")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    @classmethod
    def origin(cls, dim: int) -> "AmbientPoint":
        return cls(np.r_[np.zeros(dim), 1.0])

    @classmethod
    def lift(cls, spatial) -> "AmbientPoint":
        """Complete spatial coordinates x^1..x^n with x^{n+1} = sqrt(1 + |x|^2)."""
        s = np.asarray(spatial, dtype=float)
        return cls(np.r_[s, np.sqrt(1.0 + s @ s)])

    def constraint_residual(self) -> float:
        return float(constraint_residual(self.coords))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __repr__(self):
        return f"AmbientPoint({np.array2string(self.coords, precision=6)})"


def _coords(p) -> np.ndarray:
    return p.coords if isinstance(p, AmbientPoint) else np.asarray(p, dtype=float)


def minkowski_inner(p, q) -> float:
    """Minkowski product of two points of the same dimension."""
    a, b = _coords(p), _coords(q)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size - 1} vs {b.size - 1}")
    return float(minkowski_dot(a, b))


@dataclass(frozen=True, eq=False)
class Isometry:
    """A matrix L with det L = 1 and L^T eta L = eta."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (3, 4):
            raise ValueError(f"expected a 3x3 or 4x4 matrix, got {m.shape}")
        n = m.shape[0] - 1
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if np.max(np.abs(m.T @ eta(n) @ m - eta(n))) > CONSTRAINT_TOL * scale:
            raise ValueError("matrix does not preserve the Minkowski form")
        if abs(np.linalg.det(m) - 1.0) > CONSTRAINT_TOL * scale**n:
            raise ValueError("matrix is not orientation preserving")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1

    def inverse(self) -> "Isometry":
        e = eta(self.dim)
        return Isometry(e @ self.matrix.T @ e)

    def __matmul__(self, other):
        if isinstance(other, Isometry):
            return Isometry(self.matrix @ other.matrix)
        if isinstance(other, AmbientPoint):
            return AmbientPoint(self.matrix @ other.coords)
        return np.asarray(other, dtype=float) @ self.matrix.T

    def __repr__(self):
        return f"Isometry(\n{np.array2string(self.matrix, precision=6)})"


def _check_dim(dim):
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")


def rotation(dim: int, phi: float) -> Isometry:
    """Rotation in the x^1 x^2 plane, identity on the other axes.

    The matrix is ``[[cos, sin], [-sin, cos]]`` on the plane, i.e. it turns
    vectors clockwise by ``phi``.
    """
    _check_dim(dim)
    m = np.eye(dim + 1)
    c, s = np.cos(phi), np.sin(phi)
    m[0, 0], m[0, 1], m[1, 0], m[1, 1] = c, s, -s, c
    return Isometry(m)


def _boost_x(dim, a):
    m = np.eye(dim + 1)
    c, s = np.cosh(a), np.sinh(a)
    m[0, 0], m[0, dim], m[dim, 0], m[dim, dim] = c, s, s, c
    return m


def boost(dim: int, phi: float, a: float) -> Isometry:
    """Boost of rapidity ``a``, conjugated by ``rotation(dim, phi)``."""
    _check_dim(dim)
    r = rotation(dim, phi).matrix
    return Isometry(r @ _boost_x(dim, a) @ r.T)


def horolation(mu: float, dim: int = 2) -> Isometry:
    """Parabolic isometry M(mu) fixing one ideal point; M(mu) M(nu) = M(mu + nu).

    For ``dim=3`` the H^2 matrix acts on (x^1, x^3, x^4) and x^2 is left
    alone. That block extension is this package's choice, not a classical
    formula.
    """
    _check_dim(dim)
    h = mu * mu / 2.0
    block = np.array(
        [[1.0, -mu, mu], [mu, 1.0 - h, h], [mu, -h, 1.0 + h]]
    )
    if dim == 2:
        return Isometry(block)
    m = np.eye(4)
    idx = np.array([0, 2, 3])
    m[np.ix_(idx, idx)] = block
    return Isometry(m)


def general_point(phi: float, a: float, b: float) -> AmbientPoint:
    """Point of H^2 reached from the origin by two orthogonal boosts and a rotation.

    Returns ``(cos(phi) sinh b - sin(phi) sinh a cosh b,
    sin(phi) sinh b + cos(phi) sinh a cosh b, cosh a cosh b)``, which reduces
    to the polar chart when ``a = 0``. Because :func:`rotation` turns clockwise,
    this counter-clockwise composite is built with negated angles.
    """
    m = (
        rotation(2, -phi).matrix
        @ boost(2, -np.pi / 2, a).matrix
        @ boost(2, 0.0, b).matrix
    )
    return AmbientPoint(m[:, 2])
