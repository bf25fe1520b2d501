"""Adaptive Dormand-Prince 5(4) integration of u'' + p(t) u' + q(t) u = 0.

The stepper works on the first-order system y = (u, u'). Dense output is a
quintic Hermite interpolant built from u, u' and u'' (the latter read off the
equation) at every accepted step, so it is C^2 and its second derivative is
accurate enough to take finite differences of.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hyperatlas.errors import IntegrationError

DEFAULT_TOL = 1e-10
FROBENIUS_EPS = 1e-4

# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])


def _rhs(ode):
    def f(t, y):
        return np.array([y[1], -ode.p(t) * y[1] - ode.q(t) * y[0]])

    return f


def _initial_step(f, t0, y0, f0, direction, tol):
    scale = tol + tol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _march(f, t0, y0, t_end, tol, max_steps=200_000):
    """Integrate from t0 to t_end; returns node times, states and derivatives."""
    # overflow near a blow-up shows up as a non-finite error estimate
    with np.errstate(over="ignore", invalid="ignore"):
        return _march_steps(f, t0, y0, t_end, tol, max_steps)


def _march_steps(f, t0, y0, t_end, tol, max_steps):
    direction = 1.0 if t_end >= t0 else -1.0
    t, y = float(t0), np.asarray(y0, dtype=float)
    fy = f(t, y)
    ts, ys, fs = [t], [y], [fy]
    if t_end == t0:
        return np.array(ts), np.array(ys), np.array(fs)
    h = min(_initial_step(f, t, y, fy, direction, tol), abs(t_end - t))
    k = np.empty((7, y.size))
    for _ in range(max_steps):
        h_min = 1e-13 * max(1.0, abs(t))
        if h < h_min:
            raise IntegrationError(f"step size collapsed near t = {t:.6g}", t=t)
        last = abs(t_end - t) <= h * (1 + 1e-12)
        if last:
            h = abs(t_end - t)
        hs = direction * h
        k[0] = fy
        for i in range(1, 7):
            k[i] = f(t + _C[i] * hs, y + hs * (np.asarray(_A[i]) @ k[:i]))
        y_new = y + hs * (_B[:6] @ k[:6])
        err_vec = hs * (_E @ k)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((err_vec / scale) ** 2))
        if not np.isfinite(err):
            h *= 0.2
            continue
        if err <= 1.0:
            t = t_end if last else t + hs
            y, fy = y_new, k[6].copy()
            ts.append(t)
            ys.append(y)
            fs.append(fy)
            if last:
                return np.array(ts), np.array(ys), np.array(fs)
            fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            h *= fac
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
    raise IntegrationError(f"too many steps before reaching t = {t_end}", t=t)


@dataclass
class FactorSolution:
    """Numerically integrated separated factor with C^2 dense output."""

    coordinate: str
    factor: str
    t: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    du: np.ndarray = field(repr=False)
    d2u: np.ndarray = field(repr=False)
    initial_conditions: tuple = ()
    method: str = "ode"

    @property
    def interval(self):
        return float(self.t[0]), float(self.t[-1])

    def _coeffs(self, tq):
        tq = np.asarray(tq, dtype=float)
        lo, hi = self.interval
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(tq < lo - slack) or np.any(tq > hi + slack):
            raise ValueError(
                f"{self.factor}({self.coordinate}) evaluated outside [{lo:g}, {hi:g}]"
            )
        i = np.clip(np.searchsorted(self.t, tq, side="right") - 1, 0, len(self.t) - 2)
        H = self.t[i + 1] - self.t[i]
        s = (tq - self.t[i]) / H
        c0 = self.u[i]
        c1 = H * self.du[i]
        c2 = 0.5 * H * H * self.d2u[i]
        A = self.u[i + 1] - (c0 + c1 + c2)
        B = H * self.du[i + 1] - (c1 + 2 * c2)
        C = H * H * self.d2u[i + 1] - 2 * c2
        c3 = 10 * A - 4 * B + 0.5 * C
        c4 = -15 * A + 7 * B - C
        c5 = 6 * A - 3 * B + 0.5 * C
        return s, H, (c0, c1, c2, c3, c4, c5)

    def __call__(self, tq):
        s, _, c = self._coeffs(tq)
        return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))))

    def derivative(self, tq):
        s, H, c = self._coeffs(tq)
        return (c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])))) / H

    def second_derivative(self, tq):
        s, H, c = self._coeffs(tq)
        return (2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]))) / (H * H)


def frobenius_start(origin: float, exponent: float, eps: float = FROBENIUS_EPS):
    """Leading-order data ``(t, t^s, s t^(s-1))`` at ``origin + eps`` (local t = eps)."""
    s = float(exponent)
    du = s * eps ** (s - 1) if s != 0 else 0.0
    return origin + eps, eps**s, du


def integrate_ode(ode, ic, interval, tol: float = DEFAULT_TOL, t0: float | None = None):
    """Integrate a separated equation over ``interval`` from ``(u0, du0)`` at ``t0``.

    ``t0`` defaults to ``interval[0]`` and may lie inside the interval, in
    which case the solution is marched both ways. Singular points of the
    equation must lie outside ``[t0, interval]`` unless the start sits
    just off a regular singular point (see :func:`frobenius_start`).
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    t0 = a if t0 is None else float(t0)
    if not a <= t0 <= b:
        raise ValueError(f"start {t0} outside [{a}, {b}]")
    for sp in getattr(ode, "singular_points", ()):
        if a <= sp <= b:
            raise IntegrationError(
                f"singular point {sp:g} of the {ode.factor} equation lies in [{a:g}, {b:g}]",
                t=sp,
            )
    f = _rhs(ode)
    y0 = np.array([float(ic[0]), float(ic[1])])
    parts_t, parts_y, parts_f = [], [], []
    if t0 > a:
        tb, yb, fb = _march(f, t0, y0, a, tol)
        parts_t.append(tb[::-1][:-1])
        parts_y.append(yb[::-1][:-1])
        parts_f.append(fb[::-1][:-1])
    tf, yf, ff = _march(f, t0, y0, b, tol)
    parts_t.append(tf)
    parts_y.append(yf)
    parts_f.append(ff)
    t = np.concatenate(parts_t)
    y = np.concatenate(parts_y)
    fy = np.concatenate(parts_f)
    return FactorSolution(
        coordinate=getattr(ode, "coordinate", "t"),
        factor=getattr(ode, "factor", "u"),
        t=t,
        u=y[:, 0],
        du=y[:, 1],
        d2u=fy[:, 1],
        initial_conditions=(t0, float(ic[0]), float(ic[1])),
    )
