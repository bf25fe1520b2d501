"""SVG drawings of two-dimensional charts in the Klein or Poincare disk.

Each figure shows the unit circle and the iso-curves of both coordinates of a
chart: for every listed value of one coordinate, the other is swept over its
domain (a full turn for periodic coordinates). Curves are refined by
bisection until no chord strays more than half a pixel from the curve, and
numbers are written with two decimals, so output is byte-stable for a fixed
spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hyperatlas import charts
from hyperatlas.errors import DomainError
from hyperatlas.projections import klein_coords, poincare_coords

CANVAS = 1000.0
MARGIN = 0.05
RADIUS = 0.5 * CANVAS * (1.0 - 2.0 * MARGIN)
CHORD_TOL = 0.5
MAX_DEPTH = 24
PROJECTIONS = ("klein", "poincare")
PALETTE = ("#1f77b4", "#d62728")

# iso-value selections for the four planar charts; aesthetic, not prescribed
DEFAULT_ISO = {
    "polar2": ((0.5, 1.0, 1.5, 2.0, 2.5, 3.0), tuple(np.round(np.arange(12) * np.pi / 6, 12))),
    "hyperbolic2": (tuple(np.arange(-2.0, 2.01, 0.5)), tuple(np.arange(-2.0, 2.01, 0.5))),
    "exponential2": (tuple(np.arange(-1.5, 1.51, 0.5)), tuple(np.arange(-2.0, 2.01, 0.5))),
    "symmetric2": (tuple(np.arange(-1.5, 1.51, 0.5)), tuple(np.arange(-1.5, 1.51, 0.5))),
}


@dataclass(frozen=True)
class RenderSpec:
    """What to draw.

    Parameters
    ----------
    chart : str
        A two-dimensional chart id.
    projection : {"klein", "poincare"}
    iso : tuple of two sequences
        ``iso[i]`` lists the values at which coordinate ``i`` is held fixed.
        ``None`` selects :data:`DEFAULT_ISO`.
    samples : int
        Initial uniform samples per curve before adaptive refinement.
    strokes : tuple of two str
        Stroke colours for the two families.
    stroke_width : float
    """

    chart: str
    projection: str = "poincare"
    iso: tuple | None = None
    samples: int = 33
    strokes: tuple = PALETTE
    stroke_width: float = 1.5
    out: str | None = field(default=None, compare=False)

    def __post_init__(self):
        desc = charts.get_chart(self.chart)
        if desc.dim != 2:
            raise ValueError(f"only two-dimensional charts can be drawn, {desc.id} has dim {desc.dim}")
        if self.projection not in PROJECTIONS:
            raise ValueError(f"projection must be one of {PROJECTIONS}, got {self.projection!r}")
        if int(self.samples) != self.samples or self.samples < 2:
            raise ValueError(f"samples must be an integer >= 2, got {self.samples}")
        if len(self.strokes) != 2:
            raise ValueError("one stroke colour per coordinate family")
        iso = DEFAULT_ISO[desc.id] if self.iso is None else self.iso
        if len(iso) != 2:
            raise ValueError("iso needs one value list per coordinate")
        iso = tuple(tuple(float(v) for v in vals) for vals in iso)
        for i, vals in enumerate(iso):
            lo, hi = desc.domain[i]
            if desc.periodic[i]:
                continue
            for v in vals:
                if not lo <= v <= hi:
                    raise DomainError(
                        f"{desc.id}: iso value {desc.coord_names[i]}={v} outside [{lo}, {hi}]",
                        coordinate=desc.coord_names[i],
                    )
        object.__setattr__(self, "chart", desc.id)
        object.__setattr__(self, "iso", iso)
        object.__setattr__(self, "samples", int(self.samples))


def _project(spec: RenderSpec, coords):
    x = charts.forward(spec.chart, coords, check=False)
    y = klein_coords(x) if spec.projection == "klein" else poincare_coords(x)
    return y


def to_pixels(y):
    """Disk coordinates to canvas pixels (y axis pointing up)."""
    y = np.asarray(y, dtype=float)
    return np.stack([0.5 * CANVAS + RADIUS * y[..., 0], 0.5 * CANVAS - RADIUS * y[..., 1]], axis=-1)


def _sweep_range(desc, axis):
    lo, hi = desc.domain[axis]
    if desc.periodic[axis]:
        return lo, lo + 2.0 * np.pi
    return lo, hi


def _refine(f, t0, t1, p0, p1, depth, out):
    tm = 0.5 * (t0 + t1)
    pm = f(tm)
    chord = p1 - p0
    n = np.hypot(*chord)
    dev = np.hypot(*(pm - p0)) if n == 0 else abs(chord[0] * (pm - p0)[1] - chord[1] * (pm - p0)[0]) / n
    if dev > CHORD_TOL and depth < MAX_DEPTH:
        _refine(f, t0, tm, p0, pm, depth + 1, out)
        _refine(f, tm, t1, pm, p1, depth + 1, out)
    else:
        out.append(p1)


def iso_curve(spec: RenderSpec, axis: int, value: float) -> np.ndarray:
    """Pixel polyline of the curve where coordinate ``axis`` equals ``value``."""
    desc = charts.get_chart(spec.chart)
    free = 1 - axis
    lo, hi = _sweep_range(desc, free)

    def point(t):
        c = np.empty(2)
        c[axis], c[free] = value, t
        return to_pixels(_project(spec, c))

    ts = np.linspace(lo, hi, spec.samples)
    pts = [point(ts[0])]
    for a, b in zip(ts[:-1], ts[1:]):
        _refine(point, a, b, pts[-1], point(b), 0, pts)
    return np.array(pts)


def curves(spec: RenderSpec):
    """``[(axis, value, pixel polyline), ...]`` in drawing order."""
    return [(axis, v, iso_curve(spec, axis, v)) for axis in (0, 1) for v in spec.iso[axis]]


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _path(pts) -> str:
    head, *tail = pts
    d = f"M{_fmt(head[0])},{_fmt(head[1])}"
    return d + "".join(f" L{_fmt(x)},{_fmt(y)}" for x, y in tail)


def render_svg(spec: RenderSpec) -> str:
    """SVG 1.1 document for ``spec``."""
    desc = charts.get_chart(spec.chart)
    c = _fmt(0.5 * CANVAS)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS:.0f}" '
        f'height="{CANVAS:.0f}" viewBox="0 0 {CANVAS:.0f} {CANVAS:.0f}">',
        f"<title>{desc.id} coordinates, {spec.projection} projection</title>",
        f'<circle cx="{c}" cy="{c}" r="{_fmt(RADIUS)}" fill="none" stroke="#000000" stroke-width="2.00"/>',
    ]
    for axis in (0, 1):
        if not spec.iso[axis]:
            continue
        lines.append(
            f'<g id="iso-{desc.coord_names[axis]}" fill="none" stroke="{spec.strokes[axis]}" '
            f'stroke-width="{_fmt(spec.stroke_width)}">'
        )
        for v in spec.iso[axis]:
            lines.append(f'<path data-value="{v:.6g}" d="{_path(iso_curve(spec, axis, v))}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(spec: RenderSpec, path: str | None = None) -> str:
    """Render and write to ``path`` (default ``spec.out``); returns the path."""
    path = path or spec.out
    if path is None:
        raise ValueError("no output path")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(spec))
    return path
