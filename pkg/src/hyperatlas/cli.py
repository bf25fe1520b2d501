"""Command-line interface: ``hyperatlas {list,transform,metric-check,mode-check,render}``.

Exit codes: 0 success or check passed; 1 check failed, domain or I/O error;
2 usage error, inadmissible mode, or a chart that does not separate.

``HYPERATLAS_TOL`` overrides the check tolerances, either as one number
applied to both checks or as ``metric=1e-6,mode=1e-5,factor=1e-7``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from hyperatlas import charts, diffops, projections
from hyperatlas.ambient import constraint_residual
from hyperatlas.diffops import Grid
from hyperatlas.errors import AdmissibilityError, DomainError, NotSeparableError, RangeError
from hyperatlas.helmholtz import modes
from hyperatlas.helmholtz.systems import ModeSpec

TOL_ENV = "HYPERATLAS_TOL"
DEFAULT_TOLERANCES = {
    "metric": diffops.OFF_DIAGONAL_TOL,
    "mode": modes.PDE_TOL,
    "factor": modes.FACTOR_TOL,
}


def tolerances(environ=None) -> dict:
    """Default tolerances with any ``HYPERATLAS_TOL`` override applied."""
    env = os.environ if environ is None else environ
    out = dict(DEFAULT_TOLERANCES)
    text = env.get(TOL_ENV, "").strip()
    if not text:
        return out
    if "=" not in text:
        v = float(text)
        out["metric"] = out["mode"] = v
        return out
    for part in text.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in out:
            raise ValueError(f"{TOL_ENV}: unknown key {key!r} (expected one of {sorted(out)})")
        out[key] = float(val)
    return out


def _floats(text: str) -> list:
    text = text.strip()
    return [float(v) for v in text.split(",")] if text else []


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _write_or_print(text: str, path: str | None):
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- list -----------------------------------------------------------------


def cmd_list(args) -> int:
    if args.format == "json":
        print(charts.catalog_json(args.dim))
        return 0
    rows = [("id", "dim", "coordinates", "separable")]
    for c in charts.list_charts(args.dim):
        rows.append((c.id, str(c.dim), ",".join(c.coord_names), "true" if c.separable else "false"))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return 0


# --- transform --------------------------------------------------------------


def cmd_transform(args) -> int:
    desc = charts.get_chart(args.chart)
    coords = np.array(_floats(args.coords))
    p = charts.to_ambient(charts.ChartPoint(desc.id, coords, args.scale))
    x = p.coords
    out = {
        "schema": 1,
        "from": {"chart": desc.id, "coords": coords.tolist(), "scale": args.scale},
        "to": args.to,
        "ambient": x.tolist(),
        "constraint_residual": float(constraint_residual(x)),
    }
    if args.to == "ambient":
        out["result"] = x.tolist()
    elif args.to == "klein":
        out["result"] = projections.klein(p).y.tolist()
    elif args.to == "poincare":
        out["result"] = projections.poincare(p).y.tolist()
    else:
        target = charts.get_chart(args.to)
        if target.dim != desc.dim:
            raise ValueError(f"{desc.id} is {desc.dim}-dimensional, {target.id} is {target.dim}-dimensional")
        out["result"] = [float(v) for v in charts.from_ambient(target.id, p, args.scale).coords]
    print(_dump(out))
    return 0


# --- metric-check -------------------------------------------------------------


def cmd_metric_check(args) -> int:
    tol = tolerances()["metric"]
    ids = charts.CHART_IDS if args.chart == "all" else (charts.get_chart(args.chart).id,)
    rng = np.random.default_rng(args.seed)
    rows, ok = [], True
    print(f"seed {args.seed}; {args.samples} samples per chart; step {args.step:g}; tolerance {tol:g}")
    for cid in ids:
        desc = charts.get_chart(cid)
        pts = charts.sample_interior(desc, args.samples, rng)
        rel, off = diffops.metric_deviation(desc, pts, args.step)
        passed = bool(np.all(rel < tol) and np.all(off < tol))
        ok &= passed
        print(f"{cid:24s} max_rel={rel.max():.3e} max_offdiag={off.max():.3e} {'PASS' if passed else 'FAIL'}")
        for i, (c, r, o) in enumerate(zip(pts, rel, off)):
            coords = list(c) + [""] * (3 - len(c))
            rows.append([cid, i, *[repr(float(v)) if v != "" else "" for v in coords], repr(float(r)), repr(float(o))])
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["chart", "sample", "c1", "c2", "c3", "max_rel_deviation", "max_off_diagonal"])
            w.writerows(rows)
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


# --- mode-check ---------------------------------------------------------------


def cmd_mode_check(args) -> int:
    tol = tolerances()
    spec = ModeSpec(args.chart, args.k2, lam=args.lam, ell=args.ell, m=args.m, scale=args.a)
    grid = Grid.parse(args.grid) if args.grid else None
    report = modes.verify_mode(
        spec, grid=grid, closed_form=not args.integrate, pde_tol=tol["mode"], factor_tol=tol["factor"]
    )
    data = report.to_dict()
    _write_or_print(_dump(data) + "\n", args.out)
    if args.out and args.out != "-":
        print(f"relative_max {report.pde.relative_max:.3e}; written to {args.out}")
    return 0 if report.pde.relative_max < report.pde_tol else 1


# --- render -------------------------------------------------------------------


def cmd_render(args) -> int:
    from hyperatlas import render

    desc = charts.get_chart(args.chart)
    if desc.dim != 2:
        raise ValueError(f"only two-dimensional charts can be drawn, {desc.id} has dim {desc.dim}")
    iso = list(render.DEFAULT_ISO[desc.id]) if not args.no_defaults else [(), ()]
    for item in args.iso or []:
        name, sep, vals = item.partition("=")
        if not sep:
            raise ValueError(f"--iso expects NAME=v1,v2,... got {item!r}")
        axis = int(name) if name.isdigit() else desc.coord_names.index(name) if name in desc.coord_names else None
        if axis not in (0, 1):
            raise ValueError(f"--iso: {name!r} is not a coordinate of {desc.id} {desc.coord_names}")
        iso[axis] = tuple(_floats(vals))
    spec = render.RenderSpec(
        desc.id,
        args.projection,
        iso=tuple(iso),
        samples=args.samples,
        strokes=tuple(args.strokes.split(",")),
        stroke_width=args.stroke_width,
    )
    _write_or_print(render.render_svg(spec), args.out)
    return 0


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperatlas", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="chart catalog")
    p.add_argument("--dim", type=int, choices=(2, 3))
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("transform", help="map a chart point to the ambient space, a disk, or another chart")
    p.add_argument("--chart", required=True)
    p.add_argument("--coords", required=True, help="comma-separated; write --coords=-1,0 for a leading minus")
    p.add_argument("--to", default="ambient", help="ambient, klein, poincare or a chart id")
    p.add_argument("--scale", type=float, default=1.0, help="scale parameter a of the scaled charts")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("metric-check", help="closed-form line elements against the numerical pullback")
    p.add_argument("--chart", default="all")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=diffops.JACOBIAN_STEP)
    p.add_argument("--out", help="CSV file with one row per sample")
    p.set_defaults(func=cmd_metric_check)

    p = sub.add_parser("mode-check", help="build a product mode and check the Helmholtz residual")
    p.add_argument("--chart", required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--ell", type=float, default=0.0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--a", type=float, default=1.0, help="scale parameter of the scaled charts")
    p.add_argument("--grid", help='"lo:hi:n,lo:hi:n[,lo:hi:n]"; default: the chart\'s verification box, 21 per axis')
    p.add_argument("--integrate", action="store_true", help="integrate every factor, no closed forms")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_mode_check)

    p = sub.add_parser("render", help="SVG of a planar chart's iso-curves")
    p.add_argument("--chart", required=True)
    p.add_argument("--projection", choices=("klein", "poincare"), default="poincare")
    p.add_argument("--iso", action="append", metavar="NAME=v1,v2,...", help="iso values for one coordinate")
    p.add_argument("--no-defaults", action="store_true", help="draw only the families given with --iso")
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--strokes", default=",".join(("#1f77b4", "#d62728")))
    p.add_argument("--stroke-width", type=float, default=1.5)
    p.add_argument("--out", required=True, help="SVG path, or - for stdout")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotSeparableError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AdmissibilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, RangeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
