import json

import numpy as np
import pytest

from hyperatlas import charts, diffops
from hyperatlas.diffops import (
    Grid,
    ScalarField,
    helmholtz_residual,
    laplace_beltrami,
    metric_deviation,
    numerical_jacobian,
    pullback_metric,
)
from hyperatlas.errors import DomainError


def _jac_polar2(c):
    chi, phi = c
    return np.array(
        [
            [np.cosh(chi) * np.cos(phi), -np.sinh(chi) * np.sin(phi)],
            [np.cosh(chi) * np.sin(phi), np.sinh(chi) * np.cos(phi)],
            [np.sinh(chi), 0.0],
        ]
    )


def _jac_exponential2(c):
    s, m = c
    e = np.exp(-s)
    return np.array(
        [
            [-e * m, e],
            [np.cosh(s) - 0.5 * e * m * m, e * m],
            [np.sinh(s) - 0.5 * e * m * m, e * m],
        ]
    )


def _jac_hyperbolic2(c):
    r, w = c
    return np.array(
        [
            [np.cosh(r), 0.0],
            [np.sinh(r) * np.sinh(w), np.cosh(r) * np.cosh(w)],
            [np.sinh(r) * np.cosh(w), np.cosh(r) * np.sinh(w)],
        ]
    )


def test_exponential2_mu_column():
    J = numerical_jacobian("exponential2", (0.0, 0.0))
    np.testing.assert_allclose(J[:, 1], [1.0, 0.0, 0.0], atol=1e-10)


def test_jacobian_full_rank(rng):
    for desc in charts.list_charts():
        c = charts.sample_interior(desc, 5, rng)
        J = numerical_jacobian(desc, c)
        assert J.shape == (5, desc.dim + 1, desc.dim)
        assert np.all(np.linalg.matrix_rank(J) == desc.dim)


@pytest.mark.parametrize(
    "chart, jac, point",
    [
        ("polar2", _jac_polar2, (0.9, 0.4)),
        ("exponential2", _jac_exponential2, (0.3, -0.7)),
        ("hyperbolic2", _jac_hyperbolic2, (0.5, 0.8)),
    ],
)
def test_jacobian_second_order_convergence(chart, jac, point):
    exact = jac(point)
    e1 = np.max(np.abs(numerical_jacobian(chart, point, h=1e-2) - exact))
    e2 = np.max(np.abs(numerical_jacobian(chart, point, h=5e-3) - exact))
    assert 3.5 < e1 / e2 < 4.5


def test_step_underflow():
    with pytest.raises(ValueError):
        numerical_jacobian("polar2", (1.0, 0.0), h=1e-14)


def test_pullback_examples():
    m = pullback_metric("polar2", (1.0, 0.2))
    np.testing.assert_allclose(m.g, (1.0, np.sinh(1) ** 2), rtol=1e-6)
    assert m.off_diagonal < 1e-6
    np.testing.assert_allclose(pullback_metric("symmetric3", (0.4, 0.0, 0.0)).g, (1.0, 2.0, 2.0), rtol=1e-6)
    g = pullback_metric("bipolar-exponential", (0.0, np.pi / 2, 1.0)).g
    expect = 1.0 / np.cosh(1.0) ** 2
    np.testing.assert_allclose(g, (1.0, expect, expect), rtol=1e-6)


@pytest.mark.parametrize("chart", charts.CHART_IDS)
def test_line_elements_match_pullback(chart, rng):
    pts = charts.sample_interior(chart, 200, rng)
    rel, off = metric_deviation(chart, pts)
    assert rel.max() < 1e-6
    assert off.max() < 1e-6


def test_scaled_charts_at_other_scale(rng):
    for chart in ("elliptic-exponential", "bipolar-exponential"):
        pts = charts.sample_interior(chart, 50, rng)
        rel, off = metric_deviation(chart, pts, scale=0.6)
        assert rel.max() < 1e-6 and off.max() < 1e-6


def test_corrupted_metric_is_caught(rng):
    pts = charts.sample_interior("polar2", 50, rng)
    desc = charts.get_chart("polar2")

    def wrong(c, a=1.0):  # sinh instead of sinh^2
        g = desc.metric(c, a)
        g[..., 1] = np.sinh(c[..., 0])
        return g

    rel, _ = metric_deviation(desc, pts, metric=wrong)
    assert rel.max() > 1e-2


def _field(chart, f):
    return ScalarField(chart, f)


def test_laplacian_examples():
    const = _field("exponential3", lambda c: np.full(c.shape[:-1], 3.0))
    assert abs(laplace_beltrami(const, (0.1, 0.2, -0.3))) < 1e-8
    f = _field("polar2", lambda c: np.cosh(c[..., 0]))
    assert laplace_beltrami(f, (0.8, 1.0)) == pytest.approx(2 * np.cosh(0.8), rel=1e-6)
    f = _field("exponential2", lambda c: np.exp(c[..., 0] / 2))
    assert laplace_beltrami(f, (0.3, 0.1)) == pytest.approx(-0.25 * np.exp(0.15), rel=1e-6)


def test_helmholtz_residual_examples():
    g2 = Grid(((-1, 1), (-1, 1)), 21)
    zero = _field("exponential2", lambda c: np.zeros(c.shape[:-1]))
    assert helmholtz_residual(zero, 0.7, g2).max_abs_residual == 0.0
    f = _field("exponential2", lambda c: np.exp(c[..., 0] / 2))
    assert helmholtz_residual(f, 0.25, g2).relative_max < 1e-6
    f3 = _field("exponential3", lambda c: np.exp(c[..., 0]))
    assert helmholtz_residual(f3, 1.0, Grid(((-1, 1),) * 3, 11)).relative_max < 1e-6


def test_reference_scale_when_k2_zero():
    f = _field("polar2", lambda c: 2.0 + 0 * c[..., 0])
    rep = helmholtz_residual(f, 0.0, Grid(((0.5, 1.5), (0.0, 6.0)), 5))
    assert rep.reference_scale == 2.0


@pytest.mark.parametrize("dim", [2, 3])
def test_laplacian_chart_invariance(dim, rng):
    # height function x^{n+1}: lap = n x^{n+1} in every chart
    x = None
    for desc in charts.list_charts(dim):
        if x is None:
            c0 = charts.sample_interior(desc, 1, rng, margin=0.3)[0]
            x = charts.forward(desc, c0)
        c = charts.inverse(desc, x)
        if not np.all(np.isfinite(c)):
            continue
        f = ScalarField(desc.id, lambda u, d=desc: charts.forward(d, u, check=False)[..., -1])
        wide = desc.with_domain(**{n: (-1e9, 1e9) for n in desc.coord_names})
        f = ScalarField(wide, f.eval)
        assert laplace_beltrami(f, c) == pytest.approx(dim * x[-1], rel=1e-5), desc.id


def test_stencil_leaving_domain():
    f = _field("polar2", lambda c: np.cosh(c[..., 0]))
    with pytest.raises(DomainError) as exc:
        laplace_beltrami(f, (0.001, 0.0))
    assert exc.value.coordinate == "chi"


def test_vectorised_equals_pointwise(rng):
    f = _field("symmetric2", lambda c: np.cos(c[..., 0]) * np.exp(c[..., 1]))
    pts = charts.sample_interior("symmetric2", 7, rng)
    vec = laplace_beltrami(f, pts)
    one = [laplace_beltrami(f, p) for p in pts]
    assert np.array_equal(vec, one)


def test_grid_and_report_serialisation():
    g = Grid.parse("0:1:3,-1:1:5")
    assert g.shape == (3, 5)
    assert g.points().shape == (3, 5, 2)
    with pytest.raises(ValueError):
        helmholtz_residual(_field("polar2", lambda c: c[..., 0]), 1.0, Grid(((0.5, 1), (0, 1)), (0, 3)))
    f = _field("exponential2", lambda c: np.exp(c[..., 0] / 2))
    rep = helmholtz_residual(f, 0.25, Grid(((-1, 1), (-1, 1)), 3))
    data = json.loads(rep.to_json())
    assert data["schema"] == 1 and data["grid_shape"] == [3, 3]
    lines = rep.to_csv(["sigma", "mu"]).splitlines()
    assert lines[0] == "sigma,mu,residual" and len(lines) == 10
