import itertools
import json

import numpy as np
import pytest

from hyperatlas import charts
from hyperatlas.ambient import constraint_residual
from hyperatlas.charts import ChartPoint, from_ambient, get_chart, list_charts, metric, to_ambient
from hyperatlas.errors import DomainError, RangeError


def test_list_charts_counts_and_order():
    assert len(list_charts(2)) == 4
    assert len(list_charts(3)) == 13
    assert len(list_charts()) == 17
    assert [c.id for c in list_charts(2)] == ["polar2", "hyperbolic2", "exponential2", "symmetric2"]
    assert [c.id for c in list_charts() if not c.separable] == ["bipolar-exponential"]


def test_catalog_json_shape():
    data = json.loads(charts.catalog_json(3))
    assert data["schema"] == 1
    assert len(data["charts"]) == 13
    assert set(data["charts"][0]) == {"id", "dim", "coord_names", "domain", "separable"}


@pytest.mark.parametrize(
    "chart, coords, expect",
    [
        ("polar2", (1.0, 0.0), (np.sinh(1), 0.0, np.cosh(1))),
        ("exponential2", (0.0, 1.0), (1.0, 0.5, 1.5)),
        ("symmetric2", (0.0, 0.0), (0.0, 0.0, 1.0)),
        ("spherical-polar", (0.8, np.pi / 2, 0.0), (np.sinh(0.8), 0.0, 0.0, np.cosh(0.8))),
    ],
)
def test_to_ambient_examples(chart, coords, expect):
    np.testing.assert_allclose(to_ambient(ChartPoint(chart, coords)).coords, expect, atol=1e-15)


def test_domain_error_names_coordinate():
    with pytest.raises(DomainError) as exc:
        to_ambient(ChartPoint("polar2", (-0.5, 0.0)))
    assert exc.value.coordinate == "chi"
    with pytest.raises(DomainError) as exc:
        to_ambient(ChartPoint("symmetric3", (0.0, 9.0, 0.0)))
    assert exc.value.coordinate == "u"


def test_periodic_coordinates_accept_any_angle():
    p = to_ambient(ChartPoint("polar2", (1.0, 7.0)))
    q = to_ambient(ChartPoint("polar2", (1.0, 7.0 - 2 * np.pi)))
    np.testing.assert_allclose(p.coords, q.coords, atol=1e-14)


def test_chart_point_validation():
    with pytest.raises(ValueError):
        ChartPoint("polar2", (1.0,))
    with pytest.raises(ValueError):
        ChartPoint("elliptic-exponential", (0, 1, 0), scale=0.0)


@pytest.mark.parametrize(
    "chart, x, expect",
    [
        ("polar2", (0.0, 0.0, 1.0), (0.0, 0.0)),
        ("polar2", (np.sinh(1), 0.0, np.cosh(1)), (1.0, 0.0)),
        ("exponential2", (1.0, 0.5, 1.5), (0.0, 1.0)),
    ],
)
def test_from_ambient_examples(chart, x, expect):
    np.testing.assert_allclose(from_ambient(chart, x).coords, expect, atol=1e-14)


def test_semi_spherical_covers_positive_x3_only():
    with pytest.raises(RangeError):
        from_ambient("semi-spherical-polar", (0.1, 0.2, -0.3, np.sqrt(1.14)))


def test_from_ambient_rejects_off_shell():
    with pytest.raises(RangeError):
        from_ambient("polar2", (0.5, 0.0, 1.0))


@pytest.mark.parametrize("chart", charts.CHART_IDS)
def test_constraint_and_round_trip(chart, rng):
    desc = get_chart(chart)
    c = charts.sample_interior(desc, 1000, rng)
    x = charts.forward(desc, c)
    assert np.max(np.abs(constraint_residual(x))) < 1e-12
    back = charts.forward(desc, charts.inverse(desc, x))
    assert np.max(np.abs(back - x)) < 1e-10


def test_round_trip_coordinates_on_non_periodic_charts(rng):
    for desc in list_charts():
        if any(desc.periodic):
            continue
        c = charts.sample_interior(desc, 200, rng)
        np.testing.assert_allclose(charts.inverse(desc, charts.forward(desc, c)), c, atol=1e-9)


@pytest.mark.parametrize("dim", [2, 3])
def test_overlap_consistency(dim, rng):
    descs = list_charts(dim)
    for a, b in itertools.permutations(descs, 2):
        c = charts.sample_interior(a, 20, rng)
        x = charts.forward(a, c)
        if b.id == "semi-spherical-polar":  # image is the half space x^3 >= 0
            x = x[x[:, 2] >= 0]
            if not len(x):
                continue
        with np.errstate(invalid="ignore"):
            cb = charts.inverse(b, x)
        ok = np.all(np.isfinite(cb), axis=-1)
        if not ok.any():
            continue
        xb = charts.forward(b, cb[ok], check=False)
        assert np.max(np.abs(xb - x[ok])) < 1e-10, (a.id, b.id)


def test_metric_examples():
    g = metric(ChartPoint("polar2", (1.0, 0.3))).g
    np.testing.assert_allclose(g, (1.0, np.sinh(1) ** 2), rtol=1e-15)
    g = metric(ChartPoint("polar-exponential", (0.2, 1.5, 2.0))).g
    np.testing.assert_allclose(g, (1.0, np.exp(-0.4), np.exp(-0.4) * 2.25), rtol=1e-15)
    g = metric(ChartPoint("symmetric2", (0.0, 0.0))).g
    np.testing.assert_allclose(g, (2.0, 2.0), rtol=1e-15)


def test_hyperbolic2_metric_uses_cosh_squared():
    rho = 0.7
    g = metric(ChartPoint("hyperbolic2", (rho, 0.2))).g
    np.testing.assert_allclose(g, (1.0, np.cosh(rho) ** 2), rtol=1e-15)


def test_degenerate_entries_flagged():
    m = metric(ChartPoint("polar2", (0.0, 1.0)))
    assert m.is_degenerate
    assert m.degenerate == (False, True)


def test_with_domain_override():
    wide = get_chart("polar2").with_domain(chi=(0.0, 6.0))
    x = charts.forward(wide, (5.5, 0.0))
    assert x[-1] == pytest.approx(np.cosh(5.5))
