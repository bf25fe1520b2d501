import json

import numpy as np
import pytest

from hyperatlas import charts
from hyperatlas.diffops import Grid
from hyperatlas.errors import AdmissibilityError, NotSeparableError
from hyperatlas.helmholtz import modes
from hyperatlas.helmholtz.modes import Basis, build_mode, draw_spec, verify_mode
from hyperatlas.helmholtz.systems import DEFAULT_BOX, ModeSpec, separated_odes

SEPARABLE = [c.id for c in charts.list_charts() if c.separable]


def test_polar2_equations():
    X, Phi = separated_odes(ModeSpec("polar2", 1.3, lam=2))
    assert (X.coordinate, Phi.coordinate) == ("chi", "phi")
    assert Phi.constant == (0.0, 4.0)
    t = np.array([0.4, 1.1])
    np.testing.assert_allclose(X.p(t), 1 / np.tanh(t))
    np.testing.assert_allclose(X.q(t), 1.3 - 4 / np.sinh(t) ** 2)


def test_spherical_radial_l0():
    X = separated_odes(ModeSpec("spherical-polar", 0.8))[0]
    t = np.array([0.3, 2.0])
    np.testing.assert_allclose(X.p(t), 2 / np.tanh(t))
    np.testing.assert_allclose(X.q(t), 0.8)


@pytest.mark.parametrize("chart", SEPARABLE)
def test_one_equation_per_coordinate(chart):
    spec = draw_spec(chart, np.random.default_rng(1))
    odes = separated_odes(spec)
    assert [o.coordinate for o in odes] == list(charts.get_chart(chart).coord_names)


def test_not_separable():
    with pytest.raises(NotSeparableError, match="not separable"):
        ModeSpec("bipolar-exponential", 1.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(chart="polar2", k2=1.0, lam=0.5),
        dict(chart="spherical-polar", k2=1.0, ell=1.5),
        dict(chart="spherical-polar", k2=1.0, ell=1, m=2),
        dict(chart="semi-spherical-polar", k2=1.0, ell=-1),
        dict(chart="hyperbolic3", k2=1.0, ell=0.3),
        dict(chart="polar-exponential", k2=1.0, ell=0.3),
        dict(chart="exponential2", k2=float("nan")),
    ],
)
def test_admissibility(kwargs):
    with pytest.raises(AdmissibilityError):
        ModeSpec(**kwargs)


def test_exponential2_double_root_branch():
    m = build_mode(ModeSpec("exponential2", 0.25), ics={"Sigma": Basis(1.0, 0.0)}, box=((-1, 1), (-1, 1)))
    s = np.linspace(-1, 1, 9)
    c = np.stack([s, np.zeros_like(s)], axis=-1)
    np.testing.assert_allclose(m(c), np.exp(s / 2), rtol=1e-14)
    m2 = build_mode(ModeSpec("exponential2", 0.25), ics={"Sigma": Basis(0.0, 1.0)}, box=((-1, 1), (-1, 1)))
    np.testing.assert_allclose(m2(c), s * np.exp(s / 2), atol=1e-14)


def test_exponential2_bessel_half_order():
    spec = ModeSpec("exponential2", 0.0, lam=1.0)
    ics = {"Sigma": Basis(1.0, 0.0), "Theta": (0.0, 1.0, 0.0)}
    grid = Grid(((-1, 1), (-1, 1)), 21)
    m = build_mode(spec, ics, grid.box)
    s, mu = np.meshgrid(np.linspace(-1, 1, 7), np.linspace(-1, 1, 5), indexing="ij")
    z = np.exp(s)
    ref = np.exp(s / 2) * np.sqrt(2 / (np.pi * z)) * np.sinh(z) * np.cos(mu)
    np.testing.assert_allclose(m(np.stack([s, mu], -1)), ref, rtol=1e-10)
    assert verify_mode(spec, ics, grid).pde.relative_max < 1e-6


def test_exponential3_bessel_half_order_k_branch():
    # k2 = 3/4 gives order 1/2 for c = 1: e^s K_{1/2}(e^s)
    spec = ModeSpec("exponential3", 0.75, lam=1.0)
    m = build_mode(spec, {"Sigma": Basis(0.0, 1.0), "M": (0, 1, 0), "N": (0, 1, 0)})
    s = np.linspace(-1, 1, 9)
    c = np.stack([s, np.zeros_like(s), np.zeros_like(s)], -1)
    z = np.exp(s)
    np.testing.assert_allclose(m(c), np.exp(s) * np.sqrt(np.pi / (2 * z)) * np.exp(-z), rtol=1e-10)


def test_spherical_closed_form_mode():
    rep = verify_mode(ModeSpec("spherical-polar", 2.0, ell=1, m=0))
    assert rep.pde.relative_max < 1e-6
    assert [f["method"] for f in rep.factors] == ["closed-form", "closed-form"]


def test_elliptic_pair_by_integration():
    rep = verify_mode(ModeSpec("elliptic-exponential", 1.0, lam=1.0, ell=1.0, scale=1.0))
    methods = {f["factor"]: f["method"] for f in rep.factors}
    assert methods["U"] == methods["V"] == "ode"
    assert rep.pde.relative_max < 1e-5


def test_symmetric2_legendre_case():
    rep = verify_mode(ModeSpec("symmetric2", 0.2, lam=0.0))
    assert all(f["ode_relative_residual"] < 1e-7 for f in rep.factors)
    assert rep.passed


@pytest.mark.parametrize("chart", SEPARABLE)
@pytest.mark.parametrize("closed_form", [True, False])
def test_generic_draw(chart, closed_form):
    spec = draw_spec(chart, np.random.default_rng(100 + SEPARABLE.index(chart)))
    rep = verify_mode(spec, closed_form=closed_form)
    assert rep.pde.relative_max < 1e-5
    assert all(f["ode_relative_residual"] < 1e-7 for f in rep.factors)


def test_closed_form_and_integrated_agree():
    spec = ModeSpec("exponential-hyperbolic", 0.9, lam=0.5, ell=0.6)
    box = DEFAULT_BOX[spec.chart]
    a = build_mode(spec, box=box, closed_form=True)
    b = build_mode(spec, box=box, closed_form=False)
    assert {f.method for f in a.factors} == {"ode", "closed-form"}
    pts = Grid(box, 6).points()
    np.testing.assert_allclose(a(pts), b(pts), rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("k2", [0.25 - 1e-3, 0.25 + 1e-3])
def test_near_degenerate_order(k2):
    spec = ModeSpec("exponential2", k2, lam=0.0)
    for ic in (Basis(1.0, 0.0), Basis(0.0, 1.0)):
        rep = verify_mode(spec, {"Sigma": ic})
        assert np.isfinite(rep.pde.max_abs_residual)
        assert rep.passed


def test_regular_start_needs_clearance():
    with pytest.raises(ValueError, match="singular point"):
        build_mode(ModeSpec("polar2", 1.0, lam=1), box=((0.0, 1.0), (0.2, 6.0)), closed_form=False)


def test_unknown_factor_name():
    with pytest.raises(ValueError, match="unknown factors"):
        build_mode(ModeSpec("polar2", 1.0, lam=1), ics={"Q": (0, 1, 0)})


def test_report_json_is_deterministic():
    spec = ModeSpec("hyperbolic3", 0.7, lam=0.8, ell=1)
    a = verify_mode(spec).to_json()
    b = verify_mode(spec).to_json()
    assert a == b
    data = json.loads(a)
    assert data["schema"] == 1
    assert data["spec"]["chart"] == "hyperbolic3"
    assert {"grid_shape", "relative_max", "max_abs_residual"} <= set(data["pde"])
    assert data["passed"] is True


def test_draws_are_admissible_and_seeded():
    r1 = [draw_spec(c, np.random.default_rng(5)) for c in SEPARABLE]
    r2 = [draw_spec(c, np.random.default_rng(5)) for c in SEPARABLE]
    assert r1 == r2


def test_negative_residual_control():
    # a mode built for one k2 but checked against another fails
    spec = ModeSpec("polar2", 1.0, lam=1)
    mode = build_mode(spec)
    from hyperatlas.diffops import helmholtz_residual

    rep = helmholtz_residual(mode, 1.5, Grid(DEFAULT_BOX["polar2"], 11), h=modes.MODE_LAPLACIAN_STEP)
    assert rep.relative_max > 1e-2
