import math

import numpy as np
import pytest

from heiscmc import constructors as cs
from heiscmc import heis
from heiscmc import invariants as inv
from heiscmc import surface as sg
from heiscmc.errors import BadK, CurveSpecError, UnknownName


def _surfaces():
    return [
        ("pansu", cs.pansu(0.8)),
        ("rotational_cmc", cs.rotational_cmc(2.0, 5.0, phase=0.4)[0]),
        ("rotational_minimal", cs.rotational_minimal(1.5)[0]),
        ("deform_pansu", cs.deform_pansu(cs.catalog("prop_indepc1", k=2.0, m=2.0), 1.0)),
        ("deform_plane", cs.deform_plane(cs.catalog("pmin_rotlike", r=1.0, z=(0.0, 0.5)))),
    ]


@pytest.mark.parametrize("name,surf", _surfaces())
def test_partials_match_finite_differences(name, surf):
    rng = np.random.default_rng(11)
    (u0, u1), (v0, v1) = surf.domain
    h = 1e-6
    u = rng.uniform(u0 + 2 * h, u1 - 2 * h, 100)
    v = rng.uniform(v0 + 2 * h, v1 - 2 * h, 100)
    _, Xu, Xv = surf.evaluate(u, v)
    fu = (surf.evaluate(u + h, v)[0] - surf.evaluate(u - h, v)[0]) / (2 * h)
    fv = (surf.evaluate(u, v + h)[0] - surf.evaluate(u, v - h)[0]) / (2 * h)
    np.testing.assert_allclose(Xu, fu, atol=1e-7)
    np.testing.assert_allclose(Xv, fv, atol=1e-7)


def test_constant_curve_is_left_translated_pansu():
    lam, z = 1.3, 0.7
    Y = cs.deform_pansu(cs.catalog("pansu_trivial", lam=lam, z=z), lam)
    P = cs.pansu(lam)
    s = np.linspace(0.1, math.pi / lam - 0.1, 11)
    th = np.linspace(0.0, 6.0, 11)
    want = heis.group_mul_arr(np.array([0.0, 0.0, z]), P.evaluate(s, th)[0])
    np.testing.assert_allclose(Y.evaluate(s, th)[0], want, atol=1e-14)


def test_pansu_circle_keeps_constant_h():
    Y = cs.deform_pansu(cs.catalog("pansu_circle"), 1.0)
    for s, th in [(0.5, 0.2), (1.6, 2.4), (2.7, 5.0)]:
        assert sg.p_mean_curvature(Y, s, th) == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("name,params", [("prop_c2value", {"r": 0.25}), ("prop_c1linear", {"k": 3.0}),
                                         ("prop_indepc1", {"k": 2.0, "m": 1.0})])
def test_deformed_rulings_are_horizontal(name, params):
    Y = cs.deform_pansu(cs.catalog(name, **params), 1.0)
    s = np.linspace(0.2, 3.0, 15)
    Ys, _ = sg.tangent_basis(Y, s, np.full(s.shape, 1.1))
    np.testing.assert_allclose(Ys[:, 2], 0.0, atol=1e-13)
    np.testing.assert_allclose(np.linalg.norm(Ys[:, :2], axis=1), 1.0, atol=1e-13)


def test_deformed_plane_rulings_are_horizontal():
    Y = cs.deform_plane(cs.catalog("pmin_rotlike", r=1.0, z=(0.0, 0.5)))
    r = np.linspace(-1.9, 1.9, 15)
    Yr, _ = sg.tangent_basis(Y, r, np.full(r.shape, 2.2))
    np.testing.assert_allclose(Yr[:, 2], 0.0, atol=1e-13)


@pytest.mark.parametrize("c,k,phase", [(2.0, 5.0, 0.0), (1.0, 3.0, 0.7), (-1.5, 2.0, 0.3), (2.0, 1.0, 0.0)])
def test_generating_geodesic(c, k, phase):
    _, g = cs.rotational_cmc(c, k, phase)
    s = np.linspace(0.0, 2 * math.pi / abs(c), 41)
    (X, Y, T), (dX, dY, dT) = g.spatial(s)
    np.testing.assert_allclose(dX**2 + dY**2, 1.0, atol=1e-14)
    np.testing.assert_allclose(dT + X * dY - Y * dX, 0.0, atol=1e-13)
    x, xp, _, t, tp, _ = g.radial(s)
    np.testing.assert_allclose(x, np.hypot(X, Y), atol=1e-12)
    np.testing.assert_allclose(t, T, atol=1e-12)
    np.testing.assert_allclose(inv.energy(x, xp, tp, c / 2), g.E, atol=1e-12)


def test_rotational_examples():
    surf, g = cs.rotational_cmc(2.0, 5.0)
    assert g.r == pytest.approx(1.0) and g.E == pytest.approx(0.75)
    assert surf.domain[0] == pytest.approx((0.0, math.pi))
    _, g1 = cs.rotational_cmc(2.0, 1.0)
    assert g1.r == 0.0
    x = g1.radial(np.linspace(0, 3, 5))[0]
    np.testing.assert_allclose(x, 0.5, atol=1e-15)
    with pytest.raises(BadK):
        cs.rotational_cmc(2.0, 0.5)


def test_rotational_minimal():
    surf, g = cs.rotational_minimal(1.5)
    assert g.E == 1.5 and g.c2 == 2.25
    (X, Y, T), (dX, dY, dT) = g.spatial(np.linspace(-2, 2, 9))
    np.testing.assert_allclose(dT + X * dY - Y * dX, 0.0, atol=1e-14)
    for s, th in [(-1.0, 0.3), (0.5, 2.0), (1.4, 4.0)]:
        assert sg.p_mean_curvature(surf, s, th) == pytest.approx(0.0, abs=1e-6)
    plane, _ = cs.rotational_minimal(0.0)
    _, _, z = plane.point(1.0, 0.4)
    assert z == pytest.approx(0.0, abs=1e-15)


def test_hyperbola_profile_h():
    c2, m = 4.0, 2.0
    x, xp, xpp, _, tp, tpp = cs.hyperbola_profile(c2, m, np.array(0.7))
    H = sg.p_mean_curvature_rotational(float(x), float(xp), float(xpp), float(tp), float(tpp))
    assert H == pytest.approx(0.0, abs=1e-12)


def test_catalog_errors():
    with pytest.raises(UnknownName):
        cs.catalog("nope")
    with pytest.raises(CurveSpecError):
        cs.catalog("prop_c2value", bogus=1.0)
    with pytest.raises(CurveSpecError):
        cs.catalog("prop_indepc1", k=-1.0)


def test_every_catalog_entry_builds():
    for name in cs.CATALOG:
        curve = cs.catalog(name)
        if name in cs.PMINIMAL_CURVES or name == "zeta2zero_linear":
            continue
        cs.deform_pansu(curve, curve.params.get("lam", 1.0), check=False)
