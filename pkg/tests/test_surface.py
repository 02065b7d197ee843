import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heiscmc import constructors as cs
from heiscmc import invariants as inv
from heiscmc import surface as sg
from heiscmc.errors import AxisContact, CharacteristicPoint, DomainExceeded, SingularPoint
from heiscmc.heis import j_apply_arr

PANSU = cs.pansu(1.0)
PLANE = cs.horizontal_plane()


def test_tangent_basis_pansu():
    Xs, Xt = sg.tangent_basis(PANSU, math.pi / 2, 0.4)
    assert Xs[2] == pytest.approx(0.0, abs=1e-15)
    assert Xt[2] == pytest.approx(1.0, abs=1e-15)
    s, th = np.array([0.3, 1.1, 2.5]), np.array([0.0, 2.0, 5.0])
    Xs, _ = sg.tangent_basis(PANSU, s, th)
    np.testing.assert_allclose(Xs[:, 2], 0.0, atol=1e-15)


def test_tangent_basis_plane():
    Xu, Xv = sg.tangent_basis(PLANE, 0.0, 0.0)
    assert tuple(Xu) == (1, 0, 0) and tuple(Xv) == (0, 1, 0)


def test_is_singular_examples():
    assert sg.is_singular(PANSU, 0.0, 1.0)
    assert not sg.is_singular(PANSU, math.pi / 2, 1.0)
    assert sg.is_singular(PLANE, 0.0, 0.0)
    assert not sg.is_singular(PLANE, 0.5, 0.0)


def test_characteristic_direction_pansu():
    lam = 0.7
    P = cs.pansu(lam)
    s, th = np.array([0.4, 1.0, 2.0]), np.array([0.1, 3.0, 5.5])
    e1 = sg.characteristic_direction(P, s, th)
    np.testing.assert_allclose(e1[:, 0], np.cos(2 * lam * s + th), atol=1e-14)
    np.testing.assert_allclose(e1[:, 1], np.sin(2 * lam * s + th), atol=1e-14)
    np.testing.assert_array_equal(e1[:, 2], 0.0)


def test_characteristic_direction_deformed_plane():
    Y = cs.deform_plane(cs.catalog("pmin_rotlike", r=1.0, z=(0.0, 0.5)))
    r, th = np.array([-1.5, 0.3, 1.7]), np.array([0.2, 2.0, 4.0])
    e1 = sg.characteristic_direction(Y, r, th)
    np.testing.assert_allclose(e1[:, :2], np.column_stack([np.cos(th), np.sin(th)]), atol=1e-14)


def test_characteristic_direction_singular():
    with pytest.raises(SingularPoint):
        sg.characteristic_direction(PANSU, 0.0, 0.0)


@settings(max_examples=30)
@given(st.floats(0.05, 3.0), st.floats(0.0, 6.28))
def test_e1_unit_and_frame_identity(s, th):
    Y = cs.deform_pansu(cs.catalog("prop_c2value", r=0.25), 1.0, check=False)
    fr = sg.extract_alpha_ab(Y, s, th)
    assert np.linalg.norm(fr.e1) == pytest.approx(1.0, abs=1e-14)
    assert fr.e1[2] == 0.0
    np.testing.assert_array_equal(fr.e2, j_apply_arr(fr.e1))
    Xu, Xv = sg.tangent_basis(Y, s, th)
    root = math.sqrt(1 + fr.alpha**2)
    lhs = fr.alpha * fr.e2 + np.array([0, 0, 1.0])
    rhs = fr.a * root * Xu + fr.b * root * Xv
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_extract_pansu_equator():
    fr = sg.extract_alpha_ab(PANSU, math.pi / 2, 0.8)
    assert fr.alpha == pytest.approx(0.0, abs=1e-14)
    assert fr.a == pytest.approx(-1.0, abs=1e-14)
    assert fr.b == pytest.approx(1.0, abs=1e-14)


def test_extract_rotational_alpha():
    surf, g = cs.rotational_cmc(2.0, 5.0)
    s = np.linspace(0.1, 3.0, 9)
    x, xp, _, _, tp, _ = g.radial(s)
    fr = sg.extract_alpha_ab(surf, s, np.full_like(s, 1.3))
    np.testing.assert_allclose(fr.alpha, xp / np.sqrt(x * x * xp * xp + tp * tp), atol=1e-12)


def test_extract_deformed_matches_closed_form():
    rng = np.random.default_rng(7)
    curve = cs.catalog("prop_indepc1", k=2.0, m=2.0)
    Y = cs.deform_pansu(curve, 1.0)
    s = rng.uniform(0.05, math.pi - 0.05, 100)
    th = rng.uniform(0, 2 * math.pi, 100)
    fr = sg.extract_alpha_ab(Y, s, th)
    np.testing.assert_allclose(fr.alpha, inv.forinv_alpha(curve, 1.0, s, th), atol=1e-9)


def test_p_mean_curvature_examples():
    assert sg.p_mean_curvature(PANSU, 1.0, 2.0) == pytest.approx(2.0, abs=1e-6)
    assert sg.p_mean_curvature(PLANE, 0.8, -0.6) == pytest.approx(0.0, abs=1e-6)
    surf, _ = cs.rotational_cmc(2.0, 5.0)
    assert sg.p_mean_curvature(surf, 0.7, 1.0) == pytest.approx(2.0, abs=1e-6)


def test_p_mean_curvature_domain():
    with pytest.raises(DomainExceeded):
        sg.p_mean_curvature(PANSU, 4.0, 0.0)
    Y = cs.deform_plane(cs.catalog("pmin_rotlike", r=1.0, z=(0.0, 0.5)))
    with pytest.raises(DomainExceeded):
        sg.p_mean_curvature(Y, 1.9995, 0.3)


def test_e1_flip_negates_alpha_and_h():
    Y = cs.deform_pansu(cs.catalog("prop_c1linear", k=3.0), 1.0)
    s, th = np.array([0.4, 1.3, 2.2]), np.array([0.5, 2.5, 4.5])
    a, b = sg.extract_alpha_ab(Y, s, th), sg.extract_alpha_ab(Y, s, th, flip=True)
    np.testing.assert_allclose(b.alpha, -a.alpha, atol=1e-13)
    np.testing.assert_allclose(b.a, a.a, atol=1e-13)
    np.testing.assert_allclose(b.b, a.b, atol=1e-13)
    np.testing.assert_allclose(sg.p_mean_curvature(Y, s, th, flip=True), -sg.p_mean_curvature(Y, s, th),
                               atol=1e-9)


@pytest.mark.parametrize("name,params", [("prop_c2value", {"r": 0.25}), ("prop_indepc1", {"k": 2.0, "m": 0.5})])
def test_extracted_alpha_solves_codazzi_along_leaves(name, params):
    lam = 1.0
    Y = cs.deform_pansu(cs.catalog(name, **params), lam)
    h = 1e-4
    for th in (0.3, 2.0, 4.1):
        for s in (0.5, 1.4, 2.6):
            f = [float(sg.extract_alpha_ab(Y, s + k * h, th).alpha) for k in (-2, -1, 0, 1, 2)]
            d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
            d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
            a = f[2]
            assert abs(d2 + 6 * a * d1 + 4 * a**3 + (2 * lam) ** 2 * a) <= 1e-6


def test_is_singular_matches_t_defect_on_deformed():
    Y = cs.deform_pansu(cs.catalog("prop_c1linear", k=0.5), 1.0)
    s = np.linspace(0.01, 3.13, 40)
    for th in (0.5, 3.0):
        _, Xv = sg.tangent_basis(Y, s, np.full_like(s, th))
        np.testing.assert_array_equal(sg.is_singular(Y, s, np.full_like(s, th)), np.abs(Xv[:, 2]) <= sg.TAU_SING)


def test_rotational_h_formula():
    assert sg.p_mean_curvature_rotational(1.5, 1.0, 0.0, 0.0, 0.0) == 0.0
    beta, s = 0.4, 1.2
    H = sg.p_mean_curvature_rotational(s * math.cos(beta), math.cos(beta), 0.0, math.sin(beta), 0.0)
    want = -math.sin(beta) ** 3 / (s * math.cos(beta) * ((s * math.cos(beta) * math.cos(beta)) ** 2
                                                         + math.sin(beta) ** 2) ** 1.5)
    assert H == pytest.approx(want, rel=1e-14) and H != 0
    _, g = cs.rotational_cmc(2.0, 2.0)
    x, xp, xpp, _, tp, tpp = g.radial(math.pi / 4)
    assert sg.p_mean_curvature_rotational(x, xp, xpp, tp, tpp) == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(AxisContact):
        sg.p_mean_curvature_rotational(0.0, 1.0, 0.0, 0.0, 0.0)
    with pytest.raises(CharacteristicPoint):
        sg.p_mean_curvature_rotational(1.0, 0.0, 0.0, 0.0, 0.0)


def test_immersion_check():
    assert sg.immersion_check(PANSU, 1.0, 0.5)
    flat = cs.deform_plane(cs.catalog("pmin_rotlike", r=1.0, z=(0.0, -1.0)), check=False)
    assert not sg.immersion_check(flat, 0.0, 0.7)
    assert sg.immersion_check(flat, 0.5, 0.7)
    special = cs.deform_pansu(cs.catalog("prop_c2value", r=1.0), 1.0, check=False)
    assert not sg.immersion_check(special, math.pi / 2, 0.3)
    assert sg.immersion_check(special, 1.0, 0.3)


def test_singular_locus_pansu():
    loc = sg.singular_locus(PANSU)
    assert len(loc) == 2 and all(p.is_point for p in loc)
    zs = sorted(p.rows[0, 4] for p in loc)
    assert zs == pytest.approx([-math.pi / 4, math.pi / 4], abs=1e-12)


def test_singular_locus_general_one_is_empty():
    assert sg.singular_locus(cs.deform_pansu(cs.catalog("prop_c2value", r=0.25), 1.0)) == []


def test_singular_locus_special_one_curve():
    Y = cs.deform_pansu(cs.catalog("prop_indepc1", k=1.0, m=0.5), 1.0)
    loc = sg.singular_locus(Y)
    assert max(p.length for p in loc) > 0.5


def test_singular_locus_special_one_constant_phase_is_isolated():
    # zeta2 = 1 and constant zeta1: the singular curve in (s, theta) maps to one point
    Y = cs.deform_pansu(cs.catalog("prop_c2value", r=1.0), 1.0, check=False)
    loc = sg.singular_locus(Y)
    assert loc and all(p.is_point for p in loc)


def test_singular_locus_needs_resolution():
    with pytest.raises(ValueError):
        sg.singular_locus(PANSU, nu=4)
