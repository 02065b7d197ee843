import math

import numpy as np
import pytest

from heiscmc import constructors as cs
from heiscmc import curves as cv
from heiscmc.errors import CurveSpecError, UnknownName

TERMS = [cv.poly(1.0, -2.0, 0.5, 0.25), cv.sin(0.7, 1.5, 0.3), cv.cos(-1.2, 0.5, 2.0),
         cv.tsin(0.4, 2.0, 0.1), cv.tcos(-0.3, 1.0, -0.5), cv.lnsectan(0.8)]


@pytest.mark.parametrize("term", TERMS, ids=lambda t: t.kind)
def test_term_derivatives_match_central_differences(term):
    th = np.array([-1.3, -0.4, 0.2, 0.9, 1.4])
    h = 1e-5
    f, f1, f2 = term.derivs(th)
    fp, fm = term.derivs(th + h, 0)[0], term.derivs(th - h, 0)[0]
    assert np.all(np.abs(f1 - (fp - fm) / (2 * h)) <= 1e-8 * (1 + np.abs(f1)))
    g = 1e-4
    d1p, d1m = term.derivs(th + g, 1)[1], term.derivs(th - g, 1)[1]
    np.testing.assert_allclose(f2, (d1p - d1m) / (2 * g), rtol=1e-6, atol=1e-6)


def test_polynomial_degree_limit():
    with pytest.raises(CurveSpecError):
        cv.poly(1, 2, 3, 4, 5)
    with pytest.raises(CurveSpecError):
        cv.Term("exp")


def test_json_round_trip():
    curve = cs.catalog("prop_indepc1", k=2.0, m=1.0, lam=0.7)
    again = cv.CurveSpec.from_json(curve.to_json())
    th = np.linspace(0, 6, 13)
    np.testing.assert_array_equal(again.value(th), curve.value(th))
    np.testing.assert_array_equal(again.derivative(th), curve.derivative(th))


def test_json_schema_shape():
    text = '{"coords":[{"terms":[{"kind":"poly","coeffs":[0,1]}]},' \
           '{"terms":[{"kind":"sin","amp":2,"omega":1,"phase":0}]},' \
           '{"terms":[{"kind":"lnsectan","amp":1}]}]}'
    curve = cv.CurveSpec.from_json(text)
    assert curve.value(0.5) == pytest.approx([0.5, 2 * math.sin(0.5), math.log(1 / math.cos(0.5) + math.tan(0.5))])
    with pytest.raises(CurveSpecError):
        cv.CurveSpec.from_json('{"coords": [1, 2]}')


def test_catalog_prop_c2value():
    curve = cs.catalog("prop_c2value", r=0.25, lam=1.0)
    th = 0.8
    assert curve.value(th) == pytest.approx([0.25 * math.sin(th), -0.25 * math.cos(th), 0.1875 * th], abs=1e-15)


def test_catalog_prop_indepc1_m1():
    k, lam, th = 3.0, 0.5, 1.1
    curve = cs.catalog("prop_indepc1", k=k, m=1.0, lam=lam)
    want = [math.sin(th) / (2 * lam) - th / (2 * lam * k), -math.cos(th) / (2 * lam),
            (k * th - th * math.cos(th)) / (4 * lam**2 * k)]
    assert curve.value(th) == pytest.approx(want, abs=1e-15)


def test_catalog_prop_indepc1_derivative_formula():
    k, m, lam = 2.0, 3.0, 1.0
    curve = cs.catalog("prop_indepc1", k=k, m=m, lam=lam)
    th = np.linspace(0, 3, 7)
    d = curve.derivative(th)
    np.testing.assert_allclose(d[:, 0], np.cos(th) / (2 * lam) - np.cos((m - 1) * th) / (2 * lam * k), atol=1e-15)
    np.testing.assert_allclose(d[:, 1], np.sin(th) / (2 * lam) + np.sin((m - 1) * th) / (2 * lam * k), atol=1e-15)
    x3p = (1 + k * k * (m - 1)) / (4 * lam**2 * k * k * (m - 1)) - m * np.cos(m * th) / (4 * lam**2 * k * (m - 1))
    np.testing.assert_allclose(d[:, 2], x3p, atol=1e-15)


def test_catalog_unknown_and_bad_params():
    with pytest.raises(UnknownName):
        cs.catalog("no_such_curve")
    with pytest.raises(CurveSpecError):
        cs.catalog("prop_c2value", q=1)
    with pytest.raises(CurveSpecError):
        cs.catalog("prop_indepc1", k=-1.0, m=2.0)


def test_degenerate_curves():
    th = np.linspace(0, 3, 5)
    printed = cs.catalog("degenerate_special1").value(th)
    np.testing.assert_allclose(printed[:, 2], (np.sin(2 * th) - 2 * th) / 4, atol=1e-15)
    fixed = cs.catalog("degenerate_special1_corrected").value(th)
    np.testing.assert_allclose(fixed[:, 2], (2 * th - np.sin(2 * th)) / 4, atol=1e-15)
