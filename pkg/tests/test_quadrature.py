import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heiscmc.quadrature import adaptive_simpson, cumulative_integral, invert_monotone


def test_simpson_exact_for_cubics():
    assert adaptive_simpson(lambda x: x**3 - 2 * x + 1, -1.0, 2.0) == pytest.approx(3.75 - 3 + 3, abs=1e-13)


def test_simpson_transcendental():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)
    sec = lambda t: 1 / math.cos(t)
    want = math.log(abs(1 / math.cos(1.2) + math.tan(1.2)))
    assert adaptive_simpson(sec, 0.0, 1.2) == pytest.approx(want, abs=1e-10)


def test_cumulative_integral_anchored():
    grid = np.linspace(0, 2, 9)
    out = cumulative_integral(math.exp, grid)
    assert out[0] == 0.0
    np.testing.assert_allclose(out, np.exp(grid) - 1, atol=1e-10)


@given(st.floats(0.05, 9.9))
def test_invert_monotone(target):
    F = lambda x: x + 0.5 * math.sin(x)
    dF = lambda x: 1 + 0.5 * math.cos(x)
    x = invert_monotone(F, dF, target, 0.0, 11.0)
    assert abs(F(x) - target) <= 1e-12 * max(1, target)


def test_invert_monotone_out_of_range():
    with pytest.raises(ValueError):
        invert_monotone(lambda x: x, lambda x: 1.0, 5.0, 0.0, 1.0)
