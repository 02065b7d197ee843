"""Adaptive Simpson quadrature and inversion of monotone functions."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 50) -> float:
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + _simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1))


def cumulative_integral(f: Callable[[float], float], grid: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Integral of f from grid[0] to each grid point (anchored to 0 at grid[0])."""
    grid = np.asarray(grid, dtype=float)
    out = np.zeros_like(grid)
    n = max(len(grid) - 1, 1)
    for i in range(1, len(grid)):
        out[i] = out[i - 1] + adaptive_simpson(f, grid[i - 1], grid[i], tol / n)
    return out


def invert_monotone(F: Callable[[float], float], dF: Callable[[float], float], target: float,
                    lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Solve F(x) = target for increasing F on [lo, hi] by safeguarded Newton."""
    flo, fhi = F(lo) - target, F(hi) - target
    if flo > 0 or fhi < 0:
        raise ValueError("target outside the range of F on the bracket")
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    x = lo + (hi - lo) * (-flo) / (fhi - flo)
    for _ in range(max_iter):
        fx = F(x) - target
        if fx > 0:
            hi = x
        else:
            lo = x
        if abs(fx) <= tol * max(1.0, abs(target)) or hi - lo <= tol:
            return x
        d = dF(x)
        step_ok = d > 0 and math.isfinite(d)
        xn = x - fx / d if step_ok else 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        x = xn
    return x
