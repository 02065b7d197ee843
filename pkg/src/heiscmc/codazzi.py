"""Closed-form solutions of alpha'' + 6 alpha alpha' + 4 alpha^3 + c^2 alpha = 0.

The general branch is alpha(x) = (c/2) sin(phi) / (c2 - cos(phi)) with
phi = c x + c1. Two tangent families sit on the special values c2 = 0 and
c2 = 1; they are kept as separate branches because that is how the
construction formulas produce them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import AtPole, MixedType

POLE_GUARD = 1e-12
TAU_CLASS = 1e-9
TWO_PI = 2.0 * math.pi

BRANCHES = ("Zero", "TanFull", "TanHalf", "General")
LABELS = ("Vertical", "SpecialI", "SpecialII", "GeneralI", "GeneralII", "GeneralIII")


def canonicalize(c1: float, c2: float) -> tuple[float, float]:
    """Map (c1, c2<0) to the equivalent pair with c2 >= 0."""
    if c2 >= 0:
        return c1, c2
    return math.fmod(c1 + math.pi, TWO_PI) % TWO_PI, -c2


@dataclass(frozen=True)
class AlphaModel:
    c: float
    branch: str = "General"
    c1: float = 0.0
    c2: float = 0.0
    K: float = 0.0  # K1 for TanFull, K2 for TanHalf
    c2_flipped: bool = False

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.branch == "General" and self.c == 0:
            raise ValueError("the general branch requires c != 0")

    @classmethod
    def general(cls, c: float, c1: float, c2: float) -> "AlphaModel":
        c1c, c2c = canonicalize(c1, c2)
        return cls(c=c, branch="General", c1=c1c, c2=c2c, c2_flipped=c2 < 0)

    @classmethod
    def zero(cls, c: float = 0.0) -> "AlphaModel":
        return cls(c=c, branch="Zero")

    @classmethod
    def tan_full(cls, c: float, K1: float) -> "AlphaModel":
        return cls(c=c, branch="TanFull", K=K1)

    @classmethod
    def tan_half(cls, c: float, K2: float) -> "AlphaModel":
        return cls(c=c, branch="TanHalf", K=K2)

    @property
    def period(self) -> float:
        return math.inf if self.c == 0 else TWO_PI / abs(self.c)


def _tan_params(m: AlphaModel) -> tuple[float, float]:
    """(omega, w0) with the tangent branch written as -(c/2) tan(omega x + w0)."""
    if m.branch == "TanFull":
        return m.c, m.c * m.K
    return m.c / 2.0, -m.c * m.K / 2.0


def alpha_derivs(model: AlphaModel, x):
    """(alpha, alpha_x, alpha_xx) in closed form. Accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    c = model.c
    if model.branch == "Zero":
        z = np.zeros_like(x)
        return _out(z, z, z)
    if model.branch == "General":
        phi = c * x + model.c1
        s, co = np.sin(phi), np.cos(phi)
        dn = model.c2 - co
        _guard(dn)
        a = 0.5 * c * s / dn
        ax = 0.5 * c * c * (model.c2 * co - 1.0) / dn**2
        axx = 0.5 * c**3 * s * (2.0 - model.c2**2 - model.c2 * co) / dn**3
        return _out(a, ax, axx)
    om, w0 = _tan_params(model)
    w = om * x + w0
    co = np.cos(w)
    _guard(co)
    t = np.tan(w)
    sec2 = 1.0 / co**2
    a = -0.5 * c * t
    ax = -0.5 * c * om * sec2
    axx = -c * om * om * sec2 * t
    return _out(a, ax, axx)


def _guard(dn):
    if np.any(np.abs(dn) <= POLE_GUARD):
        raise AtPole("alpha denominator vanishes")


def _out(*arrs):
    if arrs[0].ndim == 0:
        return tuple(float(a) for a in arrs)
    return arrs


def alpha_eval(model: AlphaModel, x):
    return alpha_derivs(model, x)[0]


def codazzi_residual(model: AlphaModel, x):
    a, ax, axx = alpha_derivs(model, x)
    return axx + 6.0 * a * ax + 4.0 * a**3 + model.c**2 * a


def denominator(model: AlphaModel, x):
    """c2 - cos(c x + c1) for the general branch."""
    return model.c2 - np.cos(model.c * np.asarray(x, dtype=float) + model.c1)


@dataclass(frozen=True)
class SurfaceType:
    label: str
    interval: Optional[tuple[float, float]] = None


def classify(model: AlphaModel, x_range: tuple[float, float] = (0.0, 0.0)) -> SurfaceType:
    if model.branch == "Zero":
        return SurfaceType("Vertical")
    if model.branch == "TanHalf":
        return SurfaceType("SpecialI")
    if model.branch == "TanFull":
        return SurfaceType("SpecialII")
    c2 = model.c2
    if abs(c2 - 1.0) <= TAU_CLASS:
        return SurfaceType("SpecialI")
    if abs(c2) <= TAU_CLASS:
        return SurfaceType("SpecialII")
    if c2 > 1.0 + TAU_CLASS:
        return SurfaceType("GeneralI")
    lo, hi = float(x_range[0]), float(x_range[1])
    c, c1 = model.c, model.c1
    flip = c < 0
    if flip:
        # same phase c*x + c1 seen from x' = -x
        c, lo, hi = -c, -hi, -lo
    ac = math.acos(c2)
    period = TWO_PI / c
    xa = (-c1 + ac) / c
    xb = (TWO_PI - c1 - ac) / c
    n = math.floor((lo - xa) / period)
    lo_s, hi_s = lo - n * period, hi - n * period
    if xa < lo_s and hi_s < xb:
        label, iv = "GeneralII", (xa + n * period, xb + n * period)
    elif xb < lo_s and hi_s < xa + period:
        label, iv = "GeneralIII", (xb + n * period, xa + (n + 1) * period)
    else:
        raise MixedType(f"x-range [{x_range[0]}, {x_range[1]}] straddles a blow-up point")
    if flip:
        iv = (-iv[1], -iv[0])
    return SurfaceType(label, iv)


@dataclass(frozen=True)
class MetricGauge:
    h: Callable[[float], float]
    k: Callable[[float], float]

    @classmethod
    def normal(cls, c: float, c2: float) -> "MetricGauge":
        """Gauge reducing (a, b) to the normal form where c2 > cos(phi)."""
        hv = -0.5 * c * c2
        kv = math.log(c * c / 2.0)
        return cls(h=lambda y: hv, k=lambda y: kv)


def metric_from_alpha(model: AlphaModel, gauge: MetricGauge, x, y=0.0):
    if model.branch != "General":
        raise ValueError("metric reconstruction is defined for the general branch")
    c = model.c
    dn = denominator(model, x)
    _guard(dn)
    alpha = alpha_eval(model, x)
    root = np.sqrt(1.0 + np.square(alpha))
    adn = np.abs(dn)
    a = (-0.5 * c + 0.5 * c * model.c2 / dn + gauge.h(y) / adn) / root
    b = (math.exp(gauge.k(y)) / adn) / root
    if np.ndim(a) == 0:
        return float(a), float(b)
    return a, b


@dataclass
class PhaseField:
    alpha: np.ndarray
    p: np.ndarray
    dalpha: np.ndarray
    dp: np.ndarray
    shape: tuple[int, int] = field(default=(0, 0))

    def rows(self):
        return np.column_stack([self.alpha, self.p, self.dalpha, self.dp])


def phase_rhs(c: float, alpha, p):
    alpha = np.asarray(alpha, dtype=float)
    p = np.asarray(p, dtype=float)
    return p, -6.0 * alpha * p - 4.0 * alpha**3 - c * c * alpha


def phase_field(c: float, alpha_range=(-3.0, 3.0), p_range=(-3.0, 3.0), resolution=(21, 21)) -> PhaseField:
    na, npp = resolution
    if na < 2 or npp < 2:
        raise ValueError("resolution must be at least 2x2")
    al = np.linspace(alpha_range[0], alpha_range[1], na)
    pp = np.linspace(p_range[0], p_range[1], npp)
    # row-major with alpha varying fastest inside each p row
    P, A = np.meshgrid(pp, al, indexing="ij")
    A, P = A.ravel(), P.ravel()
    da, dp = phase_rhs(c, A, P)
    return PhaseField(A, P, da, dp, (npp, na))
