"""Closed-form surface builders and the example curve catalog."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curves as cv
from .curves import CurveSpec, make_curve
from .errors import BadK, NotImmersed, UnknownName, CurveSpecError
from .surface import ParamSurface, cell_centered_grid, immersion_check, is_singular, IMMERSION_EPS

TWO_PI = 2.0 * math.pi
SHRINK_EPS = 1e-3


def _mul_with_partials(p, pu, pv, q, qu, qv):
    """p*q and its partials given partials of both factors (Cartesian)."""
    out = q + p
    out[..., 2] += p[..., 1] * q[..., 0] - p[..., 0] * q[..., 1]

    def d(dp, dq):
        r = dp + dq
        r[..., 2] += (dp[..., 1] * q[..., 0] + p[..., 1] * dq[..., 0]
                      - dp[..., 0] * q[..., 1] - p[..., 0] * dq[..., 1])
        return r

    return out, d(pu, qu), d(pv, qv)


def _rotate_profile(px, py, pt, dpx, dpy, dpt, th):
    """Rotate a curve about the z-axis by th; partials in (s, th)."""
    c, s = np.cos(th), np.sin(th)
    X = np.stack([px * c - py * s, px * s + py * c, pt], axis=-1)
    Xs = np.stack([dpx * c - dpy * s, dpx * s + dpy * c, dpt], axis=-1)
    Xt = np.stack([-X[..., 1], X[..., 0], np.zeros_like(px)], axis=-1)
    return X, Xs, Xt


@dataclass(frozen=True)
class PansuProfile:
    lam: float

    def __call__(self, s):
        lam = self.lam
        w = 2.0 * lam * np.asarray(s, dtype=float)
        sw, cw = np.sin(w), np.cos(w)
        x = sw / (2 * lam)
        y = (1.0 - cw) / (2 * lam)
        t = sw / (4 * lam * lam) - s / (2 * lam) + math.pi / (4 * lam * lam)
        return x, y, t, cw, sw, (cw - 1.0) / (2 * lam)


def pansu(lam: float = 1.0) -> ParamSurface:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    prof = PansuProfile(lam)

    def ev(s, th):
        x, y, t, dx, dy, dt = prof(s)
        return _rotate_profile(x, y, t, dx, dy, dt, th)

    return ParamSurface(ev, ((0.0, math.pi / lam), (0.0, TWO_PI)), periodic_v=True,
                        claimed_h=2 * lam, tag="pansu", meta={"lam": lam})


def horizontal_plane(extent: float = 2.0) -> ParamSurface:
    """The plane z = 0 parametrized by Cartesian (x, y)."""

    def ev(u, v):
        X = np.stack([u, v, np.zeros_like(u)], axis=-1)
        Xu = np.zeros(X.shape)
        Xu[..., 0] = 1.0
        Xv = np.zeros(X.shape)
        Xv[..., 1] = 1.0
        return X, Xu, Xv

    return ParamSurface(ev, ((-extent, extent), (-extent, extent)), claimed_h=0.0, tag="plane")


# -- rotational surfaces ----------------------------------------------------------

@dataclass(frozen=True)
class GeneratingCurve:
    """Horizontal generating geodesic s -> (X, Y, t) and its radial profile."""

    c: float
    k: float = 1.0
    r: float = 0.0
    c1: float = 0.0
    E: float = 0.0
    m: float = 0.0
    c2: float = 0.0
    x0: float = 0.0
    y0: float = 0.0
    t0: float = 0.0

    @property
    def lam(self) -> float:
        return self.c / 2.0

    def spatial(self, s):
        """(X, Y, t) and derivatives, all of shape s.shape."""
        s = np.asarray(s, dtype=float)
        if self.c == 0:
            m = self.m
            sg = 1.0 if m >= 0 else -1.0
            X = np.full(s.shape, abs(m))
            Y = -sg * s
            T = m * s
            return (X, Y, T), (np.zeros(s.shape), np.full(s.shape, -sg), np.full(s.shape, m))
        c = self.c
        cs, sn = np.cos(c * s), np.sin(c * s)
        X = sn / c + self.x0
        Y = -cs / c + 1.0 / c + self.y0
        T = ((1.0 + c * self.y0) / c**2) * sn + (self.x0 / c) * cs - s / c + math.pi / c**2 - self.x0 / c + self.t0
        dT = ((1.0 + c * self.y0) / c) * cs - self.x0 * sn - 1.0 / c
        return (X, Y, T), (cs, sn, dT)

    def radial(self, s):
        """(x, x', x'', t, t', t'') with x the distance to the axis."""
        s = np.asarray(s, dtype=float)
        if self.c == 0:
            m = self.m
            x = np.sqrt(s * s + m * m)
            xp = s / x
            xpp = m * m / x**3
            return x, xp, xpp, m * s, np.full(s.shape, m), np.zeros(s.shape)
        c, r, k = self.c, self.r, self.k
        ph = c * s - self.c1
        x2 = k / c**2 + r * np.cos(ph)
        x = np.sqrt(x2)
        d1 = -r * c * np.sin(ph)
        d2 = -r * c * c * np.cos(ph)
        xp = d1 / (2 * x)
        xpp = (d2 * x2 - 0.5 * d1 * d1) / (2 * x**3)
        t = -s / c - 0.5 * r * np.sin(ph)
        tp = -1.0 / c - 0.5 * r * c * np.cos(ph)
        tpp = 0.5 * r * c * c * np.sin(ph)
        return x, xp, xpp, t, tp, tpp


def _rotational_surface(g: GeneratingCurve, s_range, tag, claimed_h) -> ParamSurface:
    def ev(s, th):
        (X, Y, T), (dX, dY, dT) = g.spatial(s)
        return _rotate_profile(X, Y, T, dX, dY, dT, th)

    return ParamSurface(ev, (s_range, (0.0, TWO_PI)), periodic_v=True, claimed_h=claimed_h,
                        tag=tag, meta={"curve": g})


def rotational_cmc(c: float, k: float, phase: float = 0.0):
    """Rotate the horizontal geodesic with x^2 = k/c^2 + r cos(c s - phase)."""
    if c == 0:
        raise ValueError("use rotational_minimal for c = 0")
    if k < 1:
        raise BadK(f"k must be at least 1, got {k}")
    q = math.sqrt(k - 1.0)
    r = 2.0 * q / c**2
    E = (k - 2.0) / (2.0 * c)
    x0 = q * math.sin(phase) / c
    y0 = (-q * math.cos(phase) - 1.0) / c
    t0 = x0 / c - math.pi / c**2
    g = GeneratingCurve(c=c, k=k, r=r, c1=phase, E=E, x0=x0, y0=y0, t0=t0)
    return _rotational_surface(g, (0.0, TWO_PI / abs(c)), "rotational_cmc", c), g


def rotational_minimal(m: float, extent: float = 2.0):
    """Rotate the horizontal line through (|m|, 0, 0); m = 0 gives the plane."""
    g = GeneratingCurve(c=0.0, k=1.0, E=m, m=m, c2=m * m)
    lo = 0.0 if m == 0 else -extent
    return _rotational_surface(g, (lo, extent), "rotational_minimal", 0.0), g


def hyperbola_profile(c2: float, m: float, sigma):
    """Profile (sqrt(sigma^2 + c2), m sigma) with derivatives, for any c2."""
    sigma = np.asarray(sigma, dtype=float)
    x = np.sqrt(sigma * sigma + c2)
    return x, sigma / x, c2 / x**3, m * sigma, np.full(sigma.shape, m), np.zeros(sigma.shape)


# -- deformations -------------------------------------------------------------------

def _check_immersed(surf: ParamSurface, n: int = 24):
    U, V = cell_centered_grid(surf, n, n)
    if not np.all(immersion_check(surf, U, V, IMMERSION_EPS)):
        raise NotImmersed(f"{surf.tag}: Y_u ^ Y_v vanishes on the sampled domain")


def deform_pansu(curve: CurveSpec, lam: float = 1.0, s_range=None, theta_range=None,
                 check: bool = True) -> ParamSurface:
    """Y(s, theta) = C(theta) * X(s, theta) with X the Pansu sphere."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    prof = PansuProfile(lam)

    def ev(s, th):
        x, y, t, dx, dy, dt = prof(s)
        X, Xs, Xt = _rotate_profile(x, y, t, dx, dy, dt, th)
        C, dC = curve.derivs(th, 1)
        return _mul_with_partials(C, np.zeros_like(C), dC, X, Xs, Xt)

    th_rng = tuple(theta_range) if theta_range is not None else curve.theta_range
    periodic = (th_rng[1] - th_rng[0]) >= TWO_PI - 1e-12 and not curve.has_lnsectan
    full = (0.0, math.pi / lam)
    surf = ParamSurface(ev, (full, th_rng), periodic_v=False, claimed_h=2 * lam,
                        tag=f"deform_pansu:{curve.name}", meta={"curve": curve, "lam": lam, "periodic": periodic})
    if s_range is None:
        vs = np.linspace(th_rng[0], th_rng[1], 33)
        edge = is_singular(surf, np.full(vs.shape, full[0]), vs) | is_singular(surf, np.full(vs.shape, full[1]), vs)
        if np.any(edge):
            s_range = (full[0] + SHRINK_EPS, full[1] - SHRINK_EPS)
        else:
            s_range = full
    surf.domain = (tuple(s_range), th_rng)
    if check:
        _check_immersed(surf)
    return surf


def deform_plane(curve: CurveSpec, r_range=(-2.0, 2.0), theta_range=None, check: bool = True) -> ParamSurface:
    """Y(r, theta) = C(theta) * (r cos theta, r sin theta, 0)."""

    def ev(r, th):
        c, s = np.cos(th), np.sin(th)
        P = np.stack([r * c, r * s, np.zeros_like(r)], axis=-1)
        Pr = np.stack([c, s, np.zeros_like(r)], axis=-1)
        Pt = np.stack([-r * s, r * c, np.zeros_like(r)], axis=-1)
        C, dC = curve.derivs(th, 1)
        return _mul_with_partials(C, np.zeros_like(C), dC, P, Pr, Pt)

    th_rng = tuple(theta_range) if theta_range is not None else curve.theta_range
    surf = ParamSurface(ev, (tuple(r_range), th_rng), claimed_h=0.0,
                        tag=f"deform_plane:{curve.name}", meta={"curve": curve})
    if check:
        _check_immersed(surf)
    return surf


# -- catalog ----------------------------------------------------------------------------

def _pansu_trivial(lam=1.0, z=0.0):
    return make_curve([], [], [cv.poly(z)], name="pansu_trivial", lam=lam)


def _pansu_circle(lam=1.0, z=0.0):
    return make_curve([cv.sin(1 / lam)], [cv.cos(-1 / lam)], [cv.poly(z)], name="pansu_circle", lam=lam)


def _prop_c2value(r=0.25, lam=1.0):
    return make_curve([cv.sin(r / lam)], [cv.cos(-r / lam)], [cv.poly(0.0, r * (1 - r) / lam**2)],
                      name="prop_c2value", r=r, lam=lam)


def _prop_c1linear(k=3.0, lam=1.0):
    return make_curve([cv.sin(1 / lam)], [cv.cos(-1 / lam)], [cv.poly(0.0, (k - 1) / (2 * lam**2))],
                      name="prop_c1linear", k=k, lam=lam)


def _prop_indepc1(k=2.0, m=2.0, lam=1.0):
    if k <= 0:
        raise CurveSpecError("prop_indepc1 needs k > 0")
    L = lam
    if m == 1:
        x = [cv.sin(1 / (2 * L)), cv.poly(0.0, -1 / (2 * L * k))]
        y = [cv.cos(-1 / (2 * L))]
        z = [cv.poly(0.0, 1 / (4 * L * L)), cv.tcos(-1 / (4 * L * L * k))]
    else:
        d = m - 1.0
        x = [cv.sin(1 / (2 * L)), cv.sin(-1 / (2 * L * k * d), d)]
        y = [cv.cos(-1 / (2 * L)), cv.cos(-1 / (2 * L * k * d), d)]
        z = [cv.poly(0.0, (1 + k * k * d) / (4 * L * L * k * k * d)), cv.sin(-1 / (4 * L * L * k * d), m)]
    return make_curve(x, y, z, name="prop_indepc1", k=k, m=m, lam=lam)


def _lnsectan(c3=0.0, c4=0.0, c5=1.0, c6=0.0, lam=1.0):
    L = lam
    return make_curve([cv.lnsectan(1 / (4 * L)), cv.poly(c3)], [cv.poly(c4)],
                      [cv.lnsectan(c5 / (4 * L)), cv.poly(c6, -1 / (4 * L * L))],
                      name="lnsectan", theta_range=(-1.2, 1.2), c3=c3, c4=c4, c5=c5, c6=c6, lam=lam)


def _zeta2zero_linear(lam=1.0):
    return make_curve([cv.cos(1.0)], [cv.sin(1.0)], [cv.poly(0.0, -(1 + 1 / (2 * lam**2)))],
                      name="zeta2zero_linear", lam=lam)


def _pmin_rotlike(r=1.0, z=(0.0, -2.0)):
    """(r sin, -r cos, z) with z either poly coefficients or a list of terms."""
    zterms = list(z) if z and isinstance(z[0], cv.Term) else [cv.poly(*z)]
    return make_curve([cv.sin(r)], [cv.cos(-r)], zterms, name="pmin_rotlike", r=r)


def _degenerate_special1():
    return make_curve([cv.poly(0.0, -1.0)], [], [cv.sin(0.25, 2.0), cv.poly(0.0, -0.5)],
                      name="degenerate_special1")


def _degenerate_special1_corrected():
    return make_curve([cv.poly(0.0, -1.0)], [], [cv.sin(-0.25, 2.0), cv.poly(0.0, 0.5)],
                      name="degenerate_special1_corrected")


CATALOG = {
    "pansu_trivial": _pansu_trivial,
    "pansu_circle": _pansu_circle,
    "prop_c2value": _prop_c2value,
    "prop_c1linear": _prop_c1linear,
    "prop_indepc1": _prop_indepc1,
    "lnsectan": _lnsectan,
    "zeta2zero_linear": _zeta2zero_linear,
    "pmin_rotlike": _pmin_rotlike,
    "degenerate_special1": _degenerate_special1,
    "degenerate_special1_corrected": _degenerate_special1_corrected,
}

PMINIMAL_CURVES = {"pmin_rotlike", "degenerate_special1", "degenerate_special1_corrected"}


def catalog(name: str, **params) -> CurveSpec:
    try:
        fn = CATALOG[name]
    except KeyError:
        raise UnknownName(f"no catalog curve named {name!r}") from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise CurveSpecError(f"bad parameters for {name}: {exc}") from exc
