"""Numerical differential geometry of parametrized surfaces in H1.

Surfaces carry an analytic evaluator returning the point and both
coordinate partials in Cartesian components. Everything downstream works in
frame components (e1, e2, T), where the Levi-Civita-type connection used for
the p-mean curvature is flat.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateBasis, DomainExceeded, NearBlowup, SingularPoint, AxisContact, CharacteristicPoint
from .heis import cart_to_frame_arr, j_apply_arr

TAU_SING = 1e-8
H_STEP = 1e-3
BLOWUP_LIMIT = 1e12
IMMERSION_EPS = 1e-10

Evaluator = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass
class ParamSurface:
    """(u, v) -> H1 with analytic first partials.

    ``evaluate(u, v)`` returns ``(X, Xu, Xv)`` as arrays of shape (..., 3) in
    Cartesian components.
    """

    evaluate: Evaluator
    domain: tuple[tuple[float, float], tuple[float, float]]
    periodic_v: bool = False
    claimed_h: Optional[float] = None
    tag: str = "surface"
    meta: dict = field(default_factory=dict)

    def point(self, u, v) -> np.ndarray:
        return self.evaluate(*_bcast(u, v))[0]

    def partials(self, u, v):
        _, Xu, Xv = self.evaluate(*_bcast(u, v))
        return Xu, Xv

    def frame_partials(self, u, v):
        """(X, Xu, Xv) with the partials in frame components."""
        X, Xu, Xv = self.evaluate(*_bcast(u, v))
        return X, cart_to_frame_arr(X, Xu), cart_to_frame_arr(X, Xv)

    def check_domain(self, u, v, slack: float = 1e-12):
        (u0, u1), (v0, v1) = self.domain
        u = np.asarray(u)
        if np.any(u < u0 - slack) or np.any(u > u1 + slack):
            raise DomainExceeded(f"u outside [{u0}, {u1}]")
        if not self.periodic_v:
            v = np.asarray(v)
            if np.any(v < v0 - slack) or np.any(v > v1 + slack):
                raise DomainExceeded(f"v outside [{v0}, {v1}]")


def _bcast(u, v):
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return u, v


def _scalarize(x):
    return float(x) if np.ndim(x) == 0 else x


def tangent_basis(surf: ParamSurface, u, v):
    _, Xu, Xv = surf.frame_partials(u, v)
    return Xu, Xv


def is_singular(surf: ParamSurface, u, v, tau: float = TAU_SING):
    Xu, Xv = tangent_basis(surf, u, v)
    out = (np.abs(Xu[..., 2]) <= tau) & (np.abs(Xv[..., 2]) <= tau)
    return bool(out) if out.ndim == 0 else out


def _char_param_velocity(Xu, Xv, flip: bool = False, tau: float = TAU_SING, strict: bool = True):
    """Parameter velocity (du, dv) of the unit characteristic direction, and e1.

    With ``strict=False`` singular points yield NaN instead of raising.
    """
    p = Xv[..., 2]
    q = -Xu[..., 2]
    sing = (np.abs(p) <= tau) & (np.abs(q) <= tau)
    if np.any(sing):
        if strict:
            raise SingularPoint("characteristic direction undefined at a singular point")
        p = np.where(sing, np.nan, p)
        q = np.where(sing, np.nan, q)
    scale = np.abs(p) + np.abs(q)
    tie = np.abs(p) <= 1e-12 * scale
    sgn = np.where(tie, np.sign(q), np.sign(p))
    if flip:
        sgn = -sgn
    p = p * sgn
    q = q * sgn
    h = p[..., None] * Xu[..., :2] + q[..., None] * Xv[..., :2]
    n = np.hypot(h[..., 0], h[..., 1])
    if np.any(n == 0) and strict:
        raise DegenerateBasis("horizontal part of the tangent plane vanishes")
    e1 = np.zeros(Xu.shape)
    e1[..., :2] = h / n[..., None]
    return p / n, q / n, e1


def characteristic_direction(surf: ParamSurface, u, v, flip: bool = False):
    Xu, Xv = tangent_basis(surf, u, v)
    return _char_param_velocity(Xu, Xv, flip)[2]


@dataclass
class CharFrame:
    e1: np.ndarray
    e2: np.ndarray
    alpha: np.ndarray
    a: np.ndarray
    b: np.ndarray


def _solve_alpha_ab(Xu, Xv, e1, strict=True):
    e2 = j_apply_arr(e1)
    M = np.stack([Xu, Xv, -e2], axis=-1)
    with np.errstate(invalid="ignore"):
        det = np.linalg.det(M)
    scale = np.linalg.norm(Xu, axis=-1) * np.linalg.norm(Xv, axis=-1)
    bad = np.abs(det) <= 1e-14 * np.maximum(scale, 1e-300)
    if np.any(bad):
        if strict:
            raise DegenerateBasis("Xu, Xv and e2 are linearly dependent")
        M = np.where(bad[..., None, None], np.nan, M)
    rhs = np.zeros(Xu.shape)
    rhs[..., 2] = 1.0
    sol = np.linalg.solve(M, rhs[..., None])[..., 0]
    A, B, alpha = sol[..., 0], sol[..., 1], sol[..., 2]
    big = (np.abs(B) > BLOWUP_LIMIT) | (np.abs(A) > BLOWUP_LIMIT)
    if np.any(big):
        if not strict:
            A, B, alpha = (np.where(big, np.nan, x) for x in (A, B, alpha))
        else:
            raise NearBlowup("first fundamental form degenerates here")
    root = np.sqrt(1.0 + alpha * alpha)
    return e2, alpha, A / root, B / root


def extract_alpha_ab(surf: ParamSurface, u, v, flip: bool = False, strict: bool = True) -> CharFrame:
    """Solve alpha e2 + T = A Xu + B Xv; return a = A/sqrt(1+alpha^2), b likewise.

    With ``strict=False`` singular or degenerate points give NaN entries.
    """
    Xu, Xv = tangent_basis(surf, u, v)
    _, _, e1 = _char_param_velocity(Xu, Xv, flip, strict=strict)
    e2, alpha, a, b = _solve_alpha_ab(Xu, Xv, e1, strict)
    return CharFrame(e1, e2, _scalarize(alpha), _scalarize(a), _scalarize(b))


def p_mean_curvature(surf: ParamSurface, u, v, h_step: float = H_STEP, flip: bool = False,
                     strict: bool = True):
    """H from nabla_{e1} e2 = -H e1, differentiating e2 along the characteristic leaf.

    The leaf is traced in parameter space with RK4 steps of +-h and +-2h and
    the derivative of e2 is a fourth-order central difference. With
    ``strict=False`` points whose stencil meets a singular point give NaN.
    """
    u, v = _bcast(u, v)
    surf.check_domain(u, v)

    def vel(uu, vv):
        surf.check_domain(uu, vv, slack=1e-9)
        Xu, Xv = tangent_basis(surf, uu, vv)
        return _char_param_velocity(Xu, Xv, flip, strict=strict)

    du0, dv0, e1_0 = vel(u, v)

    def rk4(uu, vv, hh):
        k1 = vel(uu, vv)[:2]
        k2 = vel(uu + 0.5 * hh * k1[0], vv + 0.5 * hh * k1[1])[:2]
        k3 = vel(uu + 0.5 * hh * k2[0], vv + 0.5 * hh * k2[1])[:2]
        k4 = vel(uu + hh * k3[0], vv + hh * k3[1])[:2]
        return (uu + hh / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                vv + hh / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))

    e2 = {}
    for sgn in (1.0, -1.0):
        uu, vv = u, v
        for step in (1, 2):
            uu, vv = rk4(uu, vv, sgn * h_step)
            e2[int(sgn) * step] = j_apply_arr(vel(uu, vv)[2])
    de2 = (e2[-2] - 8.0 * e2[-1] + 8.0 * e2[1] - e2[2]) / (12.0 * h_step)
    H = -np.sum(de2 * e1_0, axis=-1)
    return _scalarize(H)


def p_mean_curvature_rotational(x, xp, xpp, tp, tpp) -> float:
    """H of a rotational surface from its generating curve (x(s), t(s))."""
    if x <= 0:
        raise AxisContact("generating curve touches the rotation axis")
    q = x * x * xp * xp + tp * tp
    if q <= 0:
        raise CharacteristicPoint("x^2 x'^2 + t'^2 vanishes")
    return -(x**3 * (xp * tpp - xpp * tp) + tp**3) / (x * q**1.5)


def wedge_norm(surf: ParamSurface, u, v):
    Xu, Xv = tangent_basis(surf, u, v)
    return np.linalg.norm(np.cross(Xu, Xv), axis=-1)


def immersion_check(surf: ParamSurface, u, v, eps: float = IMMERSION_EPS):
    out = wedge_norm(surf, u, v) > eps
    return bool(out) if np.ndim(out) == 0 else out


def cell_centered_grid(surf: ParamSurface, nu: int = 50, nv: int = 50):
    (u0, u1), (v0, v1) = surf.domain
    uu = u0 + (np.arange(nu) + 0.5) * (u1 - u0) / nu
    vv = v0 + (np.arange(nv) + 0.5) * (v1 - v0) / nv
    return np.meshgrid(uu, vv, indexing="ij")


# -- singular locus -----------------------------------------------------------

@dataclass
class Polyline:
    """Samples (u, v, x, y, z) along a singular curve; one row for isolated points."""

    rows: np.ndarray

    @property
    def is_point(self) -> bool:
        return len(self.rows) == 1

    @property
    def length(self) -> float:
        if len(self.rows) < 2:
            return 0.0
        return float(np.sum(np.linalg.norm(np.diff(self.rows[:, 2:], axis=0), axis=1)))


def _roots_on_line(f, us: np.ndarray, tau: float) -> list[float]:
    F = np.array([f(x) for x in us])
    roots = []
    for i in (0, len(us) - 1):
        if abs(F[i]) <= tau:
            roots.append(us[i])
    for i in range(len(us) - 1):
        if F[i] == 0.0 and 0 < i:
            roots.append(us[i])
        elif F[i] * F[i + 1] < 0:
            roots.append(brentq(f, us[i], us[i + 1], xtol=1e-14, rtol=1e-15))
    aF = np.abs(F)
    for i in range(1, len(us) - 1):
        if aF[i] <= aF[i - 1] and aF[i] <= aF[i + 1] and F[i - 1] * F[i + 1] > 0 and F[i] * F[i - 1] > 0:
            sgn = math.copysign(1.0, F[i])
            res = minimize_scalar(lambda x: sgn * f(x), bounds=(us[i - 1], us[i + 1]),
                                  method="bounded", options={"xatol": 1e-12})
            if abs(res.fun) <= tau:
                roots.append(float(res.x))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    return out


def singular_locus(surf: ParamSurface, nu: int = 64, nv: int = 64, tau: float = TAU_SING,
                   point_tol: float = 1e-7) -> list[Polyline]:
    """Singular curves and isolated singular points of the surface.

    Each v-line is scanned for zeros of the T-component of Xv (sign changes
    refined by Brent's method, tangential zeros by bounded minimisation),
    zeros are kept when Xu is horizontal there too, and consecutive v-lines
    are chained by nearest neighbour.
    """
    if nu < 8 or nv < 8:
        raise ValueError("singular_locus needs at least 8 samples per axis")
    (u0, u1), (v0, v1) = surf.domain
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv, endpoint=not surf.periodic_v)
    du = (u1 - u0) / (nu - 1)
    per_line = []
    for v in vs:
        def f(x, v=v):
            return float(tangent_basis(surf, x, v)[1][..., 2])
        found = []
        for r in _roots_on_line(f, us, tau):
            Xu, _ = tangent_basis(surf, r, v)
            if abs(float(Xu[..., 2])) <= max(tau, 1e-6):
                found.append(r)
        per_line.append(found)

    chains: list[list[tuple[float, float]]] = []
    open_chains: list[int] = []
    for j, v in enumerate(vs):
        nxt = []
        used = set()
        for r in per_line[j]:
            best, bd = None, 4.0 * du
            for ci in open_chains:
                if ci in used:
                    continue
                d = abs(chains[ci][-1][0] - r)
                if d < bd:
                    best, bd = ci, d
            if best is None:
                chains.append([(r, v)])
                best = len(chains) - 1
            else:
                chains[best].append((r, v))
            used.add(best)
            nxt.append(best)
        open_chains = nxt

    lines: list[Polyline] = []
    points: list[np.ndarray] = []
    for ch in chains:
        uv = np.array(ch)
        xyz = surf.point(uv[:, 0], uv[:, 1])
        rows = np.column_stack([uv, xyz])
        pl = Polyline(rows)
        if pl.length <= point_tol:
            points.append(rows[0])
        else:
            lines.append(pl)
    merged: list[np.ndarray] = []
    for p in points:
        if not any(np.linalg.norm(p[2:] - q[2:]) <= point_tol for q in merged):
            merged.append(p)
    return lines + [Polyline(p[None, :]) for p in merged]
