"""Normalization of deformed surfaces and extraction of the invariants (zeta1, zeta2).

Conventions. A constant p-mean curvature surface with c = 2 lambda is in
normal form when, in coordinates (s~, theta~),

    alpha = lambda sin(2 lambda s~ + zeta1) / (zeta2 - cos(2 lambda s~ + zeta1)).

A surface given in coordinates (s, theta) with e1 = d/ds is brought there by
s~ = s + Gamma(theta), theta~ = Psi(theta). For p-minimal surfaces the normal
form is alpha = (x + zeta1) / ((x + zeta1)^2 + zeta2). zeta1 is defined up to
an additive constant and theta~ up to translation; both gauges are anchored
at the start of the sampled range and recorded in ``InvariantProfile.gauge``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson

from .codazzi import TAU_CLASS, canonicalize
from .constructors import GeneratingCurve
from .curves import CurveSpec
from .errors import CharacteristicPoint, Cylinder, VanishingV
from .quadrature import adaptive_simpson, cumulative_integral, invert_monotone
from .surface import ParamSurface, extract_alpha_ab

V_EPS = 1e-10
QUAD_TOL = 1e-10


@dataclass
class DeformationData:
    theta: np.ndarray
    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    normV: np.ndarray
    G: np.ndarray
    zeta: np.ndarray


def _abd(curve: CurveSpec, lam: float, theta):
    th = np.asarray(theta, dtype=float)
    C, dC = curve.derivs(th, 1)
    c, s = np.cos(th), np.sin(th)
    A = dC[..., 1] * c - dC[..., 0] * s
    B = dC[..., 1] * s + dC[..., 0] * c
    theta_c = dC[..., 2] + C[..., 0] * dC[..., 1] - C[..., 1] * dC[..., 0]
    D = lam * theta_c + 1.0 / (2 * lam) - B
    return A, B, D


def deformation_data(curve: CurveSpec, lam: float, theta) -> DeformationData:
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    A, B, D = _abd(curve, lam, th)
    W = 1.0 / (2 * lam) - B
    normV = np.hypot(A, W)
    if np.any(normV <= V_EPS):
        raise VanishingV("V vanishes; alpha is identically zero there")
    zeta = np.unwrap(np.arctan2(A, W))
    return DeformationData(th, A, B, D, normV, D / normV, zeta)


def forinv_alpha(curve: CurveSpec, lam: float, s, theta):
    """alpha of the deformed surface in closed form at (s, theta)."""
    A, B, D = _abd(curve, lam, theta)
    w = 2 * lam * np.asarray(s, dtype=float)
    num = A * np.cos(w) + (1.0 / (2 * lam) - B) * np.sin(w)
    den = (B - 1.0 / (2 * lam)) * np.cos(w) + A * np.sin(w) + D
    return lam * num / den


def forinv_denominator(curve: CurveSpec, lam: float, s, theta):
    """G - cos(2 lambda s + zeta): vanishes exactly on the singular set."""
    A, B, D = _abd(curve, lam, theta)
    W = 1.0 / (2 * lam) - B
    n = np.hypot(A, W)
    w = 2 * lam * np.asarray(s, dtype=float)
    return (D - W * np.cos(w) + A * np.sin(w)) / n


@dataclass
class InvariantProfile:
    theta_tilde: np.ndarray
    zeta1: np.ndarray
    zeta2: np.ndarray
    theta: np.ndarray
    gamma: np.ndarray
    lam: float
    kind: str = "cmc"
    gauge: str = ""
    label: str = ""
    psi_prime: Optional[np.ndarray] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.zeta2)):
            raise ValueError("zeta2 must be finite")
        tt = self.theta_tilde
        if len(tt) > 1 and not (np.all(np.diff(tt) > 0)):
            raise ValueError("theta_tilde must be strictly increasing")

    def slope(self, wrt: str = "theta_tilde") -> float:
        x = self.theta_tilde if wrt == "theta_tilde" else self.theta
        return float(np.polyfit(x, self.zeta1, 1)[0])

    def canonical(self) -> "InvariantProfile":
        """Same profile with zeta2 >= 0 via (zeta1, zeta2) -> (zeta1 + pi, -zeta2)."""
        z1 = self.zeta1.copy()
        z2 = self.zeta2.copy()
        neg = z2 < 0
        z1[neg] += math.pi
        z2[neg] = -z2[neg]
        return InvariantProfile(self.theta_tilde, z1, z2, self.theta, self.gamma, self.lam,
                                self.kind, self.gauge + "; canonicalized zeta2 >= 0", self.label,
                                self.psi_prime)

    def rows(self) -> np.ndarray:
        return np.column_stack([self.theta_tilde, self.zeta1, self.zeta2])


def label_from_zeta2(z2: np.ndarray, lam: float) -> str:
    z2 = np.abs(np.asarray(z2, dtype=float))
    if lam == 0:
        if np.all(np.abs(z2) <= TAU_CLASS):
            return "SpecialI"
        return "General"
    if np.all(np.abs(z2 - 1) <= 1e-8):
        return "SpecialI"
    if np.all(z2 <= 1e-8):
        return "SpecialII"
    if np.all(z2 > 1 + 1e-8):
        return "GeneralI"
    if np.all(z2 < 1 - 1e-8):
        return "GeneralII/III"
    return "Mixed"


def normalize_deformed(curve: CurveSpec, lam: float = 1.0, theta_range=None, n_samples: int = 129,
                       tol: float = QUAD_TOL) -> InvariantProfile:
    """Invariants of the deformed surface on a uniform theta~ grid."""
    t0, t1 = theta_range if theta_range is not None else curve.theta_range
    grid = np.linspace(t0, t1, n_samples)
    base = deformation_data(curve, lam, grid)

    def normv(t):
        A, B, _ = _abd(curve, lam, t)
        return float(np.hypot(A, 1.0 / (2 * lam) - B))

    def dfun(t):
        return float(_abd(curve, lam, t)[2])

    psi_nodes = 2 * lam * cumulative_integral(normv, grid, tol)
    int_d_nodes = cumulative_integral(dfun, grid, tol)

    def psi(t):
        i = min(max(np.searchsorted(grid, t) - 1, 0), len(grid) - 2)
        return psi_nodes[i] + 2 * lam * adaptive_simpson(normv, grid[i], t, tol)

    tt = np.linspace(0.0, psi_nodes[-1], n_samples)
    th = np.empty_like(tt)
    for j, target in enumerate(tt):
        if j == 0:
            th[j] = t0
        elif j == n_samples - 1:
            th[j] = t1
        else:
            th[j] = invert_monotone(psi, lambda t: 2 * lam * normv(t), target, t0, t1, tol=1e-12)

    gamma = np.empty_like(th)
    for j, t in enumerate(th):
        i = min(max(np.searchsorted(grid, t) - 1, 0), len(grid) - 2)
        gamma[j] = (t - t0) / (2 * lam) - (int_d_nodes[i] + adaptive_simpson(dfun, grid[i], t, tol))

    data = deformation_data(curve, lam, th)
    # carry the unwrapped branch of zeta from the uniform theta grid
    zeta_ref = np.interp(th, grid, base.zeta)
    zeta = data.zeta + 2 * math.pi * np.round((zeta_ref - data.zeta) / (2 * math.pi))
    zeta1 = zeta - 2 * lam * gamma
    gauge = (f"Gamma=Psi=0 at theta={t0:.17g}; zeta1 carries the additive constant "
             f"fixed there; theta_tilde is translated so it starts at 0")
    return InvariantProfile(tt, zeta1, data.G, th, gamma, lam, "cmc", gauge,
                            label_from_zeta2(data.G, lam), 2 * lam * data.normV)


def pminimal_invariants(curve: CurveSpec, theta=None, n_samples: int = 129,
                        tol: float = QUAD_TOL) -> InvariantProfile:
    """zeta1 = A0 - int B0, zeta2 = Theta(C') - A0^2 for the deformed plane."""
    if theta is None:
        theta = np.linspace(*curve.theta_range, n_samples)
    th = np.asarray(theta, dtype=float)
    A0, B0, theta_c = _pmin_terms(curve, th)

    def b0(t):
        return float(_pmin_terms(curve, t)[1])

    gamma = cumulative_integral(b0, th, tol)
    zeta1 = A0 - gamma
    zeta2 = theta_c - A0**2
    gauge = f"Gamma=0 at theta={th[0]:.17g}; theta_tilde = theta - theta0"
    return InvariantProfile(th - th[0], zeta1, zeta2, th, gamma, 0.0, "pminimal", gauge,
                            label_from_zeta2(zeta2, 0.0), np.ones_like(th))


def _pmin_terms(curve: CurveSpec, th):
    C, dC = curve.derivs(th, 1)
    c, s = np.cos(th), np.sin(th)
    A0 = dC[..., 1] * c - dC[..., 0] * s
    B0 = dC[..., 0] * c + dC[..., 1] * s
    theta_c = dC[..., 2] + C[..., 0] * dC[..., 1] - C[..., 1] * dC[..., 0]
    return A0, B0, theta_c


def special_type1_residual(curve: CurveSpec, theta):
    """Left side of the special type I condition Theta(C') - A0^2 = 0."""
    A0, _, theta_c = _pmin_terms(curve, np.asarray(theta, dtype=float))
    return theta_c - A0**2


def energy(x, xp, tp, lam: float):
    x, xp, tp = (np.asarray(a, dtype=float) for a in (x, xp, tp))
    q = x * x * xp * xp + tp * tp
    if np.any(q <= 0):
        raise CharacteristicPoint("x^2 x'^2 + t'^2 vanishes")
    out = x * tp / np.sqrt(q) + lam * x * x
    return float(out) if out.ndim == 0 else out


def rotational_invariants(c: float, k: float = 2.0, phase: float = 0.0, m: Optional[float] = None,
                          n_samples: int = 65, theta_range=(0.0, 2 * math.pi)) -> InvariantProfile:
    """Closed-form invariants of the rotational surfaces built by the constructors.

    The rotation angle phi maps to normal coordinates through
    Gamma' = -E and Psi' = -2 lambda^2 r (c != 0) or Psi' = 1 (c = 0).
    """
    phi = np.linspace(theta_range[0], theta_range[1], n_samples)
    if c == 0:
        if m is None:
            raise ValueError("c = 0 needs the parameter m")
        E = m
        tb = phi - phi[0]
        z1 = E * tb
        z2 = np.full_like(phi, m * m)
        gamma = -E * (phi - phi[0])
        return InvariantProfile(tb, z1, z2, phi, gamma, 0.0, "rotational_minimal",
                                "zeta1 = 0 at the range start", label_from_zeta2(z2, 0.0),
                                np.ones_like(phi))
    r = 2.0 * math.sqrt(max(k - 1.0, 0.0)) / c**2
    if r == 0.0:
        raise Cylinder("k = 1 gives a cylinder with alpha identically zero")
    E = (k - 2.0) / (2.0 * c)
    lam = c / 2.0
    psi_p = -2.0 * lam * lam * r
    tb = psi_p * (phi - phi[0])
    z1 = -phase - 2.0 * E * tb / (c * r)
    z2 = np.full_like(phi, -(2.0 * c * E + 2.0) / (c * c * r))
    gamma = -E * (phi - phi[0])
    # Psi' < 0: present the samples on an increasing theta~ grid
    order = np.argsort(tb)
    return InvariantProfile(tb[order], z1[order], z2[order], phi[order], gamma[order], lam,
                            "rotational_cmc", "theta_bar = 0 at the start of the rotation range",
                            label_from_zeta2(z2, lam), np.full_like(phi, psi_p))


# -- numeric cross-checks ------------------------------------------------------

@dataclass
class CrossValidation:
    max_dzeta1: float
    max_dzeta2: float
    fitted_zeta1: np.ndarray
    fitted_zeta2: np.ndarray
    theta_tilde: np.ndarray
    max_fit_residual: float
    details: dict = field(default_factory=dict)

    @property
    def max_dev(self) -> float:
        return max(self.max_dzeta1, self.max_dzeta2)


def fit_cmc_slice(alpha: np.ndarray, u: np.ndarray, lam: float):
    """Fit alpha = lam sin(u + z1)/(z2 - cos(u + z1)); returns (z1, z2, residual).

    Linear in (z2, cos z1, sin z1) up to scale; the sign of the null vector
    is the (z1, z2) ~ (z1 + pi, -z2) ambiguity and is fixed by the caller.
    """
    M = np.column_stack([alpha, -alpha * np.cos(u) - lam * np.sin(u), alpha * np.sin(u) - lam * np.cos(u)])
    scale = np.linalg.norm(M, axis=1, keepdims=True)
    _, sv, vt = np.linalg.svd(M / scale)
    n = vt[-1]
    n = n / math.hypot(n[1], n[2])
    return math.atan2(n[2], n[1]), n[0], sv[-1]


def fit_pminimal_slice(alpha: np.ndarray, x: np.ndarray):
    """Fit alpha = (x + z1)/((x + z1)^2 + z2); returns (z1, z2, residual)."""
    M = np.column_stack([2 * alpha * x - 1.0, alpha])
    rhs = x - alpha * x * x
    sol, res, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    P, Q = sol
    resid = float(np.max(np.abs(M @ sol - rhs)))
    return P, Q - P * P, resid


def _wrap(d):
    return (d + math.pi) % (2 * math.pi) - math.pi


def cross_validate(surf: ParamSurface, profile: InvariantProfile, n_slices: Optional[int] = None,
                   n_s: int = 33, pole_margin: float = 1e-2) -> CrossValidation:
    """Refit (zeta1, zeta2) from numerically extracted alpha on each theta~ slice.

    Uses the profile's Gamma to place samples at s = s~ - Gamma(theta). The
    zeta1 comparison is modulo 2 pi and the sign ambiguity of the fit is
    resolved towards the profile's zeta2.
    """
    lam = profile.lam
    (s0, s1), _ = surf.domain
    idx = np.arange(len(profile.theta))
    if n_slices is not None and n_slices < len(idx):
        idx = np.unique(np.linspace(0, len(idx) - 1, n_slices).round().astype(int))
    fz1, fz2, res_max = [], [], 0.0
    for j in idx:
        th = profile.theta[j]
        g = profile.gamma[j]
        s = np.linspace(s0, s1, 4 * n_s + 1)[1:-1]
        if lam != 0:
            u = 2 * lam * (s + g)
            den = profile.zeta2[j] - np.cos(u + profile.zeta1[j])
            keep = np.abs(den) > pole_margin
            s = s[keep]
        else:
            x = s + g
            den = (x + profile.zeta1[j]) ** 2 + profile.zeta2[j]
            s = s[np.abs(den) > pole_margin]
        pick = np.unique(np.linspace(0, len(s) - 1, n_s).round().astype(int))
        s = s[pick]
        fr = extract_alpha_ab(surf, s, np.full_like(s, th), strict=False)
        alpha = np.asarray(fr.alpha)
        ok = np.isfinite(alpha)
        s, alpha = s[ok], alpha[ok]
        if lam != 0:
            z1, z2, res = fit_cmc_slice(alpha, 2 * lam * (s + g), lam)
            ref1, ref2 = profile.zeta1[j], profile.zeta2[j]
            keep_cost = abs(z2 - ref2) + abs(_wrap(z1 - ref1))
            flip_cost = abs(-z2 - ref2) + abs(_wrap(z1 + math.pi - ref1))
            if flip_cost < keep_cost:
                z1, z2 = z1 + math.pi, -z2
        else:
            z1, z2, res = fit_pminimal_slice(alpha, s + g)
        fz1.append(z1)
        fz2.append(z2)
        res_max = max(res_max, res)
    fz1 = np.array(fz1)
    fz2 = np.array(fz2)
    ref1 = profile.zeta1[idx]
    d1 = _wrap(fz1 - ref1) if lam != 0 else fz1 - ref1
    fz1 = ref1 + d1
    return CrossValidation(float(np.max(np.abs(d1))), float(np.max(np.abs(fz2 - profile.zeta2[idx]))),
                           fz1, fz2, profile.theta_tilde[idx], res_max)


def numeric_pminimal_profile(surf: ParamSurface, theta, r_ref: float = 0.5, n_r: int = 33,
                             r_range=(-1.5, 1.5), pole_margin: float = 1e-2) -> InvariantProfile:
    """zeta1, zeta2 of a deformed plane from extracted (alpha, a, b) only.

    Gamma' = -a/b (the normal form has a~ = 0); the per-slice fit of alpha
    against x = r + Gamma(theta) then yields zeta1 and zeta2.
    """
    th = np.asarray(theta, dtype=float)

    def gp(t):
        fr = extract_alpha_ab(surf, r_ref, t)
        return -float(fr.a) / float(fr.b)

    gamma = cumulative_integral(gp, th, 1e-10)
    z1, z2 = np.empty_like(th), np.empty_like(th)
    for j, t in enumerate(th):
        r = np.linspace(r_range[0], r_range[1], 4 * n_r)
        fr = extract_alpha_ab(surf, r, np.full_like(r, t), strict=False)
        al = np.asarray(fr.alpha)
        ok = np.isfinite(al) & (np.abs(al) < 1.0 / pole_margin)
        r, al = r[ok], al[ok]
        pick = np.unique(np.linspace(0, len(r) - 1, n_r).round().astype(int))
        z1[j], z2[j], _ = fit_pminimal_slice(al[pick], r[pick] + gamma[j])
    return InvariantProfile(th - th[0], z1, z2, th, gamma, 0.0, "pminimal-numeric",
                            f"Gamma=0 at theta={th[0]:.17g}", label_from_zeta2(z2, 0.0))


def numeric_cmc_profile(surf: ParamSurface, lam: float, theta, n_s: int = 33,
                        pole_margin: float = 1e-2) -> InvariantProfile:
    """Invariants of a CMC surface parametrized with e1 = d/ds, from extraction only.

    Per slice: Gamma' from the normal-form a~, the phase and zeta2 from a fit
    of alpha, Psi' from the normal-form b~ (taken positive, which fixes the
    sign of zeta2). Gamma and Psi are then integrated with a cumulative
    Simpson rule.
    """
    th = np.asarray(theta, dtype=float)
    (s0, s1), _ = surf.domain
    phase, z2, gp, pp = (np.empty_like(th) for _ in range(4))
    for j, t in enumerate(th):
        s = np.linspace(s0, s1, 4 * n_s + 1)[1:-1]
        fr = extract_alpha_ab(surf, s, np.full_like(s, t), strict=False)
        al = np.asarray(fr.alpha)
        keep = np.isfinite(al) & (np.abs(al) < 1.0 / pole_margin)
        s, al = s[keep], al[keep]
        a, b = np.asarray(fr.a)[keep], np.asarray(fr.b)[keep]
        pick = np.unique(np.linspace(0, len(s) - 1, n_s).round().astype(int))
        s, al, a, b = s[pick], al[pick], a[pick], b[pick]
        ph, g2, _ = fit_cmc_slice(al, 2 * lam * s, lam)
        root = np.sqrt(1 + al * al)
        gp[j] = np.median((-lam / root - a) / b)
        btil = 2 * lam * lam / ((g2 - np.cos(2 * lam * s + ph)) * root)
        pp[j] = np.median(btil / b)
        if pp[j] < 0:
            # orientation of theta~ fixes the sign ambiguity of the fit
            ph, g2, pp[j] = ph + math.pi, -g2, -pp[j]
        phase[j], z2[j] = ph, g2
    gamma = cumulative_simpson(gp, x=th, initial=0.0)
    psi = cumulative_simpson(pp, x=th, initial=0.0)
    phase = np.unwrap(phase)
    z1 = phase - 2 * lam * gamma
    return InvariantProfile(psi, z1, z2, th, gamma, lam, "cmc-numeric",
                            f"Gamma=Psi=0 at theta={th[0]:.17g}", label_from_zeta2(z2, lam), pp)
