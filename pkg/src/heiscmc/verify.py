"""Acceptance checks. Each returns a CriterionResult; ``run_all`` runs them in order.

Tolerances are fixed here and multiplied by the HEISCMC_TOL_SCALE environment
variable when set.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import codazzi as cz
from . import constructors as cs
from . import curves as cv
from . import invariants as inv
from . import surface as sg

SEED = 20240917
OFF_POLE = 0.05
REG_MARGIN = 1e-2


def tol_scale() -> float:
    raw = os.environ.get("HEISCMC_TOL_SCALE")
    if not raw:
        return 1.0
    val = float(raw)
    if not val > 0:
        raise ValueError("HEISCMC_TOL_SCALE must be positive")
    return val


@dataclass
class CriterionResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    details: dict = field(default_factory=dict)
    op: str = "<="

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: measured {self.measured:.3e} (need {self.op} {self.tolerance:.1e})"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured,
                "tolerance": self.tolerance, "comparison": self.op, "details": self.details}


def _result(name, worst, tol, details, below=True):
    tol = tol * tol_scale() if below else tol / tol_scale()
    ok = bool(np.isfinite(worst) and (worst <= tol if below else worst >= tol))
    return CriterionResult(name, ok, float(worst), tol, details)


def _ratio_result(name, parts: dict, details: dict) -> CriterionResult:
    """Compound criterion: measured is the worst error/tolerance ratio, passing at <= 1."""
    scale = tol_scale()
    ratios = {k: err / tol for k, (err, tol) in parts.items()}
    worst = max(ratios.values())
    details = dict(details)
    details["parts"] = {k: {"error": err, "tolerance": tol * scale} for k, (err, tol) in parts.items()}
    details["measured_is"] = "worst error/tolerance ratio"
    return CriterionResult(name, bool(np.isfinite(worst) and worst <= scale), float(worst), scale, details)


def criterion_1(n_models: int = 200, n_x: int = 1000) -> CriterionResult:
    """Codazzi residual of random general solutions off poles."""
    rng = np.random.default_rng(SEED)
    worst, used = 0.0, 0
    for _ in range(n_models):
        c = rng.uniform(0.5, 3.0)
        c1 = rng.uniform(0.0, 2 * math.pi)
        c2 = rng.uniform(0.0, 5.0)
        m = cz.AlphaModel.general(c, c1, c2)
        x = rng.uniform(0.0, 2 * math.pi / c, n_x)
        x = x[np.abs(cz.denominator(m, x)) >= OFF_POLE]
        used += x.size
        worst = max(worst, float(np.max(np.abs(cz.codazzi_residual(m, x)), initial=0.0)))
    return _result("1 codazzi residual", worst, 1e-9, {"samples": used, "off_pole": OFF_POLE})


def criterion_2(n: int = 50) -> CriterionResult:
    """Numeric H of the Pansu sphere."""
    worst, per = 0.0, {}
    for lam in (0.5, 1.0, 2.0):
        P = cs.pansu(lam)
        U, V = sg.cell_centered_grid(P, n, n)
        err = float(np.max(np.abs(sg.p_mean_curvature(P, U, V) - 2 * lam)))
        per[str(lam)] = err
        worst = max(worst, err)
    return _result("2 pansu H = 2 lambda", worst, 1e-5, per)


def pansu_closed_forms(lam, s):
    w = 2 * lam * s
    alpha = lam * np.sin(w) / (1 - np.cos(w))
    root = np.sqrt(1 + alpha**2)
    return alpha, -lam / root, 2 * lam**2 / (root * (1 - np.cos(w)))


def criterion_3(n: int = 50) -> CriterionResult:
    worst, per = 0.0, {}
    for lam in (0.5, 1.0, 2.0):
        P = cs.pansu(lam)
        U, V = sg.cell_centered_grid(P, n, n)
        fr = sg.extract_alpha_ab(P, U, V)
        al, a, b = pansu_closed_forms(lam, U)
        err = max(float(np.max(np.abs(fr.alpha - al))), float(np.max(np.abs(fr.a - a))),
                  float(np.max(np.abs(fr.b - b))))
        per[str(lam)] = err
        worst = max(worst, err)
    return _result("3 pansu alpha/a/b closed forms", worst, 1e-9, per)


DEFORM_CASES = [("prop_c2value", {"r": 0.1}), ("prop_c2value", {"r": 0.25}), ("prop_c2value", {"r": 0.75}),
                ("prop_c1linear", {"k": 0.5}), ("prop_c1linear", {"k": 3.0}),
                ("prop_indepc1", {"k": 2.0, "m": -1.0}), ("prop_indepc1", {"k": 2.0, "m": 0.5}),
                ("prop_indepc1", {"k": 2.0, "m": 2.0}), ("lnsectan", {})]


def _case_name(name, params):
    inner = ",".join(f"{k}={v}" for k, v in params.items())
    return f"{name}({inner})"


def deformed_h_alpha(name, params, lam=1.0, n=50):
    """(max |H - 2 lam|, max |alpha - closed form|, regular count) on a 50x50 grid."""
    curve = cs.catalog(name, lam=lam, **params)
    Y = cs.deform_pansu(curve, lam)
    U, V = sg.cell_centered_grid(Y, n, n)
    den = inv.forinv_denominator(curve, lam, U, V)
    reg = np.abs(den) >= REG_MARGIN
    H = sg.p_mean_curvature(Y, U[reg], V[reg], strict=False)
    fr = sg.extract_alpha_ab(Y, U[reg], V[reg], strict=False)
    al = inv.forinv_alpha(curve, lam, U[reg], V[reg])
    herr = np.abs(H - 2 * lam)
    aerr = np.abs(fr.alpha - al)
    if np.any(~np.isfinite(herr)) or np.any(~np.isfinite(aerr)):
        return math.inf, math.inf, int(reg.sum())
    return float(herr.max()), float(aerr.max()), int(reg.sum())


def criterion_4() -> CriterionResult:
    worst_h, worst_a, per = 0.0, 0.0, {}
    for name, params in DEFORM_CASES:
        h, a, nreg = deformed_h_alpha(name, params)
        per[_case_name(name, params)] = {"H": h, "alpha": a, "regular_points": nreg}
        worst_h, worst_a = max(worst_h, h), max(worst_a, a)
    return _ratio_result("4 deformed CMC: H and alpha", {"H": (worst_h, 1e-5), "alpha": (worst_a, 1e-9)},
                         {"cases": per})


def _line_dev(x, y, slope):
    return float(np.max(np.abs((y - y[0]) - slope * (x - x[0]))))


def invariant_checks(lam: float = 1.0) -> dict:
    """Deviation of each normalize_deformed profile from its stated invariants."""
    out = {}
    for r in (0.1, 0.25, 0.75):
        p = inv.normalize_deformed(cs.catalog("prop_c2value", r=r, lam=lam), lam)
        out[f"prop_c2value(r={r})"] = max(float(np.max(np.abs(p.zeta2 - 1 / abs(1 - 2 * r)))),
                                          _line_dev(p.theta_tilde, p.zeta1, 0.0))
    for k in (0.5, 3.0):
        p = inv.normalize_deformed(cs.catalog("prop_c1linear", k=k, lam=lam), lam)
        out[f"prop_c1linear(k={k})"] = max(float(np.max(np.abs(p.zeta2 - k))),
                                           _line_dev(p.theta_tilde, p.zeta1, k - 1))
    for m in (-1.0, 0.5, 2.0):
        p = inv.normalize_deformed(cs.catalog("prop_indepc1", k=2.0, m=m, lam=lam), lam)
        out[f"prop_indepc1(k=2,m={m})"] = max(float(np.max(np.abs(p.zeta2 - 2.0))),
                                              _line_dev(p.theta, p.zeta1, m))
    p = inv.normalize_deformed(cs.catalog("lnsectan", lam=lam), lam)
    out["lnsectan"] = max(float(np.max(np.abs(p.zeta2))), _line_dev(p.theta_tilde, p.zeta1, 0.0))
    return out


def criterion_5() -> CriterionResult:
    per = invariant_checks()
    worst = max(per.values())
    failing = [k for k, v in per.items() if v > 1e-6 * tol_scale()]
    return _result("5 invariant pipeline vs stated invariants", worst, 1e-6,
                   {"cases": per, "failing": failing})


def _energy_samples(g, n=200):
    s = np.linspace(0.0, 2 * math.pi / abs(g.c), n)
    x, xp, _, _, tp, _ = g.radial(s)
    keep = x > 1e-3
    return inv.energy(x[keep], xp[keep], tp[keep], g.c / 2.0)


def criterion_6(n: int = 50) -> CriterionResult:
    per = {}
    worst = {"E": 0.0, "H": 0.0, "zeta2": 0.0, "slope": 0.0}
    for c in (1.0, 2.0):
        for k in (1.5, 2.0, 5.0):
            surf, g = cs.rotational_cmc(c, k)
            E = _energy_samples(g)
            e_err = max(float(np.ptp(E)), float(np.max(np.abs(E - (k - 2) / (2 * c)))))
            U, V = sg.cell_centered_grid(surf, n, n)
            h_err = float(np.max(np.abs(sg.p_mean_curvature(surf, U, V) - c)))
            prof = inv.rotational_invariants(c, k, n_samples=17)
            cvr = inv.cross_validate(surf, prof)
            z2_exp = -(2 * c * g.E + 2) / (c * c * g.r)
            z2_err = float(np.max(np.abs(cvr.fitted_zeta2 - z2_exp)))
            slope = float(np.polyfit(cvr.theta_tilde, cvr.fitted_zeta1, 1)[0])
            sl_err = abs(slope + 2 * g.E / (c * g.r))
            cur = {"E": e_err, "H": h_err, "zeta2": z2_err, "slope": sl_err}
            per[f"c={c},k={k}"] = cur
            worst = {key: max(worst[key], cur[key]) for key in worst}
    return _ratio_result("6 rotational CMC: E, H, zeta2, slope",
                         {"E": (worst["E"], 1e-10), "H": (worst["H"], 1e-5),
                          "zeta2": (worst["zeta2"], 1e-6), "slope": (worst["slope"], 1e-6)},
                         {"cases": per})


def oracle_rotational_minimal(c2: float, m: float, n: int = 201) -> float:
    """max |H| along the rotated profile (sqrt(s^2 + c2), m s), s in [-2, 2]."""
    sig = np.linspace(-2.0, 2.0, n)
    x, xp, xpp, _, tp, tpp = cs.hyperbola_profile(c2, m, sig)
    keep = x > 1e-9
    H = [sg.p_mean_curvature_rotational(*t) for t in zip(x[keep], xp[keep], xpp[keep], tp[keep], tpp[keep])]
    return float(np.max(np.abs(H)))


def criterion_7(n: int = 50) -> CriterionResult:
    per = {}
    worst = {"H": 0.0, "E": 0.0, "slope": 0.0}
    for m in (0.5, 2.0):
        surf, g = cs.rotational_minimal(m)
        U, V = sg.cell_centered_grid(surf, n, n)
        h_err = float(np.max(np.abs(sg.p_mean_curvature(surf, U, V))))
        sig = np.linspace(-2, 2, 201)
        x, xp, _, _, tp, _ = g.radial(sig)
        e_err = float(np.max(np.abs(inv.energy(x, xp, tp, 0.0) - m)))
        prof = inv.rotational_invariants(0.0, m=m, n_samples=17)
        cvr = inv.cross_validate(surf, prof)
        sl_err = abs(float(np.polyfit(cvr.theta_tilde, cvr.fitted_zeta1, 1)[0]) - m)
        cur = {"H": h_err, "E": e_err, "slope": sl_err}
        per[f"m={m}"] = cur
        worst = {key: max(worst[key], cur[key]) for key in worst}
    oracle = oracle_rotational_minimal(1.0, 2.0)
    per["oracle(c2=1,m=2)"] = {"max_abs_H": oracle}
    # the oracle must be large: express it as a ratio that is <= 1 when |H| >= 1e-2
    return _ratio_result("7 rotational p-minimal + c2 != m^2 oracle",
                         {"H": (worst["H"], 1e-6), "E": (worst["E"], 1e-10), "slope": (worst["slope"], 1e-6),
                          "oracle_floor": (1e-2, max(oracle, 1e-300))},
                         {"cases": per})


def criterion_8() -> CriterionResult:
    details = {}
    P = sg.singular_locus(cs.pansu(1.0), tau=1e-8)
    poles = np.array([[0, 0, math.pi / 4], [0, 0, -math.pi / 4]])
    pansu_ok = len(P) == 2 and all(pl.is_point for pl in P) and all(
        min(np.linalg.norm(pl.rows[0, 2:] - q) for q in poles) < 1e-9 for pl in P)
    details["pansu"] = [pl.rows[0, 2:].tolist() for pl in P]
    empty_ok = True
    for name, params in [("prop_c2value", {"r": 0.1}), ("prop_c2value", {"r": 0.25}),
                         ("prop_c1linear", {"k": 3.0}), ("prop_indepc1", {"k": 2.0, "m": 2.0})]:
        loc = sg.singular_locus(cs.deform_pansu(cs.catalog(name, **params), 1.0))
        details[_case_name(name, params)] = len(loc)
        empty_ok &= len(loc) == 0
    Y = cs.deform_pansu(cs.catalog("prop_indepc1", k=1.0, m=0.5), 1.0)
    loc = sg.singular_locus(Y)
    longest = max((pl.length for pl in loc), default=0.0)
    details["special_I_nonconstant_zeta1_length"] = longest
    ok = pansu_ok and empty_ok and longest > 0
    return CriterionResult("8 singular loci", bool(ok), longest, 0.0, details, op=">")


PMIN_CASES = [("pmin_rotlike", {"r": 1.0, "z": (0.0, -2.0)}), ("pmin_rotlike", {"r": 1.0, "z": (0.0, 0.5)}),
              ("pmin_rotlike", {"r": 0.5, "z": [cv.poly(0.0, -1.0), cv.sin(0.1, 2.0)]})]


def criterion_9() -> CriterionResult:
    th = np.linspace(0.0, 2 * math.pi, 33)
    per = {}
    worst = 0.0
    for name, params in PMIN_CASES:
        curve = cs.catalog(name, **params)
        closed = inv.pminimal_invariants(curve, th)
        numeric = inv.numeric_pminimal_profile(cs.deform_plane(curve), th)
        err = max(float(np.max(np.abs(closed.zeta1 - numeric.zeta1))),
                  float(np.max(np.abs(closed.zeta2 - numeric.zeta2))))
        label = f"{name}(r={params['r']})" + ("" if isinstance(params["z"], tuple) else "+sin")
        label += "" if not isinstance(params["z"], tuple) else f",z'={params['z'][1]}"
        per[label] = err
        worst = max(worst, err)
    deg = float(np.max(np.abs(inv.special_type1_residual(cs.catalog("degenerate_special1"), th))))
    fixed = float(np.max(np.abs(inv.special_type1_residual(cs.catalog("degenerate_special1_corrected"), th))))
    return _ratio_result("9 p-minimal invariants + special type I curve",
                         {"closed_vs_numeric": (worst, 1e-6), "special_type_I_residual": (deg, 1e-10)},
                         {"cases": per, "degenerate_special1_corrected_residual": fixed})


def criterion_10() -> CriterionResult:
    c, k = 2.0, 2.0
    lam = c / 2
    surf, g = cs.rotational_cmc(c, k)
    prof = inv.rotational_invariants(c, k, n_samples=9)
    worst = 0.0
    for j in range(len(prof.theta)):
        z1c, z2c = cz.canonicalize(float(prof.zeta1[j]), float(prof.zeta2[j]))
        model = cz.AlphaModel(c=c, branch="General", c1=z1c, c2=z2c)
        s = np.linspace(0.0, math.pi / lam, 401)[1:-1]
        sbar = s + prof.gamma[j]
        keep = np.abs(cz.denominator(model, sbar)) >= OFF_POLE
        fr = sg.extract_alpha_ab(surf, s[keep], np.full(keep.sum(), prof.theta[j]))
        worst = max(worst, float(np.max(np.abs(fr.alpha - cz.alpha_eval(model, sbar[keep])))))
    return _result("10 canonicalized rotational Pansu = special type I normal form", worst, 1e-10,
                   {"canonical": list(cz.canonicalize(float(prof.zeta1[0]), float(prof.zeta2[0]))),
                    "label": cz.classify(cz.AlphaModel(c=c, c1=0.0, c2=1.0)).label})


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all() -> list[CriterionResult]:
    return [fn() for fn in CRITERIA]
