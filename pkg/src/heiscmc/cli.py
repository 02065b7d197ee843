"""Command-line interface: build surfaces, export meshes/profiles, run checks.

Exit codes: 0 success, 2 usage or validation error, 3 tolerance breach.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import codazzi as cz
from . import constructors as cs
from . import export as ex
from . import invariants as inv
from . import surface as sg
from . import verify as vf
from .curves import CurveSpec
from .errors import HeisError

EXIT_OK, EXIT_INVALID, EXIT_BREACH = 0, 2, 3
CATALOG_PARAMS = ("r", "k", "m", "c3", "c4", "c5", "c6")


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 2:
        raise argparse.ArgumentTypeError("resolution must be at least 2")
    return val


def _add_outputs(p, profile=True):
    p.add_argument("--mesh", type=Path, help="write an OBJ mesh")
    p.add_argument("--singular", type=Path, help="write the singular locus as CSV")
    if profile:
        p.add_argument("--profile", type=Path, help="write the invariant profile as CSV")
    p.add_argument("--nu", type=_positive_int, default=64)
    p.add_argument("--nv", type=_positive_int, default=64)


def _add_source(p, with_lambda=True):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve", type=Path, help="curve spec JSON file")
    src.add_argument("--catalog", help="catalog curve name")
    for name in CATALOG_PARAMS:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--z", type=float, nargs="+", help="polynomial coefficients of z (pmin_rotlike)")
    p.add_argument("--theta-range", type=float, nargs=2)
    if with_lambda:
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heiscmc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pansu", help="the Pansu sphere")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    _add_outputs(p, profile=False)

    p = sub.add_parser("rotational", help="rotationally invariant CMC or p-minimal surface")
    p.add_argument("--c", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--phase", type=float, default=0.0)
    _add_outputs(p)

    p = sub.add_parser("deform", help="deform the Pansu sphere along a curve")
    _add_source(p)
    _add_outputs(p)

    p = sub.add_parser("pminimal", help="deform the horizontal plane along a curve")
    _add_source(p, with_lambda=False)
    _add_outputs(p)

    p = sub.add_parser("invariants", help="invariant profile of a deformed surface")
    _add_source(p)
    p.add_argument("--pminimal", action="store_true", help="treat the curve as a plane deformation")
    p.add_argument("--samples", type=_positive_int, default=129)
    p.add_argument("--profile", type=Path)
    p.add_argument("--report", type=Path)

    p = sub.add_parser("verify", help="run acceptance checks")
    p.add_argument("suite", choices=["all", "codazzi", "h", "invariants", "rotational-minimal"])
    p.add_argument("--report", type=Path)
    p.add_argument("--catalog")
    for name in CATALOG_PARAMS:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--c2", type=float)

    p = sub.add_parser("phase-field", help="sample the (alpha, alpha') direction field")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--alpha-range", type=float, nargs=2, default=(-3.0, 3.0))
    p.add_argument("--p-range", type=float, nargs=2, default=(-3.0, 3.0))
    p.add_argument("--resolution", type=_positive_int, nargs=2, default=(21, 21))
    p.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    return ap


def _catalog_kwargs(args, with_lambda=True) -> dict:
    kw = {k: getattr(args, k) for k in CATALOG_PARAMS if getattr(args, k, None) is not None}
    if getattr(args, "z", None):
        kw["z"] = tuple(args.z)
    if with_lambda and args.catalog not in cs.PMINIMAL_CURVES:
        kw["lam"] = args.lam
    return kw


def _load_curve(args, with_lambda=True) -> CurveSpec:
    if args.curve is not None:
        curve = CurveSpec.load(args.curve)
    else:
        curve = cs.catalog(args.catalog, **_catalog_kwargs(args, with_lambda))
    if getattr(args, "theta_range", None):
        curve = CurveSpec(curve.coords, curve.name, tuple(args.theta_range), curve.params)
    return curve


def _emit(surf, args, profile=None):
    if args.mesh:
        ex.write_obj(surf, args.mesh, args.nu, args.nv)
    if args.singular:
        ex.write_locus_csv(sg.singular_locus(surf, max(args.nu, 8), max(args.nv, 8)), args.singular)
    if getattr(args, "profile", None) and profile is not None:
        ex.write_profile_csv(profile, args.profile)


def _write_report(path, payload):
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n")


def cmd_pansu(args):
    _emit(cs.pansu(args.lam), args)
    return EXIT_OK


def cmd_rotational(args):
    if args.m is not None:
        surf, _ = cs.rotational_minimal(args.m)
        prof = inv.rotational_invariants(0.0, m=args.m)
    elif args.c is not None and args.k is not None:
        surf, _ = cs.rotational_cmc(args.c, args.k, args.phase)
        prof = inv.rotational_invariants(args.c, args.k, args.phase) if args.profile else None
    else:
        raise HeisError("rotational needs --c and --k, or --m")
    _emit(surf, args, prof)
    return EXIT_OK


def cmd_deform(args):
    curve = _load_curve(args)
    surf = cs.deform_pansu(curve, args.lam)
    prof = inv.normalize_deformed(curve, args.lam) if args.profile else None
    _emit(surf, args, prof)
    return EXIT_OK


def cmd_pminimal(args):
    curve = _load_curve(args, with_lambda=False)
    surf = cs.deform_plane(curve)
    prof = inv.pminimal_invariants(curve) if args.profile else None
    _emit(surf, args, prof)
    return EXIT_OK


def cmd_invariants(args):
    pmin = args.pminimal or (args.catalog in cs.PMINIMAL_CURVES)
    curve = _load_curve(args, with_lambda=not pmin)
    if pmin:
        prof = inv.pminimal_invariants(curve, n_samples=args.samples)
    else:
        prof = inv.normalize_deformed(curve, args.lam, n_samples=args.samples)
    if args.profile:
        ex.write_profile_csv(prof, args.profile)
    _write_report(args.report, {
        "curve": curve.name, "kind": prof.kind, "type": prof.label, "gauge": prof.gauge,
        "zeta2_min": float(np.min(prof.zeta2)), "zeta2_max": float(np.max(prof.zeta2)),
        "zeta1_slope_theta_tilde": prof.slope(), "zeta1_slope_theta": prof.slope("theta"),
    })
    return EXIT_OK


def _verify_h_single(args):
    name = args.catalog
    params = {k: getattr(args, k) for k in CATALOG_PARAMS if getattr(args, k) is not None}
    h_err, a_err, nreg = vf.deformed_h_alpha(name, params, args.lam)
    tol = 1e-5 * vf.tol_scale()
    return [vf.CriterionResult(f"h {vf._case_name(name, params)} lambda={args.lam}", h_err <= tol, h_err, tol,
                               {"max_alpha_error": a_err, "regular_points": nreg})]


def cmd_verify(args):
    if args.suite == "all":
        results = vf.run_all()
    elif args.suite == "codazzi":
        results = [vf.criterion_1()]
    elif args.suite == "h":
        results = _verify_h_single(args) if args.catalog else [vf.criterion_2(), vf.criterion_4()]
    elif args.suite == "invariants":
        results = [vf.criterion_5(), vf.criterion_9(), vf.criterion_10()]
    else:
        if args.c2 is not None or args.m is not None:
            if args.c2 is None or args.m is None:
                raise HeisError("rotational-minimal oracle needs both --c2 and --m")
            resid = vf.oracle_rotational_minimal(args.c2, args.m)
            payload = {"c2": args.c2, "m": args.m, "c2_equals_m_squared": math.isclose(args.c2, args.m**2),
                       "max_abs_H": resid}
            _write_report(args.report, payload)
            print(f"rotational-minimal oracle c2={args.c2:g} m={args.m:g}: max |H| = {resid:.6e}")
            return EXIT_OK
        results = [vf.criterion_7()]
    for r in results:
        print(r.line())
    failing = [r.name for r in results if not r.passed]
    _write_report(args.report, {"passed": not failing, "failing": failing,
                                "tolerance_scale": vf.tol_scale(),
                                "criteria": [r.to_dict() for r in results]})
    return EXIT_BREACH if failing else EXIT_OK


def cmd_phase_field(args):
    f = cz.phase_field(args.c, tuple(args.alpha_range), tuple(args.p_range), tuple(args.resolution))
    if args.out:
        ex.write_phase_csv(f, args.out)
    else:
        sys.stdout.write("alpha,p,dalpha,dp\n")
        for row in f.rows():
            sys.stdout.write(",".join(f"{x:.17g}" for x in row) + "\n")
    return EXIT_OK


COMMANDS = {"pansu": cmd_pansu, "rotational": cmd_rotational, "deform": cmd_deform,
            "pminimal": cmd_pminimal, "invariants": cmd_invariants, "verify": cmd_verify,
            "phase-field": cmd_phase_field}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.cmd](args)
    except HeisError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
