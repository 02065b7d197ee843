"""OBJ and CSV writers. Output is deterministic for identical inputs."""
from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .surface import ParamSurface, Polyline


def mesh_grid(surf: ParamSurface, nu: int = 64, nv: int = 64):
    if nu < 2 or nv < 2:
        raise ValueError("mesh resolution must be at least 2x2")
    (u0, u1), (v0, v1) = surf.domain
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv, endpoint=not surf.periodic_v)
    U, V = np.meshgrid(us, vs, indexing="ij")
    return surf.point(U, V)


def build_mesh(surf: ParamSurface, nu: int = 64, nv: int = 64, collapse_tol: float = 1e-12):
    """Vertices and triangles; rows that collapse to a point share one vertex."""
    P = mesh_grid(surf, nu, nv)
    nv_eff = P.shape[1]
    index = np.empty((nu, nv_eff), dtype=int)
    verts = []
    for i in range(nu):
        row = P[i]
        scale = max(1.0, float(np.max(np.abs(row))))
        if np.max(np.linalg.norm(row - row[0], axis=1)) <= collapse_tol * scale:
            index[i, :] = len(verts)
            verts.append(row[0])
        else:
            index[i, :] = np.arange(len(verts), len(verts) + nv_eff)
            verts.extend(row)
    faces = []
    ncols = nv_eff if surf.periodic_v else nv_eff - 1
    for i in range(nu - 1):
        for j in range(ncols):
            jn = (j + 1) % nv_eff
            a, b, c, d = index[i, j], index[i + 1, j], index[i + 1, jn], index[i, jn]
            for tri in ((a, b, c), (a, c, d)):
                if len(set(tri)) == 3:
                    faces.append(tri)
    return np.array(verts), np.array(faces, dtype=int).reshape(-1, 3)


def obj_text(surf: ParamSurface, nu: int = 64, nv: int = 64) -> str:
    verts, faces = build_mesh(surf, nu, nv)
    out = io.StringIO()
    out.write(f"# {surf.tag} {nu}x{nv}\n")
    for x, y, z in verts:
        out.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
    for a, b, c in faces:
        out.write(f"f {a + 1} {b + 1} {c + 1}\n")
    return out.getvalue()


def write_obj(surf: ParamSurface, path, nu: int = 64, nv: int = 64) -> None:
    Path(path).write_text(obj_text(surf, nu, nv))


def _write_csv(path, header, rows, comment=None):
    with open(path, "w", newline="") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{x:.17g}" if isinstance(x, float) else x for x in r])


def write_profile_csv(profile, path) -> None:
    note = f"gauge: {profile.gauge}\nkind: {profile.kind}; type: {profile.label}"
    rows = [tuple(float(x) for x in r) for r in profile.rows()]
    _write_csv(path, ["theta_tilde", "zeta1", "zeta2"], rows, note)


def write_locus_csv(lines: list[Polyline], path) -> None:
    rows = []
    for k, pl in enumerate(lines):
        for r in pl.rows:
            rows.append((k,) + tuple(float(x) for x in r))
    _write_csv(path, ["polyline", "u", "v", "x", "y", "z"], rows)


def write_phase_csv(field, path) -> None:
    rows = [tuple(float(x) for x in r) for r in field.rows()]
    _write_csv(path, ["alpha", "p", "dalpha", "dp"], rows)
