"""Analytic curves C(theta) in H1 built from a small term language.

Each coordinate is a sum of terms. Supported kinds:

    poly      coeffs [c0, c1, c2, c3]            sum c_i theta^i
    sin/cos   amp, omega, phase                  A sin(w theta + p)
    tsin/tcos amp, omega, phase                  A theta sin(w theta + p)
    lnsectan  amp                                A ln|sec theta + tan theta|

Values, first and second derivatives are exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CurveSpecError

KINDS = ("poly", "sin", "cos", "tsin", "tcos", "lnsectan")


@dataclass(frozen=True)
class Term:
    kind: str
    coeffs: tuple[float, ...] = ()
    amp: float = 0.0
    omega: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CurveSpecError(f"unknown term kind {self.kind!r}")
        if self.kind == "poly" and len(self.coeffs) > 4:
            raise CurveSpecError("polynomial terms are limited to degree 3")

    def derivs(self, th: np.ndarray, order: int = 2):
        """Return [f, f', f''][:order+1] evaluated at th."""
        k = self.kind
        if k == "poly":
            c = np.zeros(4)
            c[: len(self.coeffs)] = self.coeffs
            f = c[0] + th * (c[1] + th * (c[2] + th * c[3]))
            f1 = c[1] + th * (2 * c[2] + th * 3 * c[3])
            f2 = 2 * c[2] + 6 * c[3] * th
            return [f, f1, f2 + 0 * th][: order + 1]
        if k == "lnsectan":
            sec = 1.0 / np.cos(th)
            f = self.amp * np.log(np.abs(sec + np.tan(th)))
            return [f, self.amp * sec, self.amp * sec * np.tan(th)][: order + 1]
        A, w, p = self.amp, self.omega, self.phase
        arg = w * th + p
        s, co = np.sin(arg), np.cos(arg)
        if k == "sin":
            return [A * s, A * w * co, -A * w * w * s][: order + 1]
        if k == "cos":
            return [A * co, -A * w * s, -A * w * w * co][: order + 1]
        if k == "tsin":
            return [A * th * s, A * (s + w * th * co), A * (2 * w * co - w * w * th * s)][: order + 1]
        return [A * th * co, A * (co - w * th * s), A * (-2 * w * s - w * w * th * co)][: order + 1]

    def to_dict(self) -> dict:
        if self.kind == "poly":
            return {"kind": "poly", "coeffs": list(self.coeffs)}
        if self.kind == "lnsectan":
            return {"kind": "lnsectan", "amp": self.amp}
        return {"kind": self.kind, "amp": self.amp, "omega": self.omega, "phase": self.phase}

    @classmethod
    def from_dict(cls, d: dict) -> "Term":
        try:
            kind = d["kind"]
            if kind == "poly":
                return cls("poly", coeffs=tuple(float(x) for x in d["coeffs"]))
            if kind == "lnsectan":
                return cls("lnsectan", amp=float(d["amp"]))
            return cls(kind, amp=float(d["amp"]), omega=float(d.get("omega", 1.0)),
                       phase=float(d.get("phase", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise CurveSpecError(f"malformed term {d!r}: {exc}") from exc


def poly(*coeffs: float) -> Term:
    return Term("poly", coeffs=tuple(float(c) for c in coeffs))


def sin(amp: float, omega: float = 1.0, phase: float = 0.0) -> Term:
    return Term("sin", amp=amp, omega=omega, phase=phase)


def cos(amp: float, omega: float = 1.0, phase: float = 0.0) -> Term:
    return Term("cos", amp=amp, omega=omega, phase=phase)


def tsin(amp: float, omega: float = 1.0, phase: float = 0.0) -> Term:
    return Term("tsin", amp=amp, omega=omega, phase=phase)


def tcos(amp: float, omega: float = 1.0, phase: float = 0.0) -> Term:
    return Term("tcos", amp=amp, omega=omega, phase=phase)


def lnsectan(amp: float) -> Term:
    return Term("lnsectan", amp=amp)


@dataclass(frozen=True)
class CurveSpec:
    coords: tuple[tuple[Term, ...], tuple[Term, ...], tuple[Term, ...]]
    name: str = "curve"
    theta_range: tuple[float, float] = (0.0, 2.0 * np.pi)
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.coords) != 3:
            raise CurveSpecError("a curve needs exactly three coordinates")

    @property
    def has_lnsectan(self) -> bool:
        return any(t.kind == "lnsectan" for c in self.coords for t in c)

    def derivs(self, theta, order: int = 1) -> list[np.ndarray]:
        """[C, C', C''][:order+1]; each an array of shape (..., 3)."""
        th = np.asarray(theta, dtype=float)
        out = [np.zeros(th.shape + (3,)) for _ in range(order + 1)]
        for i, terms in enumerate(self.coords):
            for t in terms:
                for j, val in enumerate(t.derivs(th, order)):
                    out[j][..., i] += val
        return out

    def value(self, theta) -> np.ndarray:
        return self.derivs(theta, 0)[0]

    def derivative(self, theta) -> np.ndarray:
        return self.derivs(theta, 1)[1]

    def to_json(self) -> str:
        return json.dumps({"coords": [{"terms": [t.to_dict() for t in c]} for c in self.coords]}, indent=2)

    @classmethod
    def from_json(cls, text: str, name: str = "curve") -> "CurveSpec":
        try:
            data = json.loads(text)
            coords = tuple(tuple(Term.from_dict(t) for t in c["terms"]) for c in data["coords"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CurveSpecError(f"invalid curve spec: {exc}") from exc
        rng = data.get("theta_range")
        if rng is not None:
            return cls(coords, name=name, theta_range=(float(rng[0]), float(rng[1])))
        return cls(coords, name=name)

    @classmethod
    def load(cls, path) -> "CurveSpec":
        p = Path(path)
        return cls.from_json(p.read_text(), name=p.stem)


def make_curve(x, y, z, name="curve", theta_range=(0.0, 2.0 * np.pi), **params) -> CurveSpec:
    return CurveSpec((tuple(x), tuple(y), tuple(z)), name=name, theta_range=theta_range, params=params)
