"""Group law, left-invariant frame and contact structure of H1.

Vectors are expressed either in Cartesian components (dx, dy, dz) or in the
left-invariant frame (e1, e2, T). The array helpers at the bottom work on
stacked (..., 3) arrays and are what the rest of the package uses.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NotHorizontal


class HPoint(NamedTuple):
    x: float
    y: float
    z: float


class CartVector(NamedTuple):
    dx: float
    dy: float
    dz: float


class FrameVector(NamedTuple):
    c1: float  # e1 component
    c2: float  # e2 component
    c0: float  # T component

    @property
    def is_horizontal(self) -> bool:
        return self.c0 == 0.0


IDENTITY = HPoint(0.0, 0.0, 0.0)


def group_mul(p: HPoint, q: HPoint) -> HPoint:
    return HPoint(p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[1] * q[0] - p[0] * q[1])


def group_inv(p: HPoint) -> HPoint:
    return HPoint(-p[0], -p[1], -p[2])


def frame_at(p: HPoint) -> tuple[CartVector, CartVector, CartVector]:
    """Cartesian components of e1, e2, T at p."""
    x, y, _ = p
    return CartVector(1.0, 0.0, y), CartVector(0.0, 1.0, -x), CartVector(0.0, 0.0, 1.0)


def contact_theta(p: HPoint, v: CartVector) -> float:
    return v[2] + p[0] * v[1] - p[1] * v[0]


def j_apply(v: FrameVector) -> FrameVector:
    if v[2] != 0.0:
        raise NotHorizontal(f"J is only defined on the contact plane, got T-component {v[2]!r}")
    return FrameVector(-v[1], v[0], 0.0)


def adapted_inner(v: FrameVector, w: FrameVector) -> float:
    return v[0] * w[0] + v[1] * w[1] + v[2] * w[2]


def cart_to_frame(p: HPoint, v: CartVector) -> FrameVector:
    return FrameVector(v[0], v[1], contact_theta(p, v))


def frame_to_cart(p: HPoint, w: FrameVector) -> CartVector:
    return CartVector(w[0], w[1], w[2] + p[1] * w[0] - p[0] * w[1])


def left_translation_differential(p: HPoint, v: CartVector) -> CartVector:
    """Pushforward of v under q -> p*q (independent of q)."""
    return CartVector(v[0], v[1], v[2] + p[1] * v[0] - p[0] * v[1])


# -- stacked-array versions ------------------------------------------------

def group_mul_arr(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = p + q
    out[..., 2] += p[..., 1] * q[..., 0] - p[..., 0] * q[..., 1]
    return out


def cart_to_frame_arr(p: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.array(v, dtype=float, copy=True)
    out[..., 2] = v[..., 2] + p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0]
    return out


def frame_to_cart_arr(p: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.array(w, dtype=float, copy=True)
    out[..., 2] = w[..., 2] + p[..., 1] * w[..., 0] - p[..., 0] * w[..., 1]
    return out


def j_apply_arr(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    return out
