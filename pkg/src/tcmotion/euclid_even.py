"""Planner for F(R^d, n) with d even and 2n - 2 regions.

Instead of a fixed axis, each configuration carries its own oriented line
through its first two points.  Pairs whose directions are antipodal are
handled without a rotation, which is what saves one region compared with
:mod:`tcmotion.euclid`.  The even dimension is needed for a continuous
nowhere-vanishing choice of a vector perpendicular to the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .euclid import Plan, lift_move_drop as _lift_move_drop, projection_profile
from .geometry import (
    DEFAULT_TOLERANCES,
    LinearPiece,
    RotationPiece,
    Tolerances,
    Trajectory,
    as_points,
    concatenate,
    constant,
    diameter,
)

ALIGNED = "Aligned"
ANTIPODAL = "Antipodal"


@dataclass(frozen=True)
class PairClass:
    kind: str
    i: int
    j: int

    @property
    def region(self) -> int:
        return self.i + self.j - (1 if self.kind == ANTIPODAL else 0)


def direction(C) -> np.ndarray:
    """Unit vector from the first point to the second."""
    pts = as_points(C)
    if pts.shape[0] < 2:
        raise ValueError("direction needs at least two points")
    v = pts[1] - pts[0]
    return v / np.linalg.norm(v)


def _line_coordinates(pts: np.ndarray, e: np.ndarray) -> np.ndarray:
    return (pts - pts[0]) @ e


def cp_dirline(C, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    pts = as_points(C)
    x = _line_coordinates(pts, direction(pts))
    return projection_profile(x, tol.proj_eq_tol * diameter(pts))[0]


def perp_field(u, d=None) -> np.ndarray:
    """Unit vector perpendicular to ``u`` via (u1, u2, ...) -> (-u2, u1, ...)."""
    u = np.asarray(u, dtype=float)
    d = u.shape[0] if d is None else d
    if d % 2:
        raise ValueError(f"no continuous perpendicular field exists in odd dimension {d}")
    if u.shape[0] != d:
        raise ValueError(f"vector has length {u.shape[0]}, expected {d}")
    out = np.empty_like(u)
    out[0::2] = -u[1::2]
    out[1::2] = u[0::2]
    return out / np.linalg.norm(out)


def colinearize(C, tol: Tolerances = DEFAULT_TOLERANCES) -> Trajectory:
    """Desingularize along the configuration's own line, then project onto it.

    The first two points keep defining the same oriented line throughout.
    """
    pts = as_points(C)
    n = pts.shape[0]
    e = direction(pts)
    x = _line_coordinates(pts, e)
    count, gap = projection_profile(x, tol.proj_eq_tol * diameter(pts))
    eps = gap / n
    shifted = pts + np.arange(n)[:, None] * eps * e
    x_shifted = _line_coordinates(shifted, e)
    on_line = pts[0] + np.outer(x_shifted, e)
    return Trajectory([LinearPiece(pts, shifted), LinearPiece(shifted, on_line)])


def rotate_align(C, target_dir, tol: Tolerances = DEFAULT_TOLERANCES, source_dir=None) -> Trajectory:
    """Rotate ``C`` rigidly about its first point so its direction becomes ``target_dir``.

    The rotation acts in span{e_C, target} along the shorter arc and fixes the
    orthogonal complement.
    """
    pts = as_points(C)
    e = direction(pts) if source_dir is None else np.asarray(source_dir, dtype=float)
    t = np.asarray(target_dir, dtype=float)
    if np.linalg.norm(e + t) < tol.antipodal_tol:
        raise ValueError("target direction is antipodal to the configuration direction")
    cos = float(e @ t)
    v = t - cos * e
    sin = float(np.linalg.norm(v))
    if sin < 1e-15 and cos > 0:
        return constant(pts)
    angle = math.atan2(sin, cos)
    return Trajectory([RotationPiece(pts, pts[0], e, v / sin, angle)])


def translate_align(C, point, target_dir, tol: float = 1e-9) -> Trajectory:
    """Translate ``C`` orthogonally to ``target_dir`` so its first point lands on the target line."""
    pts = as_points(C)
    u = np.asarray(target_dir, dtype=float)
    e = direction(pts)
    if min(np.linalg.norm(e - u), np.linalg.norm(e + u)) > tol:
        raise ValueError("configuration line is not parallel to the target line")
    offset = np.asarray(point, dtype=float) - pts[0]
    shift = offset - (offset @ u) * u
    return Trajectory([LinearPiece(pts, pts + shift)])


def lift_move_drop(C, C2, lift_dir, tol: float = 1e-9) -> Trajectory:
    """Shuffle between two configurations on one common line, lifting along ``lift_dir``."""
    a = as_points(C)
    b = as_points(C2)
    if a.shape != b.shape:
        raise ValueError(f"configurations differ in shape: {a.shape} vs {b.shape}")
    lift_dir = np.asarray(lift_dir, dtype=float)
    u = direction(b)
    base = b[0]
    both = np.vstack([a, b])
    rel = both - base
    off = rel - np.outer(rel @ u, u)
    scale = max(1.0, diameter(both))
    if np.abs(off).max() > tol * scale:
        raise ValueError("configurations are not collinear on a common line")
    if abs(lift_dir @ u) > tol:
        raise ValueError("lift direction is not perpendicular to the line")
    return _lift_move_drop(a, b, lift_dir, u)


class EvenEuclidPlanner:
    """Tame planner on F(R^d, n), d even, with regions labelled 3, ..., 2n."""

    def __init__(self, dim: int, n: int, tolerances: Tolerances = DEFAULT_TOLERANCES):
        if dim < 2 or dim % 2:
            raise ValueError(f"the even planner needs an even dimension >= 2, got {dim}")
        if n < 2:
            raise ValueError(f"need at least two points, got {n}")
        self.dim = dim
        self.n = n
        self.tol = tolerances

    @property
    def labels(self) -> list[int]:
        return list(range(3, 2 * self.n + 1))

    def _points(self, C) -> np.ndarray:
        pts = as_points(C)
        if pts.shape != (self.n, self.dim):
            raise ValueError(f"expected {self.n} points in R^{self.dim}, got shape {pts.shape}")
        return pts

    def classify(self, A, B) -> PairClass:
        a = self._points(A)
        b = self._points(B)
        i = cp_dirline(a, self.tol)
        j = cp_dirline(b, self.tol)
        antipodal = np.linalg.norm(direction(a) + direction(b)) < self.tol.antipodal_tol
        return PairClass(ANTIPODAL if antipodal else ALIGNED, i, j)

    def region_index(self, A, B) -> int:
        return self.classify(A, B).region

    def plan(self, A, B) -> Plan:
        a = self._points(A)
        b = self._points(B)
        cls = self.classify(a, b)
        e_a = direction(a)
        e_b = direction(b)
        col_a = colinearize(a, self.tol)
        col_b = colinearize(b, self.tol)
        # antipodal pairs only get the sub-tolerance correction onto -e_B
        target = e_b if cls.kind == ALIGNED else -e_b
        rot = rotate_align(col_a.end, target, self.tol, source_dir=e_a)
        shift = translate_align(rot.end, col_b.end[0], e_b)
        shuffle = lift_move_drop(shift.end, col_b.end, perp_field(e_b))
        traj = concatenate([col_a, rot, shift, shuffle, col_b.reversed()], self.tol.junction_tol)
        return Plan(traj, cls.region)
