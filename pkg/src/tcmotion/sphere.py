"""Tame planner on the unit sphere S^n in R^(n+1).

Non-antipodal pairs follow the minimal geodesic.  Antipodal pairs follow the
half great circle leaving A in the direction of a tangent vector field; for
odd n the field has no zeros (two regions), for even n it vanishes at one
pole A0 and the pair (A0, -A0) gets its own fixed path (three regions).

Trajectories are trajectories of one-point configurations, so the generic
trajectory machinery applies unchanged.
"""

from __future__ import annotations

import math

import numpy as np

from .euclid import Plan
from .geometry import DEFAULT_TOLERANCES, ArcPiece, Tolerances, Trajectory, concatenate

F1, F2, F3 = "F1", "F2", "F3"


def as_sphere_point(x, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.shape[0] < 2:
        raise ValueError("sphere points need at least two coordinates")
    if not np.all(np.isfinite(p)) or abs(np.linalg.norm(p) - 1.0) > tol:
        raise ValueError(f"not a unit vector: |x| = {np.linalg.norm(p)!r}")
    return p


def slerp(A, B, tol: Tolerances = DEFAULT_TOLERANCES) -> Trajectory:
    """Constant-speed minimal great-circle arc from ``A`` to ``B``."""
    a = np.asarray(A, dtype=float)
    b = np.asarray(B, dtype=float)
    if np.linalg.norm(a + b) < tol.antipodal_tol:
        raise ValueError("the shortest arc between antipodal points is not unique")
    cos = float(a @ b)
    v = b - cos * a
    sin = float(np.linalg.norm(v))
    if sin == 0.0:
        return Trajectory([ArcPiece(a, np.zeros_like(a), 0.0, end=b)])
    return Trajectory([ArcPiece(a, v / sin, math.atan2(sin, cos), end=b)])


def tangent_field_odd(A) -> np.ndarray:
    """Nowhere-vanishing unit tangent field on odd-dimensional spheres."""
    a = np.asarray(A, dtype=float)
    if a.shape[0] % 2:
        raise ValueError(f"S^{a.shape[0] - 1} is even-dimensional; it has no nowhere-zero tangent field")
    v = np.empty_like(a)
    v[0::2] = -a[1::2]
    v[1::2] = a[0::2]
    return v / np.linalg.norm(v)


def default_pole(ambient_dim: int) -> np.ndarray:
    pole = np.zeros(ambient_dim)
    pole[-1] = 1.0
    return pole


def tangent_field_even(A, A0=None) -> np.ndarray:
    """Tangent field vanishing only at ``A0``.

    It is the push-forward of a constant field ``c`` (a unit vector orthogonal
    to ``A0``) under inverse stereographic projection from ``A0``; in closed
    form ``v(A) = (1 - <A, A0>) c + <A, c> (A0 - A)`` with ``|v(A)| = 1 - <A, A0>``.
    """
    a = np.asarray(A, dtype=float)
    pole = default_pole(a.shape[0]) if A0 is None else np.asarray(A0, dtype=float)
    c = _field_constant(pole)
    return (1.0 - a @ pole) * c + (a @ c) * (pole - a)


def _field_constant(pole: np.ndarray) -> np.ndarray:
    # first basis vector made orthogonal to the pole (falls back to the second)
    for k in range(pole.shape[0]):
        c = np.zeros_like(pole)
        c[k] = 1.0
        c = c - (c @ pole) * pole
        norm = np.linalg.norm(c)
        if norm > 0.5:
            return c / norm
    raise ValueError("degenerate pole")


def semicircle(A, v, tol: float = 1e-9) -> Trajectory:
    """Half great circle ``cos(pi t) A + sin(pi t) v`` from ``A`` to ``-A``."""
    a = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(a @ v) > tol or abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError("v must be a unit vector tangent to the sphere at A")
    return Trajectory([ArcPiece(a, v, math.pi, end=-a)])


class SpherePlanner:
    """Planner on S^n; ``sphere_dim`` is n, points live in R^(n+1)."""

    def __init__(self, sphere_dim: int, pole=None, tolerances: Tolerances = DEFAULT_TOLERANCES):
        if sphere_dim < 1:
            raise ValueError(f"sphere dimension must be >= 1, got {sphere_dim}")
        self.sphere_dim = sphere_dim
        self.ambient_dim = sphere_dim + 1
        self.tol = tolerances
        self.pole = default_pole(self.ambient_dim) if pole is None else as_sphere_point(pole)
        if self.pole.shape[0] != self.ambient_dim:
            raise ValueError("pole has the wrong dimension")
        self._fixed_dir = _field_constant(self.pole)

    @property
    def even(self) -> bool:
        return self.sphere_dim % 2 == 0

    @property
    def labels(self) -> list[str]:
        return [F1, F2, F3] if self.even else [F1, F2]

    def _point(self, x) -> np.ndarray:
        p = as_sphere_point(x)
        if p.shape[0] != self.ambient_dim:
            raise ValueError(f"expected a point of R^{self.ambient_dim}, got length {p.shape[0]}")
        return p

    def tangent(self, A) -> np.ndarray:
        a = np.asarray(A, dtype=float)
        if not self.even:
            return tangent_field_odd(a)
        v = tangent_field_even(a, self.pole)
        return v / np.linalg.norm(v)

    def region_index(self, A, B) -> str:
        a = self._point(A)
        b = self._point(B)
        if np.linalg.norm(a + b) >= self.tol.antipodal_tol:
            return F1
        if self.even and np.linalg.norm(a - self.pole) < self.tol.antipodal_tol:
            return F3
        return F2

    def plan(self, A, B) -> Plan:
        a = self._point(A)
        b = self._point(B)
        region = self.region_index(a, b)
        if region == F1:
            return Plan(slerp(a, b, self.tol), region)
        # the trailing arc absorbs the sub-tolerance gap between -A and B
        if region == F2:
            half = semicircle(a, self.tangent(a))
            traj = concatenate([half, slerp(-a, b, self.tol)], self.tol.junction_tol)
            return Plan(traj, region)
        half = semicircle(self.pole, self._fixed_dir)
        traj = concatenate(
            [slerp(a, self.pole, self.tol), half, slerp(-self.pole, b, self.tol)],
            self.tol.junction_tol,
        )
        return Plan(traj, region)
