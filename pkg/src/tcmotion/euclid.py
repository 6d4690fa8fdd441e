"""Collision-free planner for n labelled points in R^d with 2n - 1 regions.

Every query is reduced to the first coordinate axis: both configurations are
desingularized so that their projections onto the axis become distinct, then
dropped onto the axis, and the two on-axis configurations are joined by a
lift-move-drop shuffle in the plane of the first two coordinates.  The region
label of a pair is the sum of the projection cardinalities.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .geometry import (
    DEFAULT_TOLERANCES,
    Configuration,
    LinearPiece,
    Tolerances,
    Trajectory,
    as_points,
    concatenate,
    diameter,
)


class Plan(NamedTuple):
    trajectory: Trajectory
    region: object


def projection_profile(values: np.ndarray, tol: float) -> tuple[int, float]:
    """Number of distinct values (gaps below ``tol`` merge) and the smallest
    gap between distinct ones (``inf`` when there is a single cluster)."""
    gaps = np.diff(np.sort(values))
    distinct = gaps[gaps >= tol]
    count = 1 + int(distinct.size)
    return count, float(distinct.min()) if distinct.size else float("inf")


def lift_move_drop(C, C2, lift_dir, along) -> Trajectory:
    """Three-phase shuffle between two configurations lying on a common line.

    Point ``r`` is lifted by ``rank(r) * g`` along ``lift_dir`` where
    ``rank`` is its 1-based position along ``along`` in ``C``, slides to the
    lifted copy of its target and drops onto ``C2``.  Heights are distinct in
    the middle phase and line positions are distinct in the outer phases, so
    the motion never collides.
    """
    a = as_points(C)
    b = as_points(C2)
    n = a.shape[0]
    order = np.argsort(a @ along, kind="stable")
    rank = np.empty(n)
    rank[order] = np.arange(1, n + 1)
    g = max(1.0, diameter(np.vstack([a, b]))) / n
    offset = (rank * g)[:, None] * np.asarray(lift_dir, dtype=float)
    lifted = a + offset
    above = b + offset
    pieces = [LinearPiece(a, lifted), LinearPiece(lifted, above), LinearPiece(above, b)]
    return Trajectory(pieces)


class EuclidPlanner:
    """Tame planner on F(R^d, n) with regions labelled 2, ..., 2n.

    The reference line is the first coordinate axis (direction ``e``) and the
    lifting direction ``f`` is the second basis vector.
    """

    def __init__(self, dim: int, n: int, tolerances: Tolerances = DEFAULT_TOLERANCES):
        if dim < 2:
            raise ValueError(f"dimension must be >= 2, got {dim}")
        if n < 2:
            raise ValueError(f"need at least two points, got {n}")
        self.dim = dim
        self.n = n
        self.tol = tolerances
        self.e = np.eye(dim)[0]
        self.f = np.eye(dim)[1]

    @property
    def labels(self) -> list[int]:
        return list(range(2, 2 * self.n + 1))

    def _points(self, C) -> np.ndarray:
        pts = as_points(C)
        if pts.shape != (self.n, self.dim):
            raise ValueError(f"expected {self.n} points in R^{self.dim}, got shape {pts.shape}")
        return pts

    def _profile(self, pts):
        return projection_profile(pts @ self.e, self.tol.proj_eq_tol * diameter(pts))

    def cp(self, C) -> int:
        """Number of distinct projections of the points onto the reference line."""
        return self._profile(self._points(C))[0]

    def epsilon(self, C) -> float:
        count, gap = self._profile(self._points(C))
        if count == 1:
            return 1.0
        return gap / self.n

    def desingularize(self, C) -> Trajectory:
        """Shift the j-th point (0-based) by ``j * epsilon(C)`` along the line."""
        pts = self._points(C)
        shift = np.arange(self.n)[:, None] * self.epsilon(pts) * self.e
        end = pts + shift
        if self._profile(end)[0] != self.n:
            raise RuntimeError("desingularization failed to separate projections")
        return Trajectory([LinearPiece(pts, end)])

    def drop_to_line(self, C) -> Trajectory:
        pts = self._points(C)
        if self._profile(pts)[0] != self.n:
            raise ValueError("drop_to_line needs pairwise distinct projections; desingularize first")
        end = np.outer(pts @ self.e, self.e)
        return Trajectory([LinearPiece(pts, end)])

    def _check_on_line(self, pts, name):
        off = pts - np.outer(pts @ self.e, self.e)
        scale = max(1.0, float(np.abs(pts).max()))
        if np.abs(off).max() > 1e-12 * scale:
            raise ValueError(f"{name} does not lie on the reference line")

    def line_shuffle(self, C, C2) -> Trajectory:
        a = self._points(C)
        b = self._points(C2)
        self._check_on_line(a, "start configuration")
        self._check_on_line(b, "goal configuration")
        return lift_move_drop(a, b, self.f, self.e)

    def region_index(self, A, B) -> int:
        return self.cp(A) + self.cp(B)

    def plan(self, A, B) -> Plan:
        a = self._points(A)
        b = self._points(B)
        desing_a = self.desingularize(a)
        drop_a = self.drop_to_line(desing_a.end)
        desing_b = self.desingularize(b)
        drop_b = self.drop_to_line(desing_b.end)
        shuffle = self.line_shuffle(drop_a.end, drop_b.end)
        traj = concatenate(
            [desing_a, drop_a, shuffle, drop_b.reversed(), desing_b.reversed()],
            self.tol.junction_tol,
        )
        return Plan(traj, self.region_index(a, b))


def as_configuration(C) -> Configuration:
    return C if isinstance(C, Configuration) else Configuration(C)
