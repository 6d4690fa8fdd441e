"""Configurations of distinct points and piecewise-analytic trajectories.

A trajectory is a list of primitive pieces, each a closed-form map from a
local parameter ``s`` in [0, 1] to a raw state array, plus the breakpoints
that place the pieces inside the global time interval [0, 1].  Pieces store
their endpoints explicitly so that evaluating at a breakpoint returns the
stored array bit-for-bit.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the planners.

    ``proj_eq_tol`` and ``sep_tol`` are relative: they are multiplied by the
    diameter of the configuration(s) at hand.  ``antipodal_tol`` and
    ``junction_tol`` are absolute (unit vectors / max-norm gaps).
    """

    proj_eq_tol: float = 1e-9
    antipodal_tol: float = 1e-9
    sep_tol: float = 1e-6
    junction_tol: float = 1e-9

    def __post_init__(self):
        for name in ("proj_eq_tol", "antipodal_tol", "sep_tol", "junction_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


class Configuration:
    """An ordered tuple of ``n`` points in R^d (d >= 2).

    The point array is copied and frozen on construction.  ``check=False``
    skips the distinctness test; trajectories use it so that verification
    can still evaluate deliberately colliding paths.
    """

    __slots__ = ("points",)

    def __init__(self, points, *, check: bool = True):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-d array of shape (n, d), got shape {pts.shape}")
        n, d = pts.shape
        if n < 1:
            raise ValueError("a configuration needs at least one point")
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        if check and n >= 2 and not min_separation(pts) > 0:
            raise ValueError("configuration points must be pairwise distinct")
        pts.flags.writeable = False
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def diameter(self) -> float:
        return diameter(self.points)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    __hash__ = None

    def __repr__(self):
        return f"Configuration(n={self.n}, dim={self.dim}, points={self.points.tolist()})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        try:
            dim = int(obj["dim"])
            points = obj["points"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"configuration JSON needs 'dim' and 'points': {exc}") from None
        conf = cls(points)
        if conf.dim != dim:
            raise ValueError(f"declared dim {dim} does not match point length {conf.dim}")
        return conf


def as_points(C) -> np.ndarray:
    if isinstance(C, Configuration):
        return C.points
    return np.asarray(C, dtype=float)


def diameter(C) -> float:
    pts = as_points(C)
    if pts.shape[0] < 2:
        return 0.0
    return float(_pairwise_distances(pts).max())


def min_separation(C) -> float:
    """Smallest pairwise Euclidean distance; ``inf`` for fewer than two points."""
    pts = as_points(C)
    n = pts.shape[0]
    if n < 2:
        return math.inf
    dist = _pairwise_distances(pts)
    iu = np.triu_indices(n, k=1)
    return float(dist[iu].min())


# --------------------------------------------------------------------------
# primitive pieces
# --------------------------------------------------------------------------


class LinearPiece:
    """Straight-line interpolation ``(1 - s) * start + s * end`` of every point."""

    kind = "linear"

    def __init__(self, start: np.ndarray, end: np.ndarray):
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        if start.shape != end.shape:
            raise ValueError(f"shape mismatch: {start.shape} vs {end.shape}")
        self.start = start
        self.end = end

    def at(self, s: float) -> np.ndarray:
        if s <= 0.0:
            return self.start
        if s >= 1.0:
            return self.end
        return (1.0 - s) * self.start + s * self.end

    def at_many(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)[:, None, None]
        return (1.0 - s) * self.start + s * self.end


class RotationPiece:
    """Rigid rotation about ``pivot`` in the oriented plane span{u, w}.

    ``u`` and ``w`` must be orthonormal.  The rotation is the identity on the
    orthogonal complement of the plane.
    """

    kind = "rigid"

    def __init__(self, start, pivot, u, w, angle: float):
        self.start = np.asarray(start, dtype=float)
        self.pivot = np.asarray(pivot, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.angle = float(angle)
        rel = self.start - self.pivot
        self._a = rel @ self.u
        self._b = rel @ self.w
        self._rel = rel
        self.end = self._rotate(np.array([self.angle]))[0]

    def _rotate(self, phi: np.ndarray) -> np.ndarray:
        c = (np.cos(phi) - 1.0)[:, None, None]
        s = np.sin(phi)[:, None, None]
        in_plane = self._a[:, None] * self.u + self._b[:, None] * self.w
        turned = self._a[:, None] * self.w - self._b[:, None] * self.u
        return self.pivot + self._rel + c * in_plane + s * turned

    def at(self, s: float) -> np.ndarray:
        if s <= 0.0:
            return self.start
        if s >= 1.0:
            return self.end
        return self._rotate(np.array([s * self.angle]))[0]

    def at_many(self, s: np.ndarray) -> np.ndarray:
        out = self._rotate(np.asarray(s, dtype=float) * self.angle)
        out[np.asarray(s) >= 1.0] = self.end
        out[np.asarray(s) <= 0.0] = self.start
        return out


class ArcPiece:
    """Great-circle arc ``cos(s*phi) a + sin(s*phi) w`` of a single point.

    ``a`` and ``w`` are orthonormal; the state is a (1, d) array.
    """

    kind = "arc"

    def __init__(self, a, w, phi: float, end=None):
        self.a = np.asarray(a, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.phi = float(phi)
        self.start = self.a[None, :]
        if end is None:
            end = math.cos(self.phi) * self.a + math.sin(self.phi) * self.w
        self.end = np.asarray(end, dtype=float).reshape(1, -1)

    def at(self, s: float) -> np.ndarray:
        if s <= 0.0:
            return self.start
        if s >= 1.0:
            return self.end
        return self.at_many(np.array([s]))[0]

    def at_many(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = (np.cos(s * self.phi)[:, None] * self.a + np.sin(s * self.phi)[:, None] * self.w)[:, None, :]
        out[s >= 1.0] = self.end
        out[s <= 0.0] = self.start
        return out


class ReversedPiece:
    """The same piece traversed backwards."""

    def __init__(self, inner):
        self.inner = inner
        self.start = inner.end
        self.end = inner.start

    @property
    def kind(self) -> str:
        return self.inner.kind

    def at(self, s: float) -> np.ndarray:
        return self.inner.at(1.0 - s)

    def at_many(self, s: np.ndarray) -> np.ndarray:
        return self.inner.at_many(1.0 - np.asarray(s, dtype=float))


def reverse_piece(piece):
    if isinstance(piece, ReversedPiece):
        return piece.inner
    return ReversedPiece(piece)


# --------------------------------------------------------------------------
# trajectories
# --------------------------------------------------------------------------


def _wrap_configuration(raw: np.ndarray) -> Configuration:
    return Configuration(raw, check=False)


class Trajectory:
    """Piecewise trajectory on [0, 1].

    ``wrap`` converts a raw state array into the public value returned by
    :meth:`evaluate` (a :class:`Configuration` by default).  ``metric`` is the
    distance used to check junctions when concatenating.
    """

    def __init__(
        self,
        pieces: Sequence,
        breaks: Optional[Sequence[float]] = None,
        *,
        wrap: Callable = _wrap_configuration,
        metric: Optional[Callable] = None,
    ):
        if not pieces:
            raise ValueError("a trajectory needs at least one piece")
        self.pieces = list(pieces)
        m = len(self.pieces)
        if breaks is None:
            breaks = [k / m for k in range(m)] + [1.0]
        breaks = [float(b) for b in breaks]
        if len(breaks) != m + 1 or breaks[0] != 0.0 or breaks[-1] != 1.0:
            raise ValueError("breaks must run from 0 to 1 with one more entry than pieces")
        if any(b1 <= b0 for b0, b1 in zip(breaks, breaks[1:])):
            raise ValueError("breaks must be strictly increasing")
        self.breaks = breaks
        self._breaks_arr = np.asarray(breaks)
        self.wrap = wrap
        self.metric = metric

    @property
    def start(self) -> np.ndarray:
        return self.pieces[0].start

    @property
    def end(self) -> np.ndarray:
        return self.pieces[-1].end

    def _locate(self, t: float):
        i = bisect.bisect_right(self.breaks, t) - 1
        i = min(max(i, 0), len(self.pieces) - 1)
        a, b = self.breaks[i], self.breaks[i + 1]
        s = (t - a) / (b - a)
        return i, min(max(s, 0.0), 1.0)

    def raw(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {t!r}")
        i, s = self._locate(t)
        return self.pieces[i].at(s)

    def evaluate(self, t: float):
        return self.wrap(self.raw(t))

    def __call__(self, t: float):
        return self.evaluate(t)

    def sample(self, ts) -> np.ndarray:
        """Raw states at every time in ``ts``, stacked along axis 0."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
            raise ValueError("sample times must lie in [0, 1]")
        idx = np.searchsorted(self._breaks_arr, ts, side="right") - 1
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        a = self._breaks_arr[idx]
        b = self._breaks_arr[idx + 1]
        s = np.clip((ts - a) / (b - a), 0.0, 1.0)
        out = np.empty((ts.size,) + self.start.shape, dtype=float)
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.pieces[i].at_many(s[mask])
        return out

    def piece_intervals(self):
        """Yield ``(piece, t_start, t_end)`` for every primitive piece."""
        for piece, a, b in zip(self.pieces, self.breaks, self.breaks[1:]):
            yield piece, a, b

    def reversed(self) -> "Trajectory":
        pieces = [reverse_piece(p) for p in reversed(self.pieces)]
        breaks = [1.0 - b for b in reversed(self.breaks)]
        breaks[0], breaks[-1] = 0.0, 1.0
        return Trajectory(pieces, breaks, wrap=self.wrap, metric=self.metric)

    def __repr__(self):
        return f"Trajectory({len(self.pieces)} pieces)"


def _default_gap(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    return float(np.abs(a - b).max(initial=0.0)) / scale


def concatenate(parts: Sequence[Trajectory], junction_tol: float = DEFAULT_TOLERANCES.junction_tol) -> Trajectory:
    """Join trajectories end to start, giving each part an equal share of [0, 1].

    The junction gap is measured with the first part's ``metric`` (tree
    distance for tree trajectories) or, by default, as a max-norm gap relative
    to ``max(1, |coordinates|)``.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to concatenate")
    if len(parts) == 1:
        return parts[0]
    metric = parts[0].metric
    for k, (left, right) in enumerate(zip(parts, parts[1:])):
        if left.end.shape != right.start.shape:
            raise ValueError(f"junction {k}: state shapes differ ({left.end.shape} vs {right.start.shape})")
        gap = metric(left.end, right.start) if metric is not None else _default_gap(left.end, right.start)
        if gap > junction_tol:
            raise ValueError(f"junction {k}: parts do not meet (gap {gap:.3e} > {junction_tol:.1e})")
    m = len(parts)
    pieces, breaks = [], [0.0]
    for k, part in enumerate(parts):
        pieces.extend(part.pieces)
        breaks.extend((k + b) / m for b in part.breaks[1:])
    breaks[-1] = 1.0
    return Trajectory(pieces, breaks, wrap=parts[0].wrap, metric=metric)


def evaluate(traj: Trajectory, t: float):
    return traj.evaluate(t)


def constant(C) -> Trajectory:
    pts = as_points(C)
    return Trajectory([LinearPiece(pts, pts)])


def linear_move(C, C2) -> Trajectory:
    """Move every point along the segment from its position in ``C`` to ``C2``."""
    a = as_points(C)
    b = as_points(C2)
    if a.shape != b.shape:
        raise ValueError(f"configurations differ in size or dimension: {a.shape} vs {b.shape}")
    return Trajectory([LinearPiece(a, b)])


def sequence(states: Sequence[np.ndarray]) -> Trajectory:
    """Polygonal trajectory through ``states`` with equal time per leg."""
    pieces = [LinearPiece(a, b) for a, b in zip(states, states[1:])]
    return Trajectory(pieces)
