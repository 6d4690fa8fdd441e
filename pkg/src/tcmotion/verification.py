"""Empirical checks shared by all planners.

* :func:`check_trajectory` tests the endpoints of a planned motion and its
  collision-freeness, by sampling on a uniform grid plus an exact minimum on
  every piece where one is available in closed form.
* :func:`check_partition` histograms region labels over random pairs.
* :func:`continuity_probe` measures how far a plan moves under small
  perturbations that keep the region label fixed.

Each planner is wrapped in a *harness* that knows how to sample generic pairs
(well away from region boundaries), build one witness pair per label and
perturb a pair without leaving its region.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .euclid import EuclidPlanner
from .euclid_even import EvenEuclidPlanner, direction
from .geometry import (
    DEFAULT_TOLERANCES,
    ReversedPiece,
    Tolerances,
    Trajectory,
    as_points,
    diameter,
)
from .sphere import SpherePlanner
from .tree import Tree, TreePhase
from .tree_planner import TreePlanner

ENDPOINT_TOL = 1e-9


@dataclass
class CheckReport:
    endpoint_error: float
    min_separation: float
    samples: int
    region: object = None
    passed: bool = False
    threshold: float = 0.0
    exact_min_separation: float = math.inf
    sphere_drift: float = 0.0

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        for k, v in out.items():
            if isinstance(v, float) and math.isinf(v):
                out[k] = None
        return out


# --------------------------------------------------------------------------
# closed-form separation minima
# --------------------------------------------------------------------------


def _unwrap(piece):
    return piece.inner if isinstance(piece, ReversedPiece) else piece


def linear_piece_min_separation(start: np.ndarray, end: np.ndarray) -> float:
    """Exact min over s in [0, 1] and i < j of |p_i(s) - p_j(s)| for straight-line motion."""
    n = start.shape[0]
    if n < 2:
        return math.inf
    iu, ju = np.triu_indices(n, k=1)
    d0 = start[iu] - start[ju]
    v = (end[iu] - end[ju]) - d0
    vv = np.einsum("ij,ij->i", v, v)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(vv > 0, -np.einsum("ij,ij->i", d0, v) / vv, 0.0)
    s = np.clip(s, 0.0, 1.0)
    closest = d0 + s[:, None] * v
    return float(np.sqrt(np.einsum("ij,ij->i", closest, closest)).min())


def tree_phase_min_separation(phase: TreePhase) -> Optional[float]:
    """Exact minimum distance during a tree phase, or None when no closed form applies.

    With a single mover on the geodesic [x, y] the distance from a fixed q is
    the Gromov product (d(q,x) + d(q,y) - d(x,y)) / 2.  When every point stays
    on one common edge the pairwise gaps are affine in time.
    """
    tree = phase.tree
    a, b = phase.start, phase.end
    n = a.shape[0]
    if n < 2:
        return math.inf
    movers = phase.movers
    if len(movers) <= 1:
        if not movers:
            return tree.min_separation(a)
        i = movers[0]
        rest = [j for j in range(n) if j != i]
        q = a[rest]
        dqx = tree.distance(q[:, 0], q[:, 1], a[i, 0], a[i, 1])
        dqy = tree.distance(q[:, 0], q[:, 1], b[i, 0], b[i, 1])
        dxy = tree.distance(a[i, 0], a[i, 1], b[i, 0], b[i, 1])
        gromov = 0.5 * (dqx + dqy - dxy)
        still = tree.min_separation(q) if len(rest) >= 2 else math.inf
        return float(min(gromov.min(), still))
    edge = a[0, 0]
    if np.all(a[:, 0] == edge) and np.all(b[:, 0] == edge):
        ga = a[:, 1][:, None] - a[:, 1][None, :]
        gb = b[:, 1][:, None] - b[:, 1][None, :]
        iu = np.triu_indices(n, k=1)
        ga, gb = ga[iu], gb[iu]
        crossing = np.sign(ga) != np.sign(gb)
        if np.any(crossing):
            return 0.0
        return float(np.minimum(np.abs(ga), np.abs(gb)).min())
    return None


# --------------------------------------------------------------------------
# trajectory checks
# --------------------------------------------------------------------------


def _pairwise_min(states: np.ndarray) -> float:
    n = states.shape[1]
    if n < 2:
        return math.inf
    iu, ju = np.triu_indices(n, k=1)
    diff = states[:, iu, :] - states[:, ju, :]
    return float(np.sqrt(np.einsum("tkd,tkd->tk", diff, diff)).min())


def check_trajectory(traj: Trajectory, A, B, samples: int = 1000, *, region=None, tree: Tree = None,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> CheckReport:
    """Endpoint and collision check of a planned trajectory.

    ``A`` and ``B`` are point arrays, or edge-coordinate states when ``tree``
    is given.  One-point states are treated as sphere motions: instead of a
    separation the report carries the largest deviation from the unit sphere.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    ts = np.linspace(0.0, 1.0, samples)
    if tree is not None:
        return _check_tree(traj, np.asarray(A, float), np.asarray(B, float), ts, region, tree, tol)
    a = as_points(A)
    b = as_points(B)
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    err = max(float(np.abs(traj.raw(0.0) - a).max()), float(np.abs(traj.raw(1.0) - b).max())) / scale
    states = traj.sample(ts)
    if a.shape[0] == 1:
        drift = float(np.abs(np.linalg.norm(states[:, 0, :], axis=1) - 1.0).max())
        ok = err <= ENDPOINT_TOL and drift <= ENDPOINT_TOL
        return CheckReport(err, math.inf, samples, region, ok, 0.0, math.inf, drift)
    sampled = _pairwise_min(states)
    exact = math.inf
    for piece in traj.pieces:
        if _unwrap(piece).kind == "linear":
            exact = min(exact, linear_piece_min_separation(piece.start, piece.end))
        else:
            # rigid motions keep distances; arcs carry a single point
            exact = min(exact, _pairwise_min(piece.start[None]))
    threshold = tol.sep_tol * max(diameter(a), diameter(b))
    sep = min(sampled, exact)
    ok = err <= ENDPOINT_TOL and sep >= threshold
    return CheckReport(err, sep, samples, region, ok, threshold, exact)


def _check_tree(traj, a, b, ts, region, tree, tol) -> CheckReport:
    scale = max(1.0, tree.total_length)
    err = max(tree.state_distance(traj.raw(0.0), a), tree.state_distance(traj.raw(1.0), b)) / scale
    states = traj.sample(ts)
    sampled = tree.min_separation(states) if states.shape[1] >= 2 else math.inf
    exact = math.inf
    for piece in traj.pieces:
        phase = _unwrap(piece)
        value = tree_phase_min_separation(phase)
        if value is None:
            # no closed form: fall back to a dense grid on this phase
            value = tree.min_separation(phase.at_many(np.linspace(0.0, 1.0, 4001)))
        exact = min(exact, value)
    both = np.vstack([a, b])
    threshold = tol.sep_tol * (float(tree.pairwise(both).max()) if both.shape[0] >= 2 else 1.0)
    sep = min(sampled, exact)
    ok = err <= ENDPOINT_TOL and sep >= threshold
    return CheckReport(err, sep, len(ts), region, ok, threshold, exact)


# --------------------------------------------------------------------------
# harnesses
# --------------------------------------------------------------------------


def _cayley_rotation(dim: int, delta: float, rng) -> np.ndarray:
    k = rng.normal(size=(dim, dim)) * delta
    k = k - k.T
    eye = np.eye(dim)
    return np.linalg.solve(eye + k, eye - k)


def _cluster_values(rng, k: int, lo: float, hi: float, gap: float) -> np.ndarray:
    while True:
        vals = np.sort(rng.uniform(lo, hi, size=k))
        if k == 1 or np.diff(vals).min() >= gap:
            return vals


def _surjective_labels(rng, n: int, k: int, fixed: dict) -> np.ndarray:
    while True:
        lab = rng.integers(0, k, size=n)
        for i, c in fixed.items():
            lab[i] = c
        if len(set(lab.tolist())) == k:
            return lab


class EuclidHarness:
    name = "euclid"

    def __init__(self, dim: int, n: int, tol: Tolerances = DEFAULT_TOLERANCES, margin: float = 0.05):
        self.planner = EuclidPlanner(dim, n, tol)
        self.dim, self.n, self.tol, self.margin = dim, n, tol, margin

    @property
    def labels(self):
        return self.planner.labels

    def region(self, A, B):
        return self.planner.region_index(A, B)

    def plan(self, A, B):
        return self.planner.plan(A, B)

    def check(self, plan, A, B, samples=1000) -> CheckReport:
        return check_trajectory(plan.trajectory, A, B, samples, region=plan.region, tol=self.tol)

    def sample_config(self, rng, cp: Optional[int] = None) -> np.ndarray:
        n, d = self.n, self.dim
        k = int(rng.integers(1, n + 1)) if cp is None else cp
        xs = _cluster_values(rng, k, 0.0, 1.0, 2 * self.margin)
        lab = _surjective_labels(rng, n, k, {})
        while True:
            rest = rng.uniform(-1.0, 1.0, size=(n, d - 1))
            pts = np.column_stack([xs[lab], rest])
            if diameter(pts) > 0 and _pairwise_min(pts[None]) >= self.margin:
                break
        scale = rng.uniform(0.5, 5.0)
        shift = rng.uniform(-3.0, 3.0, size=d)
        return pts * scale + shift

    def sample_pair(self, rng):
        return self.sample_config(rng), self.sample_config(rng)

    def _stratum(self, i: int) -> np.ndarray:
        pts = np.zeros((self.n, self.dim))
        pts[:, 0] = np.minimum(np.arange(self.n), i - 1)
        pts[:, 1] = np.arange(self.n)
        return pts

    def witnesses(self) -> dict:
        out = {}
        for k in self.labels:
            i = max(1, k - self.n)
            out[k] = (self._stratum(i), self._stratum(k - i))
        return out

    def _perturb_config(self, C, delta, rng):
        pts = np.array(C, dtype=float)
        x = pts[:, 0]
        shifts = {}
        for v in np.unique(x):
            shifts[v] = rng.uniform(-delta, delta)
        pts[:, 0] = x + np.array([shifts[v] for v in x])
        pts[:, 1:] += rng.uniform(-delta, delta, size=pts[:, 1:].shape)
        return pts

    def perturb_pair(self, A, B, delta, rng):
        return self._perturb_config(A, delta, rng), self._perturb_config(B, delta, rng)

    def deviation(self, p1, p2, ts) -> float:
        return float(np.abs(p1.trajectory.sample(ts) - p2.trajectory.sample(ts)).max())

    def discontinuity_witness(self):
        n, d = self.n, self.dim
        A = np.zeros((n, d))
        A[:, 1] = np.arange(n)
        A2 = A.copy()
        A2[0, 0] = 1e-6
        B = np.zeros((n, d))
        B[:, 0] = np.arange(n) + 2.0
        return (A, B), (A2, B)


class EvenEuclidHarness(EuclidHarness):
    name = "euclid-even"

    def __init__(self, dim: int, n: int, tol: Tolerances = DEFAULT_TOLERANCES, margin: float = 0.05):
        self.planner = EvenEuclidPlanner(dim, n, tol)
        self.dim, self.n, self.tol, self.margin = dim, n, tol, margin

    def _frame(self, e, rng):
        """Orthonormal basis of the complement of ``e`` (columns)."""
        m = np.column_stack([e, rng.normal(size=(self.dim, self.dim - 1))])
        q, _ = np.linalg.qr(m)
        return q[:, 1:]

    def _build(self, rng, e, k: int) -> np.ndarray:
        n = self.n
        xs = _cluster_values(rng, k, -1.0, 1.0, 2 * self.margin)
        a, b = sorted(rng.choice(k, size=2, replace=False))
        lab = _surjective_labels(rng, n, k, {0: a, 1: b})
        perp = self._frame(e, rng)
        while True:
            off = rng.uniform(-1.0, 1.0, size=(n, self.dim - 1)) @ perp.T
            off[:2] = 0.0
            pts = (xs[lab] - xs[a])[:, None] * e + off
            if _pairwise_min(pts[None]) >= self.margin:
                break
        return pts * rng.uniform(0.5, 5.0) + rng.uniform(-3.0, 3.0, size=self.dim)

    def _random_dir(self, rng):
        v = rng.normal(size=self.dim)
        return v / np.linalg.norm(v)

    def sample_pair(self, rng):
        n = self.n
        e_a = self._random_dir(rng)
        A = self._build(rng, e_a, int(rng.integers(2, n + 1)))
        if rng.random() < 0.5:
            e_b = -direction(A)
        else:
            while True:
                e_b = self._random_dir(rng)
                if np.linalg.norm(direction(A) + e_b) >= self.margin:
                    break
        B = self._build(rng, e_b, int(rng.integers(2, n + 1)))
        return A, B

    def _stratum_dir(self, i: int, e: np.ndarray) -> np.ndarray:
        f = np.zeros(self.dim)
        f[1] = 1.0
        pts = np.zeros((self.n, self.dim))
        x = np.minimum(np.arange(self.n), i - 1).astype(float)
        x[1] = 1.0
        pts += x[:, None] * e
        pts += np.where(np.arange(self.n) >= 2, np.arange(self.n), 0)[:, None] * f
        return pts

    def witnesses(self) -> dict:
        e = np.eye(self.dim)[0]
        out = {}
        for k in self.labels:
            if k == 3:
                out[k] = (self._stratum_dir(2, e), self._stratum_dir(2, -e))
                continue
            i = max(2, k - self.n)
            out[k] = (self._stratum_dir(i, e), self._stratum_dir(k - i, e))
        return out

    def _perturb_config(self, C, delta, rng):
        pts = np.asarray(C, dtype=float)
        z1 = pts[0]
        e = direction(pts)
        x = (pts - z1) @ e
        perp = pts - z1 - np.outer(x, e)
        order = np.argsort(x)
        tol = self.tol.proj_eq_tol * diameter(pts)
        cluster = np.zeros(self.n, dtype=int)
        cluster[order[1:]] = np.cumsum(np.diff(x[order]) >= tol)
        shift = rng.uniform(-delta, delta, size=cluster.max() + 1)
        means = np.array([x[cluster == c].mean() for c in range(cluster.max() + 1)])
        x2 = means[cluster] + shift[cluster]
        x2 -= x2[0]
        noise = rng.uniform(-delta, delta, size=perp.shape)
        noise -= np.outer(noise @ e, e)
        perp2 = perp + noise
        perp2[:2] = 0.0
        return z1 + rng.uniform(-delta, delta, size=self.dim) + np.outer(x2, e) + perp2

    def perturb_pair(self, A, B, delta, rng):
        R = _cayley_rotation(self.dim, delta, rng)
        return self._perturb_config(A, delta, rng) @ R.T, self._perturb_config(B, delta, rng) @ R.T

    def discontinuity_witness(self):
        e = np.eye(self.dim)[0]
        A = self._stratum_dir(self.n, e)
        B = self._stratum_dir(self.n, -e)
        B2 = B.copy()
        B2[1, 1] += 1e-6
        return (A, B), (A, B2)


class SphereHarness:
    name = "sphere"

    def __init__(self, sphere_dim: int, tol: Tolerances = DEFAULT_TOLERANCES, margin: float = 0.05):
        self.planner = SpherePlanner(sphere_dim, tolerances=tol)
        self.sphere_dim, self.tol, self.margin = sphere_dim, tol, margin
        self.dim = sphere_dim + 1
        self.n = 1

    @property
    def labels(self):
        return self.planner.labels

    def region(self, A, B):
        return self.planner.region_index(A, B)

    def plan(self, A, B):
        return self.planner.plan(A, B)

    def check(self, plan, A, B, samples=1000) -> CheckReport:
        return check_trajectory(plan.trajectory, np.atleast_2d(A), np.atleast_2d(B), samples,
                                region=plan.region, tol=self.tol)

    def _unit(self, rng):
        v = rng.normal(size=self.dim)
        return v / np.linalg.norm(v)

    def sample_pair(self, rng):
        pole = self.planner.pole
        while True:
            A = self._unit(rng)
            if np.linalg.norm(A - pole) >= 2 * self.margin:
                break
        if rng.random() < 0.3:
            return A, -A
        while True:
            B = self._unit(rng)
            if np.linalg.norm(A + B) >= self.margin:
                return A, B

    def witnesses(self) -> dict:
        e = np.eye(self.dim)
        out = {"F1": (e[0], e[1]), "F2": (e[0], -e[0])}
        if self.planner.even:
            out["F3"] = (self.planner.pole, -self.planner.pole)
        return out

    def perturb_pair(self, A, B, delta, rng):
        region = self.region(A, B)
        if region == "F3":
            # the region is a single point
            return np.array(A, float), np.array(B, float)
        A2 = A + rng.uniform(-delta, delta, size=self.dim)
        A2 /= np.linalg.norm(A2)
        if region == "F2":
            return A2, -A2
        B2 = B + rng.uniform(-delta, delta, size=self.dim)
        return A2, B2 / np.linalg.norm(B2)

    def deviation(self, p1, p2, ts) -> float:
        return float(np.abs(p1.trajectory.sample(ts) - p2.trajectory.sample(ts)).max())

    def discontinuity_witness(self):
        A = np.eye(self.dim)[0]
        v = self.planner.tangent(A)
        B2 = -A - 1e-6 * v
        return (A, -A), (A, B2 / np.linalg.norm(B2))


class TreeHarness:
    name = "tree"

    def __init__(self, tree: Tree, n: int, tol: Tolerances = DEFAULT_TOLERANCES, margin: float = 0.05,
                 vertex_prob: float = 0.15):
        self.tree = tree
        self.planner = TreePlanner(tree, n, tol)
        self.n, self.tol, self.margin, self.vertex_prob = n, tol, margin, vertex_prob
        self._edges = [c for c in tree.bfs_order if c != tree.root_idx]
        self._essential = [i for i in range(len(tree.vertices)) if tree.degree[i] >= 3]

    @property
    def labels(self):
        return self.planner.labels

    def region(self, A, B):
        return self.planner.region_index(A, B)

    def plan(self, A, B):
        return self.planner.plan(A, B)

    def check(self, plan, A, B, samples=1000) -> CheckReport:
        a = self.planner._state(A)
        b = self.planner._state(B)
        return check_trajectory(plan.trajectory, a, b, samples, region=plan.region, tree=self.tree, tol=self.tol)

    def sample_config(self, rng) -> np.ndarray:
        t = self.tree
        while True:
            st = np.empty((self.n, 2))
            free = list(self._essential)
            rng.shuffle(free)
            for i in range(self.n):
                if free and rng.random() < self.vertex_prob:
                    v = free.pop()
                    st[i] = (v, t.length[v])
                else:
                    c = self._edges[int(rng.integers(len(self._edges)))]
                    st[i] = (c, t.length[c] * rng.uniform(self.margin, 1.0 - self.margin))
            if self.n < 2 or t.min_separation(st) >= self.margin * float(t.length[self._edges].min()):
                return st

    def sample_pair(self, rng):
        return self.sample_config(rng), self.sample_config(rng)

    def _generic(self, count: int) -> list:
        t = self.tree
        spots = [(c, t.length[c] * s) for s in (0.5, 0.25, 0.75) for c in self._edges]
        return spots[:count]

    def _with_vertices(self, i: int) -> np.ndarray:
        t = self.tree
        if i > min(self.n, len(self._essential)):
            raise ValueError(f"cannot place {i} points at essential vertices")
        pts = [(v, t.length[v]) for v in self._essential[:i]]
        pts += self._generic(self.n - i)
        return np.array(pts, dtype=float)

    def witnesses(self) -> dict:
        m = self.planner.m
        out = {}
        for k in self.labels:
            i = min(k, m, self.n)
            if k - i > min(m, self.n):
                continue
            out[k] = (self._with_vertices(i), self._with_vertices(k - i))
        return out

    def perturb_pair(self, A, B, delta, rng):
        return self._perturb(A, delta, rng), self._perturb(B, delta, rng)

    def _perturb(self, st, delta, rng):
        t = self.tree
        out = np.array(st, dtype=float)
        c = out[:, 0].astype(int)
        interior = (out[:, 1] > 0) & (out[:, 1] < t.length[c])
        out[interior, 1] += rng.uniform(-delta, delta, size=int(interior.sum()))
        return out

    def deviation(self, p1, p2, ts) -> float:
        return self.tree.state_distance(p1.trajectory.sample(ts), p2.trajectory.sample(ts))

    def discontinuity_witness(self):
        """Point z at the first essential vertex, pushed into two different branches."""
        t = self.tree
        top = self.planner._top_vertex()
        b1, b2 = t.children[top][:2]
        x = (b1, 0.5 * t.length[b1])
        rest = [p for p in self._generic(self.n + 4) if p[0] not in (b1, b2)][: self.n - 2]
        A = np.array([x, (b1, 1e-6)] + rest, dtype=float)
        A2 = np.array([x, (b2, 1e-6)] + rest, dtype=float)
        B = np.array(self._generic(self.n), dtype=float)
        return (A, B), (A2, B)


# --------------------------------------------------------------------------
# drivers
# --------------------------------------------------------------------------


def check_partition(harness, N: int = 1000, rng=None) -> dict:
    """Histogram of region labels over ``N`` random pairs plus one witness per label."""
    rng = np.random.default_rng(rng)
    hist = Counter(harness.region(*harness.sample_pair(rng)) for _ in range(N))
    witness_labels = {k: harness.region(*pair) for k, pair in harness.witnesses().items()}
    declared = list(harness.labels)
    hit = set(hist) | set(witness_labels.values())
    return {
        "histogram": dict(sorted(hist.items(), key=lambda kv: str(kv[0]))),
        "declared": declared,
        "witnesses_ok": all(k == v for k, v in witness_labels.items()),
        "outside": sorted((set(hist) - set(declared)), key=str),
        "covered": set(declared) <= hit,
    }


@dataclass
class ProbeResult:
    max_deviation: float
    deviations: list = field(default_factory=list)
    discarded: int = 0

    def fraction_within(self, bound: float) -> float:
        if not self.deviations:
            return 0.0
        return float(np.mean(np.asarray(self.deviations) <= bound))


def continuity_probe(harness, base, delta: float = 1e-6, trials: int = 10, rng=None, samples: int = 1000) -> ProbeResult:
    """Sup-distance between the plan of ``base`` and plans of region-preserving perturbations."""
    rng = np.random.default_rng(rng)
    ts = np.linspace(0.0, 1.0, samples)
    A, B = base
    region = harness.region(A, B)
    ref = harness.plan(A, B)
    result = ProbeResult(0.0)
    for _ in range(trials):
        if delta == 0:
            A2, B2 = A, B
        else:
            A2, B2 = harness.perturb_pair(A, B, delta, rng)
        if harness.region(A2, B2) != region:
            result.discarded += 1
            continue
        dev = harness.deviation(ref, harness.plan(A2, B2), ts)
        result.deviations.append(dev)
        result.max_deviation = max(result.max_deviation, dev)
    return result


def witness_deviation(harness, samples: int = 1000) -> float:
    (A, B), (A2, B2) = harness.discontinuity_witness()
    ts = np.linspace(0.0, 1.0, samples)
    return harness.deviation(harness.plan(A, B), harness.plan(A2, B2), ts)


def run_verification(harness, trials: int = 1000, samples: int = 1000, rng=None) -> dict:
    """Plan and check ``trials`` random pairs; summary suitable for JSON output."""
    rng = np.random.default_rng(rng)
    worst_err, worst_sep_ratio, failures = 0.0, math.inf, 0
    regions = Counter()
    for _ in range(trials):
        A, B = harness.sample_pair(rng)
        plan = harness.plan(A, B)
        rep = harness.check(plan, A, B, samples)
        regions[str(plan.region)] += 1
        worst_err = max(worst_err, rep.endpoint_error)
        if rep.threshold > 0:
            worst_sep_ratio = min(worst_sep_ratio, rep.min_separation / rep.threshold)
        failures += not rep.passed
    return {
        "planner": harness.name,
        "trials": trials,
        "samples": samples,
        "failures": failures,
        "max_endpoint_error": worst_err,
        "min_separation_over_threshold": None if math.isinf(worst_sep_ratio) else worst_sep_ratio,
        "regions": dict(sorted(regions.items())),
        "pass": failures == 0,
    }

