"""Metric trees, points on them, and geodesic motions of point tuples.

Internally a point is stored in *edge coordinates* ``(c, h)``: ``c`` is the
index of the upper (away-from-root) endpoint of the edge holding the point and
``h`` in [0, len(c)] is the distance from the lower endpoint.  Every non-root
vertex owns exactly one such edge, so edges are indexed by their upper
vertex.  A tuple of n points is an ``(n, 2)`` float array (the index column
is an exact small integer).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence, Union

import numpy as np


@dataclass(frozen=True)
class Vertex:
    id: Hashable

    def to_json(self) -> dict:
        return {"type": "vertex", "id": self.id}


@dataclass(frozen=True)
class EdgePoint:
    """Interior point of ``edge`` at fraction ``s`` from the endpoint nearer the root."""

    edge: tuple
    s: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"edge coordinate must lie strictly inside (0, 1), got {self.s!r}")

    def to_json(self) -> dict:
        return {"type": "edge", "edge": list(self.edge), "s": self.s}


TreePoint = Union[Vertex, EdgePoint]


def point_from_json(obj) -> TreePoint:
    kind = obj.get("type")
    if kind == "vertex":
        return Vertex(obj["id"])
    if kind == "edge":
        return EdgePoint(tuple(obj["edge"]), float(obj["s"]))
    raise ValueError(f"unknown tree point type {kind!r}")


class Tree:
    """A finite metric tree with a univalent root vertex."""

    def __init__(self, vertices: Sequence[Hashable], edges: Sequence[Sequence[Hashable]], root: Hashable,
                 lengths: Optional[Sequence[float]] = None):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex ids must be unique")
        self.index = {v: i for i, v in enumerate(self.vertices)}
        V = len(self.vertices)
        edges = [tuple(e) for e in edges]
        if lengths is None:
            lengths = [1.0] * len(edges)
        if len(lengths) != len(edges):
            raise ValueError("one length per edge is required")
        if len(edges) != V - 1:
            raise ValueError(f"a tree on {V} vertices has {V - 1} edges, got {len(edges)}")
        adj = [[] for _ in range(V)]
        for (u, v), ln in zip(edges, lengths):
            if u not in self.index or v not in self.index:
                raise ValueError(f"edge {(u, v)} references an unknown vertex")
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not ln > 0:
                raise ValueError(f"edge lengths must be positive, got {ln!r}")
            iu, iv = self.index[u], self.index[v]
            adj[iu].append((iv, float(ln)))
            adj[iv].append((iu, float(ln)))
        if root not in self.index:
            raise ValueError(f"unknown root {root!r}")
        r = self.index[root]
        if len(adj[r]) != 1:
            raise ValueError("the root must be a univalent vertex")
        self._edges_in = list(zip(edges, lengths))
        self.root = root
        self.root_idx = r
        self.degree = np.array([len(a) for a in adj], dtype=int)

        parent = np.full(V, -1, dtype=int)
        length = np.zeros(V)
        depth = np.zeros(V)
        order = [r]
        seen = {r}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w, ln in adj[u]:
                if w in seen:
                    continue
                seen.add(w)
                parent[w] = u
                length[w] = ln
                depth[w] = depth[u] + ln
                order.append(w)
                queue.append(w)
        if len(seen) != V:
            raise ValueError("the graph is not connected")
        self.parent = parent
        self.length = length
        self.depth = depth
        self.bfs_order = order
        self.children = [sorted(w for w, _ in adj[u] if parent[w] == u) for u in range(V)]
        self.root_child = self.children[r][0]

        anc = np.zeros((V, V), dtype=bool)
        for u in range(V):
            w = u
            while w != -1:
                anc[w, u] = True
                w = parent[w]
        self.anc = anc
        lca = np.zeros((V, V), dtype=int)
        for u in range(V):
            for w in range(V):
                x = u
                while not anc[x, w]:
                    x = parent[x]
                lca[u, w] = x
        self.lca = lca
        self.lca_depth = depth[lca]

    # -- structure -------------------------------------------------------

    @property
    def essential_vertices(self) -> list:
        return [self.vertices[i] for i in range(len(self.vertices)) if self.degree[i] >= 3]

    @property
    def m(self) -> int:
        return int(np.count_nonzero(self.degree >= 3))

    @property
    def total_length(self) -> float:
        return float(self.length.sum())

    def edge_of(self, c: int) -> tuple:
        """Public id ``(lower, upper)`` of the edge owned by vertex index ``c``."""
        return (self.vertices[self.parent[c]], self.vertices[c])

    @property
    def edges(self) -> list[tuple]:
        return [self.edge_of(c) for c in self.bfs_order[1:]]

    @property
    def root_edge(self) -> tuple:
        return self.edge_of(self.root_child)

    def edge_index(self, edge) -> int:
        u, v = edge
        if u not in self.index or v not in self.index:
            raise ValueError(f"unknown edge {edge!r}")
        iu, iv = self.index[u], self.index[v]
        if self.parent[iv] == iu:
            return iv
        if self.parent[iu] == iv:
            return iu
        raise ValueError(f"{edge!r} is not an edge of the tree")

    def rerooted(self, root) -> "Tree":
        edges = [e for e, _ in self._edges_in]
        lengths = [ln for _, ln in self._edges_in]
        return Tree(self.vertices, edges, root, lengths)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e, _ in self._edges_in],
            "root": self.root,
            "lengths": [ln for _, ln in self._edges_in],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Tree":
        try:
            return cls(obj["vertices"], obj["edges"], obj["root"], obj.get("lengths"))
        except KeyError as exc:
            raise ValueError(f"tree JSON is missing {exc}") from None

    # -- points ----------------------------------------------------------

    def coords(self, p: TreePoint) -> tuple[int, float]:
        """Canonical edge coordinates of a public point."""
        if isinstance(p, Vertex):
            if p.id not in self.index:
                raise ValueError(f"unknown vertex {p.id!r}")
            i = self.index[p.id]
            if i == self.root_idx:
                return self.root_child, 0.0
            return i, float(self.length[i])
        if isinstance(p, EdgePoint):
            c = self.edge_index(p.edge)
            return c, p.s * float(self.length[c])
        raise TypeError(f"not a tree point: {p!r}")

    def point(self, c: int, h: float) -> TreePoint:
        c = int(c)
        if h <= 0.0:
            return Vertex(self.vertices[self.parent[c]])
        if h >= self.length[c]:
            return Vertex(self.vertices[c])
        return EdgePoint(self.edge_of(c), float(h / self.length[c]))

    def state(self, points: Sequence[TreePoint]) -> np.ndarray:
        arr = np.array([self.coords(p) for p in points], dtype=float).reshape(-1, 2)
        return arr

    def points(self, state: np.ndarray) -> tuple:
        return tuple(self.point(c, h) for c, h in np.asarray(state))

    def configuration(self, points: Sequence[TreePoint]) -> np.ndarray:
        """Validated state of an n-tuple of pairwise distinct points."""
        st = self.state(points)
        if st.shape[0] >= 2 and not self.min_separation(st) > 0:
            raise ValueError("tree configuration points must be pairwise distinct")
        return st

    # -- metric ----------------------------------------------------------

    def distance(self, c1, h1, c2, h2):
        """Tree-metric distance between points in edge coordinates (broadcasts)."""
        c1 = np.asarray(c1).astype(int)
        c2 = np.asarray(c2).astype(int)
        h1 = np.asarray(h1, dtype=float)
        h2 = np.asarray(h2, dtype=float)
        d1 = self.depth[self.parent[c1]] + h1
        d2 = self.depth[self.parent[c2]] + h2
        meet = self.lca_depth[c1, c2]
        meet = np.where(self.anc[c2, c1], d2, meet)
        meet = np.where(self.anc[c1, c2], d1, meet)
        meet = np.where(c1 == c2, np.minimum(d1, d2), meet)
        return np.abs(d1 + d2 - 2.0 * meet)

    def state_distance(self, a: np.ndarray, b: np.ndarray) -> float:
        """Largest per-point distance between two states of equal size."""
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape != b.shape:
            raise ValueError("states differ in size")
        return float(self.distance(a[..., 0], a[..., 1], b[..., 0], b[..., 1]).max(initial=0.0))

    def pairwise(self, state: np.ndarray) -> np.ndarray:
        st = np.asarray(state)
        c, h = st[..., 0], st[..., 1]
        return self.distance(c[..., :, None], h[..., :, None], c[..., None, :], h[..., None, :])

    def min_separation(self, state: np.ndarray) -> float:
        st = np.asarray(state)
        n = st.shape[-2]
        if n < 2:
            return float("inf")
        iu = np.triu_indices(n, k=1)
        return float(self.pairwise(st)[..., iu[0], iu[1]].min())

    def on_root_path(self, x, y) -> bool:
        """True iff point ``y`` lies on the simple path from ``x`` to the root.

        Both arguments are canonical edge coordinates ``(c, h)``.
        """
        cx, hx = int(x[0]), float(x[1])
        cy, hy = int(y[0]), float(y[1])
        if cx == cy:
            return hy <= hx
        return bool(self.anc[cy, cx])

    # -- geodesics -------------------------------------------------------

    def geodesic_legs(self, p, q) -> list[tuple[int, float, float]]:
        """Monotone legs ``(edge, h_from, h_to)`` of the simple path from ``p`` to ``q``."""
        cx, hx = int(p[0]), float(p[1])
        cy, hy = int(q[0]), float(q[1])
        if cx == cy:
            return [(cx, hx, hy)]
        if self.anc[cx, cy]:
            legs = [(cx, hx, float(self.length[cx]))]
            chain = self._chain_up(cy, cx)
            legs += [(u, 0.0, float(self.length[u])) for u in reversed(chain[1:])]
            legs.append((cy, 0.0, hy))
            return legs
        if self.anc[cy, cx]:
            return [(c, b, a) for c, a, b in reversed(self.geodesic_legs(q, p))]
        top = int(self.lca[cx, cy])
        legs = [(cx, hx, 0.0)]
        legs += [(u, float(self.length[u]), 0.0) for u in self._chain_up(int(self.parent[cx]), top)]
        chain = self._chain_up(cy, top)
        legs += [(u, 0.0, float(self.length[u])) for u in reversed(chain[1:])]
        legs.append((cy, 0.0, hy))
        return legs

    def _chain_up(self, start: int, stop: int) -> list[int]:
        """Vertices from ``start`` up to (excluding) ancestor ``stop``."""
        out = []
        u = start
        while u != stop:
            out.append(u)
            u = int(self.parent[u])
        return out


class GeodesicPath:
    """Constant-speed motion of one point along the simple path between two points."""

    def __init__(self, tree: Tree, p, q):
        self.start = (float(p[0]), float(p[1]))
        self.end = (float(q[0]), float(q[1]))
        legs = [leg for leg in tree.geodesic_legs(p, q) if leg[1] != leg[2]]
        self.moving = bool(legs)
        if not legs:
            legs = [(int(p[0]), float(p[1]), float(p[1]))]
        self.edge = np.array([leg[0] for leg in legs], dtype=float)
        self.h0 = np.array([leg[1] for leg in legs])
        self.h1 = np.array([leg[2] for leg in legs])
        seg = np.abs(self.h1 - self.h0)
        self.cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.total = float(self.cum[-1])

    def at_many(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        out = np.empty((f.size, 2))
        if not self.moving:
            out[:] = self.start
            return out
        arc = f * self.total
        k = np.clip(np.searchsorted(self.cum, arc, side="right") - 1, 0, self.edge.size - 1)
        seg = self.cum[k + 1] - self.cum[k]
        frac = np.clip((arc - self.cum[k]) / seg, 0.0, 1.0)
        out[:, 0] = self.edge[k]
        out[:, 1] = self.h0[k] + frac * (self.h1[k] - self.h0[k])
        out[f <= 0.0] = self.start
        out[f >= 1.0] = self.end
        return out


class TreePhase:
    """All points move simultaneously along their geodesics, each at constant speed."""

    kind = "tree"

    def __init__(self, tree: Tree, start: np.ndarray, end: np.ndarray):
        self.start = np.asarray(start, dtype=float)
        self.end = np.asarray(end, dtype=float)
        if self.start.shape != self.end.shape:
            raise ValueError("phase endpoints differ in size")
        self.tree = tree
        self.paths = [GeodesicPath(tree, p, q) for p, q in zip(self.start, self.end)]

    @property
    def movers(self) -> list[int]:
        return [i for i, path in enumerate(self.paths) if path.moving]

    def at(self, s: float) -> np.ndarray:
        if s <= 0.0:
            return self.start
        if s >= 1.0:
            return self.end
        return self.at_many(np.array([s]))[0]

    def at_many(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty((s.size,) + self.start.shape)
        for i, path in enumerate(self.paths):
            out[:, i, :] = path.at_many(s)
        return out


def tree_trajectory(tree: Tree, states: Sequence[np.ndarray]):
    """Trajectory through ``states`` with one geodesic phase per consecutive pair."""
    from .geometry import Trajectory

    if len(states) == 1:
        states = [states[0], states[0]]
    phases = [TreePhase(tree, a, b) for a, b in zip(states, states[1:])]
    return Trajectory(phases, wrap=tree.points, metric=tree.state_distance)


# -- stock trees ------------------------------------------------------------


def y_tree() -> Tree:
    """Letter Y: root 0 - centre 1 - leaves 2, 3."""
    return Tree([0, 1, 2, 3], [(0, 1), (1, 2), (1, 3)], root=0)


def h_tree() -> Tree:
    """Letter H: two degree-3 vertices 1 and 4 joined by the bar (1, 4)."""
    return Tree([0, 1, 2, 3, 4, 5, 6], [(0, 1), (1, 2), (1, 4), (4, 5), (4, 6), (2, 3)], root=0)


def star_tree(k: int) -> Tree:
    """Star with centre 1 of degree ``k``; vertex 0 is the root leaf."""
    if k < 1:
        raise ValueError("star needs at least one arm")
    verts = list(range(k + 1))
    edges = [(1, v) for v in verts if v != 1]
    return Tree(verts, edges, root=0)


def path_tree(k: int) -> Tree:
    verts = list(range(k + 1))
    return Tree(verts, list(zip(verts, verts[1:])), root=0)


def random_tree(rng: np.random.Generator, size: int) -> Tree:
    """Uniform-attachment random tree on ``size`` vertices rooted at a leaf."""
    if size < 2:
        raise ValueError("need at least two vertices")
    edges = [(int(rng.integers(0, v)), v) for v in range(1, size)]
    deg = np.zeros(size, dtype=int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    leaves = [v for v in range(size) if deg[v] == 1]
    return Tree(list(range(size)), edges, root=leaves[0])


def all_leaves(tree: Tree) -> list:
    return [tree.vertices[i] for i in range(len(tree.vertices)) if tree.degree[i] == 1]


def is_y_shaped(tree: Tree) -> bool:
    """Homeomorphic to the letter Y: after suppressing bivalent vertices, one
    vertex of degree 3 and three leaves."""
    deg = tree.degree
    return int(np.count_nonzero(deg >= 3)) == 1 and int(deg.max()) == 3 and int(np.count_nonzero(deg == 1)) == 3


__all__ = [
    "Vertex", "EdgePoint", "TreePoint", "Tree", "GeodesicPath", "TreePhase", "tree_trajectory",
    "point_from_json", "y_tree", "h_tree", "star_tree", "path_tree", "random_tree", "all_leaves",
    "is_y_shaped",
]
