"""Tame planner for n points on a tree with 2m + 1 regions.

Both configurations are first brought down to the root edge: the points that
have no other point on their way to the root descend one at a time into a
ladder of parking slots at the bottom of the root edge.  The two parked
configurations are then connected by a stack shuffle that uses two branches
above the first essential vertex as auxiliary stacks.  The region label is
the number of points of A and of B sitting exactly at essential vertices.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .euclid import Plan
from .geometry import DEFAULT_TOLERANCES, Tolerances, Trajectory, concatenate
from .tree import Tree, tree_trajectory


class Descent(NamedTuple):
    trajectory: Trajectory
    parked: np.ndarray
    order: tuple  # labels listed from the lowest slot upwards


class TreePlanner:
    def __init__(self, tree: Tree, n: int, tolerances: Tolerances = DEFAULT_TOLERANCES):
        if n < 1:
            raise ValueError(f"need at least one point, got {n}")
        self.tree = tree
        self.n = n
        self.tol = tolerances
        self.c0 = tree.root_child
        self.len0 = float(tree.length[self.c0])

    @property
    def m(self) -> int:
        return self.tree.m

    @property
    def labels(self) -> list[int]:
        return list(range(0, 2 * self.m + 1))

    # -- states ----------------------------------------------------------

    def canonical(self, state) -> np.ndarray:
        """Edge coordinates with vertex points written as (vertex, len(vertex))."""
        st = np.array(state, dtype=float).reshape(-1, 2)
        t = self.tree
        for row in st:
            c = int(row[0])
            if row[1] <= 0.0:
                p = int(t.parent[c])
                row[:] = (self.c0, 0.0) if p == t.root_idx else (p, t.length[p])
            elif row[1] >= t.length[c]:
                row[1] = t.length[c]
        return st

    def _state(self, C) -> np.ndarray:
        if isinstance(C, np.ndarray) and C.ndim == 2 and C.shape[1] == 2 and C.dtype.kind == "f":
            st = self.canonical(C)
        else:
            st = self.canonical(self.tree.state(list(C)))
        if st.shape[0] != self.n:
            raise ValueError(f"expected {self.n} points, got {st.shape[0]}")
        if self.n >= 2 and not self.tree.min_separation(st) > 0:
            raise ValueError("tree configuration points must be pairwise distinct")
        return st

    # -- order -----------------------------------------------------------

    def partial_geq(self, x, y) -> bool:
        """x >= y: y lies on the simple path from x down to the root."""
        cx = self.canonical([x])[0]
        cy = self.canonical([y])[0]
        return self.tree.on_root_path(cx, cy)

    def minimal_points(self, C, among: Sequence[int] | None = None) -> list[int]:
        """Indices (ascending) of points with no other point on their root path."""
        st = self.canonical(C) if isinstance(C, np.ndarray) else self._state(C)
        idx = range(st.shape[0]) if among is None else sorted(among)
        out = []
        for i in idx:
            if not any(j != i and self.tree.on_root_path(st[i], st[j]) for j in idx):
                out.append(i)
        return out

    def region_index(self, A, B) -> int:
        return self._essential_count(self._state(A)) + self._essential_count(self._state(B))

    def _essential_count(self, st: np.ndarray) -> int:
        t = self.tree
        c = st[:, 0].astype(int)
        at_vertex = st[:, 1] == t.length[c]
        return int(np.count_nonzero(at_vertex & (t.degree[c] >= 3)))

    # -- phases ----------------------------------------------------------

    def parking_unit(self, st: np.ndarray) -> float:
        """Spacing factor of the parking ladder, as a fraction of the root edge."""
        on_e0 = st[:, 0] == self.c0
        s = st[on_e0, 1] / self.len0
        low = s[(s > 0.0) & (s <= 0.5)]
        return 0.5 * min(0.5, float(low.min()) if low.size else 0.5)

    def descend_all(self, C) -> Descent:
        st = self._state(C)
        n = self.n
        delta = self.parking_unit(st)
        remaining = set(range(n))
        states = [st.copy()]
        order = []
        cur = st.copy()
        while remaining:
            for i in self.minimal_points(cur, remaining):
                k = len(order) + 1
                cur = cur.copy()
                cur[i] = (self.c0, self.len0 * delta * k / (n + 1))
                states.append(cur)
                order.append(i)
                remaining.discard(i)
        return Descent(tree_trajectory(self.tree, states), cur, tuple(order))

    def _slots(self, order, unit: float) -> np.ndarray:
        st = np.empty((self.n, 2))
        st[:, 0] = self.c0
        for k, label in enumerate(order, start=1):
            st[label, 1] = self.len0 * unit * k / (self.n + 1)
        return st

    def _order_on_e0(self, st: np.ndarray, name: str) -> tuple:
        if not np.all(st[:, 0] == self.c0) or not np.all((st[:, 1] > 0) & (st[:, 1] < self.len0)):
            raise ValueError(f"{name} does not lie in the interior of the root edge")
        return tuple(int(i) for i in np.argsort(st[:, 1], kind="stable"))

    def _top_vertex(self) -> int:
        """First essential vertex above the root edge."""
        t = self.tree
        v = self.c0
        while len(t.children[v]) == 1:
            v = t.children[v][0]
        if len(t.children[v]) < 2:
            raise ValueError("the tree has no essential vertex")
        return v

    def root_edge_shuffle(self, P, P2) -> Trajectory:
        """Move a parked configuration to another one, realising the relabelling."""
        p = self.canonical(P)
        q = self.canonical(P2)
        src = self._order_on_e0(p, "start configuration")
        dst = self._order_on_e0(q, "goal configuration")
        start_slots = self._slots(src, 1.0)
        states = [p, start_slots]
        if src != dst:
            if self.m == 0:
                raise ValueError("points on an arc cannot change their order")
            states += self._stack_moves(src, dst)
        states.append(q)
        return tree_trajectory(self.tree, states)

    def _stack_moves(self, src: tuple, dst: tuple) -> list[np.ndarray]:
        t = self.tree
        n = self.n
        top = self._top_vertex()
        b = t.children[top][:2]

        def branch_pos(edge, level):
            return (edge, float(t.length[edge]) * (n + 1 - level) / (n + 1))

        cur = self._slots(src, 1.0)
        trunk = list(src)
        stacks = {b[0]: [], b[1]: []}
        out = []

        def push(label, edge):
            nonlocal cur
            stacks[edge].append(label)
            cur = cur.copy()
            cur[label] = branch_pos(edge, len(stacks[edge]))
            out.append(cur)

        while trunk:
            push(trunk.pop(), b[0])
        for k, label in enumerate(dst, start=1):
            home = b[0] if label in stacks[b[0]] else b[1]
            other = b[1] if home == b[0] else b[0]
            while stacks[home][-1] != label:
                push(stacks[home].pop(), other)
            stacks[home].pop()
            cur = cur.copy()
            cur[label] = (self.c0, self.len0 * k / (n + 1))
            out.append(cur)
        return out

    # -- plan ------------------------------------------------------------

    def plan(self, A, B) -> Plan:
        if self.m == 0:
            raise ValueError("the tree is an arc; use the order-preserving motion on the arc instead")
        a = self._state(A)
        b = self._state(B)
        down_a = self.descend_all(a)
        down_b = self.descend_all(b)
        shuffle = self.root_edge_shuffle(down_a.parked, down_b.parked)
        traj = concatenate(
            [down_a.trajectory, shuffle, down_b.trajectory.reversed()],
            self.tol.junction_tol,
        )
        return Plan(traj, self._essential_count(a) + self._essential_count(b))
