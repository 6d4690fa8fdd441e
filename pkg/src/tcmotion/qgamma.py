"""Two-vertex graph Q modelling the space of two distinct points on a tree.

Q has vertices A and B and one edge A -> B for every essential vertex v and
ordered pair (e, e') of distinct ascending edges at v.  Swapping the two
points acts on Q by exchanging A with B and (v, e, e') with (v, e', e).
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree import Tree

A_CELL, B_CELL = "A", "B"


@dataclass(frozen=True)
class QGammaComplex:
    vertices: tuple
    edges: tuple  # labels (v, e, e') with e, e' ascending edge ids at v

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def betti1(self) -> int:
        # connected graph: b1 = E - V + 1
        return self.edge_count - len(self.vertices) + 1

    def to_json(self) -> dict:
        return {
            "labels": [[v, list(e), list(f)] for v, e, f in self.edges],
            "edges": self.edge_count,
            "involution": [[list(_flat(a)), list(_flat(b))] for a, b in involution_pairs(self)],
            "b1": self.betti1,
        }


def _flat(label):
    v, e, f = label
    return [v, list(e), list(f)]


def ascending_descending(tree: Tree, v) -> tuple[tuple, list[tuple]]:
    """Split the edges at ``v`` into the one towards the root and the rest."""
    if v not in tree.index:
        raise ValueError(f"unknown vertex {v!r}")
    i = tree.index[v]
    if i == tree.root_idx:
        raise ValueError("the root has no descending edge")
    down = tree.edge_of(i)
    up = [tree.edge_of(c) for c in tree.children[i]]
    return down, up


def build_qgamma(tree: Tree) -> QGammaComplex:
    if tree.m == 0:
        raise ValueError("the tree has no essential vertex")
    labels = []
    for v in tree.essential_vertices:
        _, up = ascending_descending(tree, v)
        labels.extend((v, e, f) for e in up for f in up if e != f)
    return QGammaComplex((A_CELL, B_CELL), tuple(labels))


def involution(q: QGammaComplex) -> dict:
    """Action of the swap on cells: a map label -> label (vertices included)."""
    out = {A_CELL: B_CELL, B_CELL: A_CELL}
    edges = set(q.edges)
    for v, e, f in q.edges:
        twin = (v, f, e)
        if twin not in edges:
            raise ValueError(f"edge {(v, e, f)} has no twin")
        out[(v, e, f)] = twin
    return out


def involution_pairs(q: QGammaComplex) -> list[tuple]:
    seen = set()
    pairs = []
    for label, image in involution(q).items():
        if label in (A_CELL, B_CELL) or label in seen:
            continue
        seen.update((label, image))
        pairs.append((label, image))
    return pairs


def eta_sum(tree: Tree) -> int:
    return int(sum((d - 1) * (d - 2) for d in tree.degree if d >= 3))


def betti1_f2(tree: Tree) -> int:
    """First Betti number of the two-point configuration space of a tree."""
    if tree.m == 0:
        raise ValueError("the tree has no essential vertex")
    return eta_sum(tree) - 1
