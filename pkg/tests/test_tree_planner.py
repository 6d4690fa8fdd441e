import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcmotion.tree import EdgePoint, Vertex, h_tree, path_tree, random_tree, y_tree
from tcmotion.tree_planner import TreePlanner
from tcmotion.verification import TreeHarness, check_trajectory


def E(u, v, s):
    return EdgePoint((u, v), s)


def test_labels():
    assert TreePlanner(y_tree(), 2).labels == [0, 1, 2]
    assert TreePlanner(h_tree(), 3).labels == [0, 1, 2, 3, 4]


def test_partial_order():
    p = TreePlanner(y_tree(), 2)
    t = p.tree
    deep = t.coords(E(1, 2, 0.7))
    low = t.coords(E(0, 1, 0.5))
    side = t.coords(E(1, 3, 0.2))
    assert p.partial_geq(deep, deep)
    assert p.partial_geq(deep, low) and not p.partial_geq(low, deep)
    assert not p.partial_geq(deep, side) and not p.partial_geq(side, deep)


def test_minimal_points():
    p = TreePlanner(y_tree(), 2)
    assert p.minimal_points([E(1, 2, 0.5), E(1, 3, 0.5)]) == [0, 1]
    assert p.minimal_points([E(1, 2, 0.5), E(0, 1, 0.5)]) == [1]
    assert TreePlanner(y_tree(), 1).minimal_points([E(1, 3, 0.5)]) == [0]


def test_descend_parks_in_slots():
    p = TreePlanner(y_tree(), 2)
    d = p.descend_all([E(1, 2, 0.5), E(1, 3, 0.5)])
    assert d.order == (0, 1)
    # no lower-half occupant: unit 1/4, slots 1/12 and 2/12
    assert np.allclose(d.parked[:, 1], [0.25 / 3, 0.5 / 3])
    assert np.all(d.parked[:, 0] == p.c0)
    assert check_trajectory(d.trajectory, d.trajectory.start, d.parked, tree=p.tree).passed


def test_descend_stacked_points_in_order():
    p = TreePlanner(h_tree(), 3)
    C = [E(2, 3, 0.8), E(1, 2, 0.3), E(2, 3, 0.2)]
    d = p.descend_all(C)
    assert d.order == (1, 2, 0)
    assert check_trajectory(d.trajectory, p._state(C), d.parked, tree=p.tree).passed


def test_descend_already_parked_is_a_slide():
    p = TreePlanner(y_tree(), 2)
    C = [E(0, 1, 0.05), E(0, 1, 0.1)]
    d = p.descend_all(C)
    assert d.order == (0, 1)
    assert np.allclose(d.parked[:, 1], [0.025 / 3, 0.05 / 3])
    for phase in d.trajectory.pieces:
        assert len(phase.movers) <= 1


def test_descend_lower_half_occupant_bounds_slots():
    p = TreePlanner(y_tree(), 3)
    C = [E(1, 2, 0.5), E(0, 1, 0.2), E(1, 3, 0.5)]
    d = p.descend_all(C)
    assert d.order == (1, 0, 2)
    assert d.parked[:, 1].max() < 0.2


def test_shuffle_identity_is_slide_only():
    p = TreePlanner(y_tree(), 2)
    P0 = np.array([[p.c0, 0.1], [p.c0, 0.2]])
    P1 = np.array([[p.c0, 0.3], [p.c0, 0.4]])
    traj = p.root_edge_shuffle(P0, P1)
    states = traj.sample(np.linspace(0, 1, 200))
    assert np.all(states[:, :, 0] == p.c0)
    assert np.array_equal(traj.end, P1)


def test_y_swap_uses_side_branch():
    p = TreePlanner(y_tree(), 2)
    P0 = np.array([[p.c0, 0.1], [p.c0, 0.2]])
    P1 = np.array([[p.c0, 0.2], [p.c0, 0.1]])
    traj = p.root_edge_shuffle(P0, P1)
    rep = check_trajectory(traj, P0, P1, tree=p.tree)
    assert rep.passed
    edges = set(traj.sample(np.linspace(0, 1, 500))[:, :, 0].ravel().astype(int))
    assert len(edges) == 3


def test_h_tree_full_reversal():
    p = TreePlanner(h_tree(), 3)
    P0 = np.array([[p.c0, 0.1], [p.c0, 0.2], [p.c0, 0.3]])
    P1 = P0[::-1].copy()
    traj = p.root_edge_shuffle(P0, P1)
    assert check_trajectory(traj, P0, P1, tree=p.tree).passed


def test_shuffle_on_arc_needs_identity():
    t = path_tree(3)
    p = TreePlanner(t, 2)
    P0 = np.array([[p.c0, 0.1], [p.c0, 0.2]])
    p.root_edge_shuffle(P0, P0 + [0, 0.1])
    with pytest.raises(ValueError):
        p.root_edge_shuffle(P0, P0[::-1].copy())
    with pytest.raises(ValueError, match="arc"):
        p.plan([E(0, 1, 0.5), E(1, 2, 0.5)], [E(0, 1, 0.5), E(1, 2, 0.5)])


def test_region_examples():
    p = TreePlanner(y_tree(), 2)
    generic = [E(1, 2, 0.5), E(1, 3, 0.5)]
    at_centre = [Vertex(1), E(1, 3, 0.5)]
    assert p.region_index(generic, generic) == 0
    assert p.region_index(at_centre, generic) == 1
    assert p.region_index(at_centre, at_centre) == 2
    # bivalent and root vertices are not essential
    q = TreePlanner(h_tree(), 2)
    assert q.region_index([Vertex(2), Vertex(0)], [Vertex(1), Vertex(4)]) == 2


def test_plan_round_trip_and_swap():
    p = TreePlanner(y_tree(), 2)
    A = [E(1, 2, 0.5), E(1, 3, 0.5)]
    B = [A[1], A[0]]
    for target in (A, B):
        plan = p.plan(A, target)
        assert plan.region == 0
        rep = check_trajectory(plan.trajectory, p._state(A), p._state(target), tree=p.tree)
        assert rep.passed
    assert plan.trajectory.evaluate(1.0) == tuple(B)


def test_plan_rejects_collisions_and_sizes():
    p = TreePlanner(y_tree(), 2)
    with pytest.raises(ValueError):
        p.plan([E(1, 2, 0.5), E(2, 1, 0.5)], [E(1, 2, 0.5), E(1, 3, 0.5)])
    with pytest.raises(ValueError):
        p.plan([E(1, 2, 0.5)], [E(1, 3, 0.5)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_plan_random_trees(seed, n):
    rng = np.random.default_rng(seed)
    t = random_tree(rng, int(rng.integers(4, 12)))
    if t.m == 0:
        return
    h = TreeHarness(t, n)
    A, B = h.sample_pair(rng)
    plan = h.plan(A, B)
    assert plan.region in h.labels
    assert h.check(plan, A, B, 300).passed


@pytest.mark.parametrize("tree_fn, n", [(y_tree, 3), (h_tree, 3)])
def test_all_relabelings_from_descents(tree_fn, n):
    p = TreePlanner(tree_fn(), n)
    A = TreeHarness(p.tree, n)._with_vertices(0)
    for perm in itertools.permutations(range(n)):
        B = A[list(perm)]
        plan = p.plan(A, B)
        assert check_trajectory(plan.trajectory, A, B, 300, tree=p.tree).passed


def _sup_distance(p, A1, A2, B):
    ts = np.linspace(0, 1, 2001)
    a = p.plan(A1, B).trajectory.sample(ts)
    b = p.plan(A2, B).trajectory.sample(ts)
    return p.tree.state_distance(a, b)


@pytest.mark.parametrize("other", [E(4, 5, 0.3), E(0, 1, 0.7), E(0, 1, 0.3)])
def test_bivalent_vertex_crossing_is_continuous(other):
    p = TreePlanner(h_tree(), 2)
    B = [E(4, 5, 0.5), E(4, 6, 0.5)]
    for near in (E(1, 2, 1 - 1e-6), E(2, 3, 1e-6)):
        assert _sup_distance(p, [Vertex(2), other], [near, other], B) <= 1e-5


def test_parking_rule_jumps_at_the_root_vertex():
    # the slot ladder shrinks with the lowest point on the root edge, so it
    # collapses as that point approaches the root vertex
    p = TreePlanner(h_tree(), 2)
    B = [E(4, 5, 0.5), E(4, 6, 0.5)]
    other = E(4, 5, 0.3)
    assert _sup_distance(p, [Vertex(0), other], [E(0, 1, 1e-6), other], B) > 0.1
