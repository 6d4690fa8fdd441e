import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcmotion.tc import (
    UNKNOWN,
    TCValue,
    control_strategy_counts,
    sphere_product_embed,
    sphere_product_retract,
    tc_euclid_config,
    tc_s_euclid,
    tc_sphere_product,
    tc_surface,
    tc_tree_config,
)
from tcmotion.tree import Tree, h_tree, path_tree, star_tree, y_tree
from tcmotion.tree_planner import TreePlanner


@pytest.mark.parametrize("d, n, value", [(3, 2, 3), (2, 2, 2), (2, 5, 8), (5, 4, 7), (4, 3, 4)])
def test_euclid(d, n, value):
    assert tc_euclid_config(d, n).value == value


def test_euclid_rejects_bad_input():
    with pytest.raises(ValueError):
        tc_euclid_config(1, 3)
    with pytest.raises(ValueError):
        tc_euclid_config(3, 1)


def test_tree_values():
    assert tc_tree_config(y_tree(), 2).value == 2
    assert tc_tree_config(y_tree(), 3).value == 3
    assert tc_tree_config(h_tree(), 4).value == 5
    v = tc_tree_config(h_tree(), 3)
    assert v.value == UNKNOWN and v.upper_bound == 5 and not v.known
    assert tc_tree_config(star_tree(4), 2).value == 3
    with pytest.raises(ValueError):
        tc_tree_config(path_tree(4), 3)


def test_subdivided_y_keeps_the_exception():
    t = Tree([0, 1, 2, 3, 4], [(0, 1), (1, 2), (2, 3), (1, 4)], root=0)
    assert tc_tree_config(t, 2).value == 2


@pytest.mark.parametrize("n, k, value", [(1, 1, 2), (2, 1, 3), (2, 3, 7), (3, 4, 5)])
def test_sphere_products(n, k, value):
    assert tc_sphere_product(n, k).value == value


@pytest.mark.parametrize("s, d, n, value", [(2, 3, 4, 7), (3, 2, 2, 3), (3, 3, 2, 4), (3, 2, 4, 9), (4, 3, 3, 9)])
def test_higher(s, d, n, value):
    assert tc_s_euclid(s, d, n).value == value


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_higher_order_two_agrees(d, n):
    assert tc_s_euclid(2, d, n).value == tc_euclid_config(d, n).value


@pytest.mark.parametrize(
    "g, orientable, value", [(0, True, 3), (1, True, 3), (2, True, 5), (1, False, 4), (2, False, 5), (7, False, 5)]
)
def test_surfaces(g, orientable, value):
    assert tc_surface(g, orientable).value == value


def test_surface_genus_validation():
    with pytest.raises(ValueError):
        tc_surface(-1, True)
    with pytest.raises(ValueError):
        tc_surface(0, False)


@pytest.mark.parametrize("a, k, counts", [(2, 3, (8, 4)), (2, 1, (2, 2)), (3, 2, (9, 5))])
def test_control_counts(a, k, counts):
    assert control_strategy_counts(a, k) == counts


def test_tc_value_validation():
    with pytest.raises(ValueError):
        TCValue(0, "x")
    assert TCValue(3, "x").reduced == 2
    assert TCValue(UNKNOWN, "x").reduced == UNKNOWN


def test_embed_examples():
    assert np.array_equal(sphere_product_embed([(1.0, 0.0)]).points, [[0, 0], [1, 0]])
    pts = sphere_product_embed([(1.0, 0.0), (1.0, 0.0)]).points
    assert np.array_equal(pts, [[0, 0], [1, 0], [4, 0]])
    with pytest.raises(ValueError):
        sphere_product_embed([(2.0, 0.0)])


def test_retract_examples():
    assert np.allclose(sphere_product_retract([[0, 0], [1, 0], [4, 0]]), [[1, 0], [1, 0]])
    pts = np.array([[0.0, 1.0], [2.0, 3.0], [-1.0, 5.0]])
    assert np.allclose(sphere_product_retract(pts[::-1]), -sphere_product_retract(pts)[::-1])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.sampled_from([2, 3, 5]))
def test_retract_embed_identity(seed, k, d):
    u = np.random.default_rng(seed).normal(size=(k, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    assert np.abs(sphere_product_retract(sphere_product_embed(u)) - u).max() <= 1e-12


@pytest.mark.parametrize("tree_fn, n", [(y_tree, 2), (y_tree, 3), (h_tree, 4), (lambda: star_tree(4), 2)])
def test_tree_value_versus_planner_regions(tree_fn, n):
    tree = tree_fn()
    regions = len(TreePlanner(tree, n).labels)
    value = tc_tree_config(tree, n).value
    if n == 2 and tree_fn is y_tree:
        assert regions == 3 and value == 2  # the planner is not optimal here
    else:
        assert regions == value
