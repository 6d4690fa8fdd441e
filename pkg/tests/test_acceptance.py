"""Acceptance criteria 1-10.

Each test records its outcome through the ``acceptance`` fixture; the
terminal summary prints one PASS/FAIL line per criterion.  Run on its own with
``python3 -m pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys

import numpy as np
import pytest

from tcmotion import tc
from tcmotion.qgamma import betti1_f2, build_qgamma, involution
from tcmotion.sphere import F1, F2, F3, SpherePlanner, tangent_field_even
from tcmotion.tree import all_leaves, h_tree, random_tree, star_tree, y_tree
from tcmotion.tree_planner import TreePlanner
from tcmotion.verification import (
    EuclidHarness,
    EvenEuclidHarness,
    SphereHarness,
    TreeHarness,
    check_trajectory,
    continuity_probe,
    witness_deviation,
)

TRIALS = 1000
SAMPLES = 1000


def _harness_groups():
    # (name, list of harnesses); trials are spread evenly over the list
    return [
        ("euclid", [EuclidHarness(d, n) for d in (2, 3, 4) for n in (2, 3, 4)]),
        ("euclid-even", [EvenEuclidHarness(d, n) for d in (2, 4) for n in (2, 3, 4)]),
        ("sphere", [SphereHarness(k) for k in (1, 2, 3, 4)]),
        ("tree", [TreeHarness(t, n) for t in (y_tree(), h_tree()) for n in (2, 3, 4)]),
    ]


GROUPS = _harness_groups()


# -- 1 ------------------------------------------------------------------------


def test_c1_region_counts(acceptance):
    problems = []
    for n in (2, 3, 4):
        for d in (2, 3, 4):
            h = EuclidHarness(d, n)
            if len(h.labels) != 2 * n - 1:
                problems.append(f"euclid d={d} n={n}: {len(h.labels)} labels")
            wit = h.witnesses()
            if sorted(wit) != h.labels or any(h.region(*wit[k]) != k for k in wit):
                problems.append(f"euclid d={d} n={n}: witnesses")
            if d % 2 == 0:
                h = EvenEuclidHarness(d, n)
                if len(h.labels) != 2 * n - 2:
                    problems.append(f"even d={d} n={n}: {len(h.labels)} labels")
                wit = h.witnesses()
                if sorted(wit) != h.labels or any(h.region(*wit[k]) != k for k in wit):
                    problems.append(f"even d={d} n={n}: witnesses")
    for tree, m in ((y_tree(), 1), (h_tree(), 2)):
        for n in (2, 3, 4):
            h = TreeHarness(tree, n)
            wit = h.witnesses()
            if len(h.labels) != 2 * m + 1:
                problems.append(f"tree m={m} n={n}: {len(h.labels)} labels")
            if sorted(wit) != h.labels or any(h.region(*wit[k]) != k for k in wit):
                problems.append(f"tree m={m} n={n}: witnesses")
    acceptance(1, not problems, "; ".join(problems))
    assert not problems


# -- 2 and 3 --------------------------------------------------------------------


@pytest.mark.parametrize("name, harnesses", GROUPS, ids=[s[0] for s in GROUPS])
def test_c2_c3_section_and_collisions(acceptance, name, harnesses):
    rng = np.random.default_rng(20240601)
    worst_err, worst_ratio, bad_end, bad_sep = 0.0, np.inf, 0, 0
    for k in range(TRIALS):
        h = harnesses[k % len(harnesses)]
        A, B = h.sample_pair(rng)
        plan = h.plan(A, B)
        rep = h.check(plan, A, B, SAMPLES)
        worst_err = max(worst_err, rep.endpoint_error)
        bad_end += rep.endpoint_error > 1e-9
        if name == "sphere":
            bad_sep += rep.sphere_drift > 1e-9
        else:
            worst_ratio = min(worst_ratio, rep.min_separation / rep.threshold)
            bad_sep += rep.min_separation < rep.threshold
    acceptance(2, bad_end == 0, f"{name}: max rel. endpoint error {worst_err:.1e}")
    if name != "sphere":
        acceptance(3, bad_sep == 0, f"{name}: min separation {worst_ratio:.3g} x threshold")
    assert bad_end == 0 and bad_sep == 0


# -- 4 ------------------------------------------------------------------------


@pytest.mark.parametrize("name, harnesses", GROUPS, ids=[s[0] for s in GROUPS])
def test_c4_continuity(acceptance, name, harnesses):
    rng = np.random.default_rng(7)
    within, total, discarded = 0, 200, 0
    for k in range(total):
        h = harnesses[k % len(harnesses)]
        res = continuity_probe(h, h.sample_pair(rng), 1e-6, 1, rng=rng)
        discarded += res.discarded
        within += sum(dev <= 1e-3 for dev in res.deviations)
    jumps = [witness_deviation(h) for h in harnesses]
    ok = within >= 0.95 * total and max(jumps) >= 0.1
    acceptance(4, ok, f"{name}: {within}/{total} probes within 1e-3, {discarded} discarded, jump {max(jumps):.3g}")
    assert ok


# -- 5 ------------------------------------------------------------------------


def test_c5_desingularization(acceptance):
    rng = np.random.default_rng(5)
    failures, seen = 0, set()
    for k in range(TRIALS):
        n = 2 + k % 3
        d = 2 + (k // 3) % 3
        h = EuclidHarness(d, n)
        cp = 1 + (k // 9) % n
        C = h.sample_config(rng, cp=cp)
        planner = h.planner
        seen.add((n, planner.cp(C)))
        failures += planner.cp(planner.desingularize(C).end) != n
    spans = all((n, c) in seen for n in (2, 3, 4) for c in range(1, n + 1))
    acceptance(5, failures == 0 and spans, f"{failures} failures, all cp strata covered: {spans}")
    assert failures == 0 and spans


# -- 6 ------------------------------------------------------------------------


def test_c6_retraction(acceptance):
    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(TRIALS):
        kk = 1 + k % 6
        d = (2, 3, 5)[k % 3]
        u = rng.normal(size=(kk, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        worst = max(worst, float(np.abs(tc.sphere_product_retract(tc.sphere_product_embed(u)) - u).max()))
    acceptance(6, worst <= 1e-12, f"max error {worst:.1e}")
    assert worst <= 1e-12


# -- 7 ------------------------------------------------------------------------


def _brute_force_count(tree):
    nbrs = {v: set() for v in tree.vertices}
    for u, v in tree.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    total = 0
    for v in tree.vertices:
        if len(nbrs[v]) < 3:
            continue
        # the descending neighbour is the one whose side contains the root
        down = [w for w in nbrs[v] if _reaches(nbrs, w, v, tree.root)]
        up = nbrs[v] - set(down)
        total += sum(1 for a, b in itertools.product(up, up) if a != b)
    return total


def _reaches(nbrs, start, banned, target):
    seen, stack = {banned, start}, [start]
    while stack:
        x = stack.pop()
        if x == target:
            return True
        for y in nbrs[x] - seen:
            seen.add(y)
            stack.append(y)
    return False


def test_c7_qgamma(acceptance):
    problems = []
    y, star = build_qgamma(y_tree()), build_qgamma(star_tree(4))
    if (y.edge_count, betti1_f2(y_tree())) != (2, 1):
        problems.append("Y")
    if (star.edge_count, betti1_f2(star_tree(4))) != (6, 5):
        problems.append("star")
    rng = np.random.default_rng(77)
    checked = 0
    while checked < 100:
        tree = random_tree(rng, int(rng.integers(4, 51)))
        if tree.m == 0:
            continue
        checked += 1
        q = build_qgamma(tree)
        inv = involution(q)
        if q.edge_count != _brute_force_count(tree):
            problems.append(f"count tree {checked}")
        if any(inv[c] == c or inv[inv[c]] != c for c in inv):
            problems.append(f"involution tree {checked}")
        if {build_qgamma(tree.rerooted(r)).edge_count for r in all_leaves(tree)} != {q.edge_count}:
            problems.append(f"root dependence tree {checked}")
    acceptance(7, not problems, "; ".join(problems) or f"{checked} random trees")
    assert not problems


# -- 8 ------------------------------------------------------------------------


def test_c8_tc_golden_values(acceptance):
    got = {
        "R3 n2": tc.tc_euclid_config(3, 2).value,
        "R2 n2": tc.tc_euclid_config(2, 2).value,
        "Y n2": tc.tc_tree_config(y_tree(), 2).value,
        "H n4": tc.tc_tree_config(h_tree(), 4).value,
        "surfaces": tuple(tc.tc_surface(g).value for g in (0, 1, 2))
        + tuple(tc.tc_surface(g, False).value for g in (1, 2)),
        "sphere products": tuple(tc.tc_sphere_product(n, k).value for n, k in ((1, 1), (2, 1), (2, 3), (3, 3))),
    }
    want = {
        "R3 n2": 3,
        "R2 n2": 2,
        "Y n2": 2,
        "H n4": 5,
        "surfaces": (3, 3, 5, 4, 5),
        "sphere products": (2, 3, 7, 4),
    }
    agree = all(
        tc.tc_s_euclid(2, d, n).value == tc.tc_euclid_config(d, n).value for d in range(2, 8) for n in range(2, 9)
    )
    bad = [k for k in want if got[k] != want[k]]
    ok = not bad and agree
    acceptance(8, ok, f"mismatches {bad}, TC_2 agreement {agree}")
    assert ok


# -- 9 ------------------------------------------------------------------------


def test_c9_sphere(acceptance):
    labels_ok = all(SpherePlanner(k).labels == [F1, F2] for k in (1, 3, 5)) and all(
        SpherePlanner(k).labels == [F1, F2, F3] for k in (2, 4, 6)
    )
    rng = np.random.default_rng(9)
    drift = 0.0
    for k in (1, 2, 3, 4):
        h = SphereHarness(k)
        for _ in range(100):
            A, B = h.sample_pair(rng)
            drift = max(drift, h.check(h.plan(A, B), A, B).sphere_drift)
        for A, B in h.witnesses().values():
            drift = max(drift, h.check(h.plan(A, B), A, B).sphere_drift)
    zero_only_at_pole = True
    for k in (2, 4):
        pole = np.zeros(k + 1)
        pole[-1] = 1.0
        pts = rng.normal(size=(10_000, k + 1))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        norms = np.array([np.linalg.norm(tangent_field_even(p, pole)) for p in pts])
        zero_only_at_pole &= bool(norms.min() > 0) and not np.any(tangent_field_even(pole, pole))
    ok = labels_ok and drift <= 1e-9 and zero_only_at_pole
    acceptance(9, ok, f"labels {labels_ok}, drift {drift:.1e}, field zero only at pole {zero_only_at_pole}")
    assert ok


# -- 10 -----------------------------------------------------------------------


def test_c10_all_relabelings(acceptance):
    failures, count = [], 0
    for tree in (y_tree(), h_tree()):
        for n in (1, 2, 3, 4):
            p = TreePlanner(tree, n)
            P0 = np.column_stack([np.full(n, p.c0), p.len0 * np.arange(1, n + 1) / (2 * (n + 1))])
            for perm in itertools.permutations(range(n)):
                target = P0[list(perm)]
                traj = p.root_edge_shuffle(P0, target)
                rep = check_trajectory(traj, P0, target, SAMPLES, tree=tree)
                count += 1
                if not rep.passed or not np.array_equal(traj.end, target):
                    failures.append((tree.m, n, perm))
    acceptance(10, not failures, f"{count} relabelings, failures {failures[:3]}")
    assert not failures


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
