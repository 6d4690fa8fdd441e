"""Command-line front end: ``tcmotion plan | verify | tc | qgamma``.

Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io, qgamma, tc
from .euclid import EuclidPlanner
from .euclid_even import EvenEuclidPlanner
from .sphere import SpherePlanner
from .tree import h_tree, star_tree, y_tree
from .tree_planner import TreePlanner
from .verification import (
    EuclidHarness,
    EvenEuclidHarness,
    SphereHarness,
    TreeHarness,
    check_trajectory,
    run_verification,
)

PLANNERS = ("euclid", "euclid-even", "sphere", "tree")
STOCK_TREES = {"y": y_tree, "h": h_tree, "star4": lambda: star_tree(4)}


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TCMOTION_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TCMOTION_SEED must be an integer, got {env!r}") from None


def _tree(args):
    if args.tree and args.tree_name:
        raise UsageError("give either --tree or --tree-name, not both")
    if args.tree:
        return io.load_tree(args.tree)
    if args.tree_name:
        return STOCK_TREES[args.tree_name]()
    raise UsageError("this command needs --tree or --tree-name")


def _add_tree_args(p):
    p.add_argument("--tree", help="tree JSON file (or inline JSON)")
    p.add_argument("--tree-name", choices=sorted(STOCK_TREES), help="built-in tree")


# -- plan -------------------------------------------------------------------


def cmd_plan(args) -> int:
    tree = None
    if args.planner == "tree":
        tree = _tree(args)
        A = io.load_tree_points(args.start)
        B = io.load_tree_points(args.goal)
        if len(A) != len(B):
            raise UsageError("start and goal have different numbers of points")
        planner = TreePlanner(tree, len(A))
        plan = planner.plan(A, B)
        report = check_trajectory(plan.trajectory, planner._state(A), planner._state(B), args.samples, tree=tree)
        n, d = len(A), None
    else:
        A = io.load_configuration(args.start)
        B = io.load_configuration(args.goal)
        if A.points.shape != B.points.shape:
            raise UsageError(f"start and goal shapes differ: {A.points.shape} vs {B.points.shape}")
        n, d = A.n, A.dim
        if args.planner == "euclid":
            planner = EuclidPlanner(d, n)
        elif args.planner == "euclid-even":
            planner = EvenEuclidPlanner(d, n)
        else:
            if n != 1:
                raise UsageError("the sphere planner takes configurations with exactly one point")
            planner = SpherePlanner(d - 1)
        if args.planner == "sphere":
            plan = planner.plan(A.points[0], B.points[0])
        else:
            plan = planner.plan(A, B)
        report = check_trajectory(plan.trajectory, A.points, B.points, args.samples)
    meta = {
        "region": plan.region,
        "planner": args.planner,
        "n": n,
        "d": d,
        "endpoints_ok": report.endpoint_error <= 1e-9,
    }
    if args.output:
        with open(args.output, "w", newline="") as fh:
            io.write_trajectory_csv(plan.trajectory, fh, args.samples, tree)
        meta_path = args.meta or os.path.splitext(args.output)[0] + ".json"
        with open(meta_path, "w") as fh:
            io.write_json(meta, fh)
    io.write_json(meta, sys.stdout)
    return 0


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.planner == "euclid":
        harness = EuclidHarness(args.d, args.n)
    elif args.planner == "euclid-even":
        harness = EvenEuclidHarness(args.d, args.n)
    elif args.planner == "sphere":
        harness = SphereHarness(args.d - 1)
    else:
        harness = TreeHarness(_tree(args), args.n)
    result = run_verification(harness, args.trials, args.samples, np.random.default_rng(_seed(args)))
    result["seed"] = _seed(args)
    io.write_json(result, sys.stdout)
    return 0 if result["pass"] else 1


# -- tc ---------------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"family {args.family!r} needs {', '.join(missing)}")


def cmd_tc(args) -> int:
    fam = args.family
    if fam == "euclid":
        _need(args, "d", "n")
        value = tc.tc_euclid_config(args.d, args.n)
    elif fam == "tree":
        _need(args, "n")
        value = tc.tc_tree_config(_tree(args), args.n)
    elif fam == "sphere":
        _need(args, "d", "k")
        value = tc.tc_sphere_product(args.d, args.k)
    elif fam == "tc-s":
        _need(args, "s", "d", "n")
        value = tc.tc_s_euclid(args.s, args.d, args.n)
    elif fam == "surface":
        _need(args, "genus")
        value = tc.tc_surface(args.genus, not args.non_orientable)
    else:
        _need(args, "a", "k")
        distributed, centralized = tc.control_strategy_counts(args.a, args.k)
        io.write_json({"distributed": distributed, "centralized": centralized}, sys.stdout)
        return 0
    io.write_json(value.to_json(), sys.stdout)
    return 0


def cmd_qgamma(args) -> int:
    q = qgamma.build_qgamma(_tree(args))
    io.write_json(q.to_json(), sys.stdout)
    return 0


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tcmotion", description="Tame motion planners and complexity values.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a motion between two configurations")
    p.add_argument("--planner", choices=PLANNERS, required=True)
    p.add_argument("--from", dest="start", required=True, help="start configuration (path or inline JSON)")
    p.add_argument("--to", dest="goal", required=True, help="goal configuration (path or inline JSON)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--output", "-o", help="CSV file for the sampled trajectory")
    p.add_argument("--meta", help="metadata JSON path (default: next to the CSV)")
    _add_tree_args(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="check a planner on random pairs")
    p.add_argument("--planner", choices=PLANNERS, required=True)
    p.add_argument("-n", type=int, default=3, help="number of points")
    p.add_argument("-d", type=int, default=2, help="ambient dimension (sphere: R^d)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    _add_tree_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tc", help="topological complexity values")
    p.add_argument("--family", choices=("euclid", "tree", "sphere", "tc-s", "surface", "control"), required=True)
    p.add_argument("-d", type=int, help="dimension (sphere family: sphere dimension)")
    p.add_argument("-n", type=int, help="number of points")
    p.add_argument("-k", type=int, help="number of factors / subsystems")
    p.add_argument("-s", type=int, help="order of higher complexity")
    p.add_argument("-a", type=int, help="regions per subsystem")
    p.add_argument("--genus", type=int)
    p.add_argument("--non-orientable", action="store_true")
    _add_tree_args(p)
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("qgamma", help="two-point graph model of a tree")
    _add_tree_args(p)
    p.set_defaults(func=cmd_qgamma)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "samples", 2) < 2 or getattr(args, "trials", 1) < 1:
            raise UsageError("--samples must be >= 2 and --trials >= 1")
        return args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        print(f"tcmotion: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
