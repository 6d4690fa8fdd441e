"""JSON and CSV helpers for configurations, trees and sampled trajectories."""

from __future__ import annotations

import csv
import json
import os
from typing import Optional, TextIO

import numpy as np

from .geometry import Configuration, Trajectory
from .tree import Tree, point_from_json


def read_json(source: str):
    """Parse ``source`` as inline JSON if it looks like JSON, otherwise as a file path."""
    text = source.strip()
    if text[:1] in "[{":
        return json.loads(text)
    if not os.path.exists(source):
        raise ValueError(f"no such file: {source}")
    with open(source) as fh:
        return json.load(fh)


def load_configuration(source: str) -> Configuration:
    return Configuration.from_json(read_json(source))


def save_configuration(conf: Configuration, path: str) -> None:
    # repr-exact floats so that a round trip is bit-identical
    with open(path, "w") as fh:
        json.dump(conf.to_json(), fh)


def load_tree(source: str) -> Tree:
    return Tree.from_json(read_json(source))


def load_tree_points(source: str) -> list:
    obj = read_json(source)
    if isinstance(obj, dict):
        obj = obj.get("points")
    if not isinstance(obj, list):
        raise ValueError("tree configuration JSON must be a list of points or {'points': [...]}")
    return [point_from_json(p) for p in obj]


def write_json(obj, fh: TextIO) -> None:
    json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
    fh.write("\n")


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_trajectory_csv(traj: Trajectory, fh: TextIO, samples: int = 1000, tree: Optional[Tree] = None) -> None:
    """One row per sample time.

    Euclidean and sphere motions get columns ``t, p0_x0, p0_x1, ...``; tree
    motions get one JSON-encoded tree point per column ``t, p0, p1, ...``.
    """
    ts = np.linspace(0.0, 1.0, samples)
    states = traj.sample(ts)
    writer = csv.writer(fh)
    n = states.shape[1]
    if tree is None:
        d = states.shape[2]
        writer.writerow(["t"] + [f"p{i}_x{k}" for i in range(n) for k in range(d)])
        for t, st in zip(ts, states):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in st.reshape(-1)])
        return
    writer.writerow(["t"] + [f"p{i}" for i in range(n)])
    for t, st in zip(ts, states):
        pts = tree.points(st)
        writer.writerow([repr(float(t))] + [json.dumps(p.to_json()) for p in pts])
