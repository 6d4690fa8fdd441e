"""Closed-form topological complexity values and related counting formulas.

The convention is the non-reduced one: TC of a contractible space is 1 and
TC of the circle is 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .geometry import Configuration, as_points
from .tree import Tree, is_y_shaped

UNKNOWN = "unknown"


@dataclass(frozen=True)
class TCValue:
    value: Union[int, str]
    source: str
    upper_bound: Optional[int] = None

    def __post_init__(self):
        if self.value != UNKNOWN and not (isinstance(self.value, int) and self.value >= 1):
            raise ValueError(f"TC value must be a positive integer or {UNKNOWN!r}, got {self.value!r}")

    @property
    def known(self) -> bool:
        return self.value != UNKNOWN

    @property
    def reduced(self):
        return self.value - 1 if self.known else UNKNOWN

    def to_json(self) -> dict:
        out = {"value": self.value, "source": self.source}
        if self.upper_bound is not None:
            out["upper_bound"] = self.upper_bound
        return out


def tc_euclid_config(d: int, n: int) -> TCValue:
    """TC of the space of n distinct ordered points in R^d."""
    if d < 2 or n < 2:
        raise ValueError(f"need d >= 2 and n >= 2, got d={d}, n={n}")
    value = 2 * n - 1 if d % 2 else 2 * n - 2
    return TCValue(value, f"configuration space of R^{d}: 2n-{1 if d % 2 else 2}")


def tc_tree_config(tree: Tree, n: int) -> TCValue:
    m = tree.m
    if m == 0:
        raise ValueError("the tree is homeomorphic to an arc")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2 and is_y_shaped(tree):
        return TCValue(2, "two points on a Y-shaped tree: homotopy circle")
    if n >= 2 * m:
        return TCValue(2 * m + 1, "tree with n >= 2m: 2m+1")
    return TCValue(UNKNOWN, "tree with n < 2m: only the upper bound 2m+1 is known", upper_bound=2 * m + 1)


def tc_sphere_product(n: int, k: int) -> TCValue:
    """TC of the product of k copies of S^n."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if n % 2:
        return TCValue(k + 1, "product of odd spheres: k+1")
    return TCValue(2 * k + 1, "product of even spheres: 2k+1")


def tc_s_euclid(s: int, d: int, n: int) -> TCValue:
    """Higher (s-th) topological complexity of n distinct points in R^d."""
    if s < 2 or d < 2 or n < 2:
        raise ValueError(f"need s, d, n >= 2, got s={s}, d={d}, n={n}")
    value = s * n - s + 1 if d % 2 else s * n - s
    return TCValue(value, f"higher complexity of configurations in R^{d}")


def tc_surface(genus: int, orientable: bool = True) -> TCValue:
    if orientable:
        if genus < 0:
            raise ValueError(f"orientable genus must be >= 0, got {genus}")
        return TCValue(3 if genus <= 1 else 5, f"orientable surface of genus {genus}")
    if genus < 1:
        raise ValueError(f"non-orientable genus must be >= 1, got {genus}")
    return TCValue(4 if genus == 1 else 5, f"non-orientable surface of genus {genus}")


def control_strategy_counts(a: int, k: int) -> tuple[int, int]:
    """Regions needed by a distributed (a^k) and a centralised (k(a-1)+1) controller
    for k independent systems each needing a regions."""
    if a < 2 or k < 1:
        raise ValueError(f"need a >= 2 and k >= 1, got a={a}, k={k}")
    return a**k, k * (a - 1) + 1


def sphere_product_embed(u: Sequence) -> Configuration:
    """Configuration z_1 = 0, z_(i+1) = z_i + 3^(i-1) u_i for unit vectors u_i."""
    vecs = np.atleast_2d(np.asarray(u, dtype=float))
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise ValueError("all inputs must be unit vectors")
    steps = (3.0 ** np.arange(vecs.shape[0]))[:, None] * vecs
    pts = np.vstack([np.zeros(vecs.shape[1]), np.cumsum(steps, axis=0)])
    return Configuration(pts)


def sphere_product_retract(C) -> np.ndarray:
    """Normalised successive differences of a configuration."""
    pts = as_points(C)
    diff = np.diff(pts, axis=0)
    return diff / np.linalg.norm(diff, axis=1, keepdims=True)
