"""Tame motion planners for configuration spaces and their complexity values."""

from .euclid import EuclidPlanner, Plan
from .euclid_even import EvenEuclidPlanner
from .geometry import DEFAULT_TOLERANCES, Configuration, Tolerances, Trajectory, concatenate
from .qgamma import betti1_f2, build_qgamma
from .sphere import SpherePlanner
from .tc import TCValue
from .tree import EdgePoint, Tree, Vertex
from .tree_planner import TreePlanner

__version__ = "0.1.0"

__all__ = [
    "Configuration", "Tolerances", "DEFAULT_TOLERANCES", "Trajectory", "concatenate", "Plan",
    "EuclidPlanner", "EvenEuclidPlanner", "SpherePlanner", "Tree", "Vertex", "EdgePoint",
    "TreePlanner", "TCValue", "build_qgamma", "betti1_f2",
]
