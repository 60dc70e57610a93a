from zerosum_forests.embed import ForestPattern, parse_pattern
from zerosum_forests.factorsolve import PathFactor, solve_p3, solve_p4, solve_path_factor
from zerosum_forests.graphcore import EdgeLabeling, random_zero_sum
from zerosum_forests.swapwalk import bounded_copy

__version__ = "0.1.0"

__all__ = [
    "EdgeLabeling",
    "ForestPattern",
    "PathFactor",
    "bounded_copy",
    "parse_pattern",
    "random_zero_sum",
    "solve_p3",
    "solve_p4",
    "solve_path_factor",
]
