"""Ordered solution enumeration for explicit weighted AND/OR trees and DAGs."""

from . import alternating, asg, bu, cli, domains, lasg, oracle, swaps
from .graph import (
    MAX,
    MIN,
    AndOrGraph,
    ExplicitSolution,
    Kind,
    OptTable,
    compute_optimal,
    convert_dag_to_tree,
    dump_file,
    dumps,
    evaluate_solution_cost,
    extract_optimal_solution,
    load_file,
    loads,
    participation_counts,
    validate,
)
from .swaps import Prepared, SolutionHandle

__all__ = [
    "MAX",
    "MIN",
    "AndOrGraph",
    "ExplicitSolution",
    "Kind",
    "OptTable",
    "Prepared",
    "SolutionHandle",
    "alternating",
    "asg",
    "bu",
    "cli",
    "compute_optimal",
    "convert_dag_to_tree",
    "domains",
    "dump_file",
    "dumps",
    "evaluate_solution_cost",
    "extract_optimal_solution",
    "lasg",
    "load_file",
    "loads",
    "oracle",
    "participation_counts",
    "swaps",
    "validate",
]
