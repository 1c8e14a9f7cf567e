"""Unique solvability of structured recursion equations f = beta . F f . alpha.

Finite instances are analysed by least and greatest fixpoints (domain
predicate, inductive and coinductive graphs, bisimilarity) and every verdict
can be cross-checked against a brute-force count of solutions.  Productive
stream definitions are handled separately by fuel-bounded rewriting in
:mod:`hylocheck.codata`.
"""
from importlib.resources import files

from .coinductive import (check_coinduction_principle, check_criteria, compute_bisim,
                          compute_cograph, compute_quotient, extract_quotient_solution,
                          is_antifounded, verify_solution)
from .container import (ContainerSpec, FStructure, Shape, enumerate_fstructures, lift_pred,
                        lift_rel, map_functor)
from .inductive import (SolutionTable, check_dom_vs_Dom, check_functional,
                        check_induction_principle, compute_dom, compute_graph_lfp,
                        extract_partial_solution, is_wellfounded)
from .instance import (EquationInstance, apply_alpha, apply_beta, emit_instance,
                       generate_example, load_instance, parse_instance)
from .oracle import (enumerate_solutions, exhaustive_instances, probe_corecursive,
                     probe_recursive, random_instance, run_campaign)


def fixture_path(name: str):
    """Path of a shipped fixture, e.g. ``fixture_path("tiny.json")``."""
    return files(__package__).joinpath("fixtures", name)


__version__ = "0.1.0"
