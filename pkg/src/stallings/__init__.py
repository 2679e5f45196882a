"""Stallings graphs of subgroups of free groups: transversals, rank formulas and growth."""

from .coset_graph import (
    ActionGraph,
    CosetGraph,
    Folder,
    LazyCompletion,
    abelianization_graph,
    build_from_generators,
    core,
    cyclomatic_rank,
    finite_index,
    from_permutations,
)
from .errors import BudgetExceeded, InvalidInput, ParityError
from .growth import cogrowth, r_series, rank_growth, rho, transversal_series
from .membership import GwpInstance, contains, gwp_decide, rewrite
from .rank_formula import rank_estimate
from .transversal import Transversal, minimal_transversal, schreier_basis, spanning_transversal
from .words import Word

__all__ = [
    "ActionGraph", "BudgetExceeded", "CosetGraph", "Folder", "GwpInstance", "InvalidInput",
    "LazyCompletion", "ParityError", "Transversal", "Word", "abelianization_graph",
    "build_from_generators", "cogrowth", "contains", "core", "cyclomatic_rank", "finite_index",
    "from_permutations", "gwp_decide", "minimal_transversal", "r_series", "rank_estimate",
    "rank_growth", "rewrite", "rho", "schreier_basis", "spanning_transversal", "transversal_series",
]
