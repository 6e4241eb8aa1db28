"""Exact maximum agreement / compatible supertrees for few, bounded-degree trees."""

from .estimator import MaximumAgreementSupertree, MaximumCompatibleSupertree
from .masp import MaspSolver, masp_rooted, masp_unrooted, reconstruct_masp, solve_masp
from .mcsp import McspSolver, mcsp_rooted, mcsp_unrooted, reconstruct_mcsp, solve_mcsp
from .result import InfeasibleInputError, SupertreeResult
from .trees import (
    LabelUniverse,
    NewickError,
    ProblemInstance,
    RootedTree,
    UnrootedTree,
    equals_canonical,
    is_agreement_supertree,
    is_compatible_supertree,
    parse_instance,
    parse_newick,
    read_instance,
    refines,
    restrict,
    root_at,
    unroot,
    write_newick,
)
from .validation import check_trees

__version__ = "0.1.0"
