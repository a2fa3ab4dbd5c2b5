"""Absolute central automorphisms of finite p-groups, computed from Cayley tables."""
from .abelian import AbelianInvariants, abelian_invariants, brute_force_homs, hom_invariants, hom_order, rank
from .automorphisms import (
    Automorphism,
    AutomorphismSet,
    absolute_central_automorphisms,
    absolute_centre,
    autl_fixing_centre,
    autocommutator,
    automorphism_group,
    central_automorphisms,
    constrained_autl,
    inner_automorphisms,
    restricted_automorphisms,
)
from .config import RunConfig
from .constructions import builtin, builtin_corpus
from .core import Group, Subgroup, centre, derived_subgroup, quotient_group
from .kernels import BACKEND
from .theorems import Verdict, TheoremReport, analyse, census

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants", "Automorphism", "AutomorphismSet", "BACKEND", "Group", "RunConfig", "Subgroup",
    "TheoremReport", "Verdict", "abelian_invariants", "absolute_central_automorphisms", "absolute_centre",
    "analyse", "autl_fixing_centre", "autocommutator", "automorphism_group", "brute_force_homs", "builtin",
    "builtin_corpus", "census", "central_automorphisms", "centre", "constrained_autl", "derived_subgroup",
    "hom_invariants", "hom_order", "inner_automorphisms", "quotient_group", "rank", "restricted_automorphisms",
]
