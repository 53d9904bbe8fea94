"""Coprime generation of finite groups and congruence classification of their presentations."""

__version__ = "0.1.0"

from .catalog import build, parse_spec
from .chartable import CharacterTable, dixon_table, frobenius_count, frobenius_sum, sum1_bound
from .cyclotomic import CycInt
from .group import PermGroup, canonical_pair, center, conjugacy_classes, generates
from .modular import (
    ClosureResult,
    ModularOrbit,
    PresentationClass,
    SL2Matrix,
    apply_generator,
    classify,
    congruence_closure,
    cusp_data,
    orbit_and_coset_table,
    paper_criterion,
    sl2_mod_index,
    sl2_order,
    stabilizer_generators,
)
from .ntheory import ppd
from .perm import Permutation, element_order, parse_cycles, parse_pair
from .triples import (
    TripleWitness,
    alternating_witness,
    nielsen_equivalent,
    search_coprime_pair,
    smooth_pair_check,
    verify_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
