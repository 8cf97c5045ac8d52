"""Minimum Axiom Set instances and their compilation into knot diagrams."""

from .instance import (
    MasError,
    MasInstance,
    MasSyntaxError,
    Relation,
    closure,
    cycle2,
    double_instance,
    format_mas,
    hat,
    is_axiom_set,
    min_axiom_set,
    min_axiom_set_brute,
    parse_mas,
    preprocess,
)
from .reduction import GadgetLayout, build_reduction
from .witness import WitnessError, greedy_bigons, stuck_after, witness_untangling
