"""Rotation-system knot diagrams, Reidemeister moves and defect-bounded untangling."""

from .diagram import (
    Diagram,
    DirectedEdge,
    Edge,
    compute_faces,
    canonical_form,
    figure_example,
    generate_random_unknot,
    knot_walk,
    parse_diagram,
    serialize_diagram,
    single_kink,
    unknot,
    validate,
)
from .moves import (
    III,
    IIMinus,
    IIPlus,
    IMinus,
    IPlus,
    apply_move,
    apply_sequence,
    enumerate_moves,
    format_move,
    is_feasible,
    parse_move,
    sequence_defect,
    weight,
)

__version__ = "0.1.0"
