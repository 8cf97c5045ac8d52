"""Explicit untanglings of compiled diagrams from axiom sets."""

from __future__ import annotations

import heapq
from typing import Iterable

from ..diagram import Diagram
from ..moves import IIMinus, IMinus, Move, _bigon, apply_move, sequence_defect
from .instance import MasError, closure_rounds, hat, is_axiom_set
from .reduction import GadgetLayout


class WitnessError(AssertionError):
    """The emitted sequence failed to replay; a construction bug."""


def greedy_bigons(d: Diagram, rank=None) -> tuple[Diagram, list[Move]]:
    """Apply bigon moves until none is left.

    ``rank`` maps a crossing to a priority (lower first); moves touching
    low-rank crossings are preferred.  Only the crossings next to a removed
    pair can gain a new bigon, so each step rechecks just those.
    """
    rank = rank or (lambda x: 0)
    heap = [(rank(x), x) for x in d.crossings]
    heapq.heapify(heap)
    moves = []
    while heap:
        _, x = heapq.heappop(heap)
        if x not in d.crossings:
            continue
        adj = d.adj
        partner = None
        for a in range(4):
            y = adj[4 * x + a] >> 2
            if y != x and _bigon(d, x, y) is not None:
                partner = y
                break
        if partner is None:
            continue
        near = {adj[4 * v + a] >> 2 for v in (x, partner) for a in range(4)} - {x, partner}
        m = IIMinus(x, partner)
        d = apply_move(d, m)
        moves.append(m)
        for v in near:
            heapq.heappush(heap, (rank(v), v))
    return d, moves


def witness_untangling(layout: GadgetLayout, a: Iterable[str]) -> list[Move]:
    """Untangling that spends one kink removal per sentence of ``a`` and its copy.

    ``a`` is an axiom set of the original instance.  The kinks at ``y(s)``
    and ``y(s')`` are removed first, in the order of ``a``; everything else
    is bigon moves, preferring sentences that the closure derives earlier.
    """
    base = layout.base
    a = list(dict.fromkeys(a))
    if base is None or not set(a) <= set(base.sentences):
        raise MasError("axioms must be sentences of the original instance")
    if not is_axiom_set(base, a):
        raise MasError(f"{sorted(a)} is not an axiom set")
    order = {}
    for r, new in enumerate(closure_rounds(base, a)):
        for s in new:
            order[s] = order[hat(s)] = r

    def rank(x):
        return min(order[o[1]] for o in layout.owners.get(x, ()) if o != "spine")

    d = layout.diagram
    moves: list[Move] = []
    for s in a:
        for t in (s, hat(s)):
            m = IMinus(layout.atlas[f"y({t})"])
            d = apply_move(d, m)
            moves.append(m)
    end, rest = greedy_bigons(d, rank)
    moves += rest
    if end.n:
        raise WitnessError(f"untangling got stuck with {end.n} crossings left")
    if sequence_defect(layout.diagram, moves) != 2 * len(a):
        raise WitnessError("defect differs from twice the axiom count")
    return moves


def stuck_after(layout: GadgetLayout, a: Iterable[str]) -> int:
    """Crossings left when the kinks of ``a`` are removed and bigons run out.

    Zero exactly when the kink removals for ``a`` suffice, i.e. for axiom sets.
    """
    d = layout.diagram
    for s in a:
        for t in (s, hat(s)):
            d = apply_move(d, IMinus(layout.atlas[f"y({t})"]))
    return greedy_bigons(d)[0].n
