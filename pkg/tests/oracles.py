"""Reference computations written independently of the package internals.

Each helper here recomputes something the package also computes, by a
different route, so tests can compare the two.
"""

from __future__ import annotations

from itertools import combinations

from knotdefect.moves import III, IIMinus, IMinus, is_feasible


# faces via permutations

def faces_by_permutation(edges):
    """Face count of a rotation system given as (v1, v2, s1, s2) edge tuples.

    Darts are (v, s).  ``alpha`` swaps the two darts of an edge, ``sigma``
    turns one slot backwards around a crossing; faces are cycles of
    ``sigma o alpha``.
    """
    alpha = {}
    for v1, v2, s1, s2 in edges:
        alpha[(v1, s1)] = (v2, s2)
        alpha[(v2, s2)] = (v1, s1)

    def phi(dart):
        v, s = alpha[dart]
        return (v, 4 if s == 1 else s - 1)

    seen = set()
    count = 0
    for dart in alpha:
        if dart in seen:
            continue
        count += 1
        while dart not in seen:
            seen.add(dart)
            dart = phi(dart)
    return count


def strand_components(edges):
    """Number of closed strands when every crossing is passed straight through."""
    alpha = {}
    for v1, v2, s1, s2 in edges:
        alpha[(v1, s1)] = (v2, s2)
        alpha[(v2, s2)] = (v1, s1)
    seen = set()
    comps = 0
    for dart in alpha:
        if dart in seen:
            continue
        comps += 1
        cur = dart
        while cur not in seen:
            seen.add(cur)
            v, s = alpha[cur]
            seen.add((v, s))
            cur = (v, (s + 1) % 4 + 1)
    return comps


# triangle rule

def iii_rule_patterns():
    """Arrival-slot triples of a triangle face admitting the triangle move.

    Edge i arrives at its head in slot ``a[i]``; the next face edge leaves
    that crossing from the slot just before it.  Odd slots are over.  The
    move is admissible when the edges pass over at both ends, at one end
    and at no end, one each.
    """
    out = set()
    for a in ((p, q, r) for p in range(1, 5) for q in range(1, 5) for r in range(1, 5)):
        leave = [(a[i - 1] - 2) % 4 + 1 for i in range(3)]
        counts = sorted((leave[i] % 2) + (a[i] % 2) for i in range(3))
        if counts == [0, 1, 2]:
            out.add(a)
    return frozenset(out)


# move scanning

def naive_removal_moves(d):
    """I-, II- and III moves by checking every crossing subset."""
    xs = sorted(d.crossings)
    out = set()
    for x in xs:
        if is_feasible(d, IMinus(x)):
            out.add(IMinus(x))
    for x, y in combinations(xs, 2):
        if is_feasible(d, IIMinus(x, y)):
            out.add(IIMinus(x, y))
    for t in combinations(xs, 3):
        if is_feasible(d, III(*t)):
            out.add(III(*t))
        else:
            # two triangles on one triple need the orientation to tell them apart
            out |= {m for m in (III(*t, "+"), III(*t, "-")) if is_feasible(d, m)}
    return out


# axiom sets

def horn_closure(sentences, relations, start):
    """Forward chaining with premise counters (linear-time Horn propagation)."""
    missing = [len(set(p)) for p, _ in relations]
    watch = {s: [] for s in sentences}
    for i, (p, _) in enumerate(relations):
        for s in set(p):
            watch[s].append(i)
    have = set()
    queue = list(start)
    for i, (p, t) in enumerate(relations):
        if missing[i] == 0:
            queue.append(t)
    while queue:
        s = queue.pop()
        if s in have:
            continue
        have.add(s)
        for i in watch[s]:
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(relations[i][1])
    return have


def min_axioms_oracle(sentences, relations):
    for size in range(len(sentences) + 1):
        for a in combinations(sentences, size):
            if horn_closure(sentences, relations, a) == set(sentences):
                return size
    raise AssertionError("unreachable")
