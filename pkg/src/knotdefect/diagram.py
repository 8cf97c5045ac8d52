"""Knot diagrams as rotation systems.

A crossing has four strand slots numbered 1..4 in clockwise order; slots 1
and 3 carry the overpass, 2 and 4 the underpass.  Internally a slot endpoint
``(v, s)`` is packed into a single integer ``4*v + (s - 1)`` so that slot
arithmetic is bit twiddling:

* opposite slot   ``c ^ 2``
* next slot       ``(c & ~3) | ((c + 1) & 3)``
* previous slot   ``(c & ~3) | ((c - 1) & 3)``

A diagram is a perfect matching ``adj`` on these endpoint codes.  A directed
edge is named by its tail code ``t``; its head is ``adj[t]``.  The face to the
right of ``t`` continues with the directed edge leaving the head crossing one
slot counterclockwise, i.e. ``prev_slot(adj[t])``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple


def code(v: int, s: int) -> int:
    return 4 * v + (s - 1)


def vertex_of(c: int) -> int:
    return c >> 2


def slot_of(c: int) -> int:
    return (c & 3) + 1


def opposite(c: int) -> int:
    return c ^ 2


def next_slot(c: int) -> int:
    return (c & ~3) | ((c + 1) & 3)


def prev_slot(c: int) -> int:
    return (c & ~3) | ((c - 1) & 3)


def is_over(c: int) -> bool:
    # slots 1 and 3 have even low bits
    return not (c & 1)


class Edge(NamedTuple):
    v1: int
    v2: int
    n1: int
    n2: int

    def normalized(self) -> "Edge":
        if (self.v1, self.n1) <= (self.v2, self.n2):
            return self
        return Edge(self.v2, self.v1, self.n2, self.n1)


class DirectedEdge(NamedTuple):
    tail: int
    head: int
    out_slot: int
    in_slot: int

    @property
    def tail_code(self) -> int:
        return code(self.tail, self.out_slot)


def directed(adj: Mapping[int, int], t: int) -> DirectedEdge:
    h = adj[t]
    return DirectedEdge(t >> 2, h >> 2, (t & 3) + 1, (h & 3) + 1)


class DiagramError(ValueError):
    pass


class NotAKnotError(DiagramError):
    """The knot walk closed before covering every edge."""


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Diagram:
    """Immutable knot diagram.

    ``adj`` maps each endpoint code to its partner.  ``outer`` is the tail
    code of a directed edge lying on the unbounded face, or ``None`` for the
    crossingless diagram U.  ``next_label`` is a watermark: labels handed out
    by insertion moves start there and the watermark only grows, so a label
    is never recycled along one history.
    """

    __slots__ = ("adj", "outer", "next_label", "_crossings", "_faces", "_overfull")

    def __init__(self, adj: Mapping[int, int], outer: int | None,
                 next_label: int | None = None, _overfull: tuple = ()):
        self.adj = adj
        self.outer = outer
        self._crossings = None
        self._faces = None
        self._overfull = _overfull
        if next_label is None:
            next_label = max(self.crossings) + 1 if self.crossings else 0
        self.next_label = next_label

    # construction

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], outer: tuple[int, int] | None = None,
                   next_label: int | None = None) -> "Diagram":
        adj: dict[int, int] = {}
        overfull = []
        for e in edges:
            v1, v2, n1, n2 = e
            a, b = code(v1, n1), code(v2, n2)
            if a in adj or b in adj or a == b:
                overfull.append(Edge(v1, v2, n1, n2))
                continue
            adj[a] = b
            adj[b] = a
        oc = None if outer is None else code(*outer)
        return cls(adj, oc, next_label, tuple(overfull))

    # basic queries

    @property
    def crossings(self) -> frozenset[int]:
        if self._crossings is None:
            self._crossings = frozenset(c >> 2 for c in self.adj)
        return self._crossings

    @property
    def n(self) -> int:
        return len(self.crossings)

    def is_unknot_diagram(self) -> bool:
        return not self.adj

    def edges(self) -> list[Edge]:
        out = []
        for a, b in self.adj.items():
            if a <= b:
                out.append(Edge(a >> 2, b >> 2, (a & 3) + 1, (b & 3) + 1))
        out.sort()
        return out

    def directed_edges(self) -> list[DirectedEdge]:
        return [directed(self.adj, t) for t in sorted(self.adj)]

    def face_tails(self) -> list[list[int]]:
        """Faces as lists of tail codes, each starting at its smallest code."""
        if self._faces is None:
            self._faces = _trace_faces(self.adj)
        return self._faces

    def face_of(self, t: int) -> list[int]:
        """Tail codes of the face to the right of directed edge ``t``."""
        adj = self.adj
        out = [t]
        c = prev_slot(adj[t])
        while c != t:
            out.append(c)
            c = prev_slot(adj[c])
        return out

    def outer_face(self) -> list[int]:
        return [] if self.outer is None else self.face_of(self.outer)

    def relabeled(self, mapping: Mapping[int, int]) -> "Diagram":
        adj = {4 * mapping[a >> 2] + (a & 3): 4 * mapping[b >> 2] + (b & 3)
               for a, b in self.adj.items()}
        outer = None if self.outer is None else 4 * mapping[self.outer >> 2] + (self.outer & 3)
        return Diagram(adj, outer)

    def with_outer(self, t: int | None) -> "Diagram":
        return Diagram(self.adj, t, self.next_label)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.adj == other.adj and self.outer == other.outer

    def __hash__(self):
        return hash((frozenset(self.adj.items()), self.outer))

    def __repr__(self):
        if not self.adj:
            return "Diagram(U)"
        marker = "" if self.outer is None else f", outer=({self.outer >> 2},{(self.outer & 3) + 1})"
        return f"Diagram(n={self.n}, edges={[tuple(e) for e in self.edges()]}{marker})"


def _trace_faces(adj: Mapping[int, int]) -> list[list[int]]:
    seen = set()
    faces = []
    for t in sorted(adj):
        if t in seen:
            continue
        face = []
        c = t
        while c not in seen:
            seen.add(c)
            face.append(c)
            h = adj.get(c)
            if h is None:
                raise DiagramError(f"slot ({c >> 2},{(c & 3) + 1}) has no edge")
            c = prev_slot(h)
            if c not in adj:
                raise DiagramError(f"slot ({c >> 2},{(c & 3) + 1}) has no successor edge")
        if c != t:
            raise DiagramError("face successor is not a permutation")
        faces.append(face)
    return faces


UNKNOT = Diagram({}, None, 0)


def unknot(next_label: int = 0) -> Diagram:
    return Diagram({}, None, next_label)


# validation

@dataclass
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.problems)


def validate(d: Diagram) -> ValidationReport:
    """Check every structural invariant; the report lists failures in a fixed order."""
    problems: list[str] = []
    adj = d.adj
    if not adj:
        if d._overfull:
            problems.append("slot-coverage: edges present but no usable slots")
        if d.outer is not None:
            problems.append("outer-marker: U must not carry an outer marker")
        return ValidationReport(not problems, problems)

    crossings = sorted(d.crossings)
    n = len(crossings)
    missing = [(v, s) for v in crossings for s in (1, 2, 3, 4) if code(v, s) not in adj]
    bad_pair = [t for t, h in adj.items() if adj.get(h) != t]
    coverage_ok = not missing and not bad_pair and not d._overfull
    if not coverage_ok:
        parts = []
        if missing:
            parts.append("uncovered " + " ".join(f"({v},{s})" for v, s in missing))
        if d._overfull:
            parts.append("covered twice by " + " ".join(f"[{e.v1},{e.v2},{e.n1},{e.n2}]" for e in d._overfull))
        if bad_pair:
            parts.append("asymmetric matching")
        problems.append("slot-coverage: " + "; ".join(parts))

    n_edges = len(adj) // 2 + len(d._overfull)
    if n_edges != 2 * n:
        problems.append(f"edge-count: {n_edges} edges for {n} crossings, expected {2 * n}")

    if coverage_ok:
        walk_len = _walk_length(adj, min(adj))
        if walk_len != 2 * n:
            problems.append(f"knot-walk: closed after {walk_len} of {2 * n} edges")
        faces = _trace_faces(adj)
        if len(faces) != n + 2:
            problems.append(f"euler: {len(faces)} faces, expected {n + 2}")
        if d.outer is None:
            problems.append("outer-marker: missing")
        elif d.outer not in adj:
            problems.append("outer-marker: names a slot that is not in the diagram")
    else:
        if d.outer is None:
            problems.append("outer-marker: missing")
    return ValidationReport(not problems, problems)


def _walk_length(adj: Mapping[int, int], start: int) -> int:
    t = start
    steps = 0
    while True:
        steps += 1
        t = adj[t] ^ 2
        if t == start:
            return steps
        if steps > len(adj):
            return steps


def compute_faces(d: Diagram) -> list[tuple[DirectedEdge, ...]]:
    """Faces of ``d`` as cyclic tuples of directed edges.  U has one implicit face."""
    if not d.adj:
        return [()]
    return [tuple(directed(d.adj, t) for t in f) for f in d.face_tails()]


def knot_walk(d: Diagram, start: tuple[int, int] | None = None) -> list[DirectedEdge]:
    """Follow the strand through every crossing (enter slot s, leave slot s+2)."""
    adj = d.adj
    if not adj:
        return []
    t0 = min(adj) if start is None else code(*start)
    out = []
    t = t0
    while True:
        out.append(directed(adj, t))
        t = adj[t] ^ 2
        if t == t0:
            break
    if len(out) != len(adj) // 2:
        raise NotAKnotError(f"walk closed after {len(out)} of {len(adj) // 2} edges")
    return out


# canonical form

def canonical_form(d: Diagram, marked: Iterable[int] | None = None) -> bytes:
    """Relabeling-invariant key; equal keys iff isomorphic with the same outer face.

    A traversal is started from every directed edge of the outer face.  At
    each crossing the only admissible symmetry is the half turn (slot
    s -> s+2), which keeps clockwise order and over/under roles; the half
    turn is fixed by where the crossing is first entered.  When ``marked`` is
    given, membership of each crossing is appended so (diagram, set) pairs
    can be keyed as one state.
    """
    adj = d.adj
    if not adj:
        return b"U"
    marked = frozenset(marked) if marked is not None else None
    best = None
    for start in d.outer_face():
        enc = _encode_from(adj, start, marked)
        if best is None or enc < best:
            best = enc
    return bytes(best)


def _encode_from(adj: Mapping[int, int], start: int, marked) -> list[int]:
    # label[v] = new index, rot[v] = low-bit offset (0 or 2) to subtract
    label = {start >> 2: 0}
    rot = {start >> 2: (start & 3) & 2}
    order = [start >> 2]
    # the parity of the start slot pins the start edge itself
    out: list[int] = [start & 1]
    i = 0
    while i < len(order):
        v = order[i]
        r = rot[v]
        base = 4 * v
        for k in range(4):
            h = adj[base + ((k + r) & 3)]
            w = h >> 2
            if w not in label:
                label[w] = len(order)
                rot[w] = (h & 3) & 2
                order.append(w)
            lw = label[w]
            cs = ((h & 3) - rot[w]) & 3
            out.append(lw & 0xFF)
            out.append((lw >> 8) & 0xFF)
            out.append((lw >> 16) & 0xFF)
            out.append(cs)
        if marked is not None:
            out.append(1 if v in marked else 0)
        i += 1
    return out


def canonical_relabel(d: Diagram) -> Diagram:
    """Compact labels to 0..n-1 in sorted order (used for serialization)."""
    mapping = {v: i for i, v in enumerate(sorted(d.crossings))}
    return d.relabeled(mapping)


# text format

def serialize_diagram(d: Diagram) -> str:
    lines = ["diagram v1"]
    if not d.adj:
        lines.append("crossings 0")
        return "\n".join(lines) + "\n"
    c = canonical_relabel(d)
    lines.append(f"crossings {c.n}")
    for e in c.edges():
        lines.append(f"edge {e.v1} {e.n1} {e.v2} {e.n2}")
    if c.outer is not None:
        lines.append(f"outer {c.outer >> 2} {(c.outer & 3) + 1}")
    return "\n".join(lines) + "\n"


def _tokens(text: str) -> Iterator[tuple[int, list[str]]]:
    for i, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield i, body


def _int(tok: str, line: int, lo: int | None = None, hi: int | None = None, what="value") -> int:
    try:
        val = int(tok)
    except ValueError:
        raise DiagramSyntaxError(f"expected integer {what}, got {tok!r}", line) from None
    if (lo is not None and val < lo) or (hi is not None and val > hi):
        raise DiagramSyntaxError(f"{what} {val} out of range", line)
    return val


def parse_diagram(text: str, check: bool = True) -> Diagram:
    """Parse the ``.knot`` format.  Semantic problems raise with the validation report."""
    rows = list(_tokens(text))
    if not rows or rows[0][1] != ["diagram", "v1"]:
        raise DiagramSyntaxError("expected header 'diagram v1'", rows[0][0] if rows else 1)
    if len(rows) < 2 or rows[1][1][0] != "crossings" or len(rows[1][1]) != 2:
        raise DiagramSyntaxError("expected 'crossings <n>'", rows[1][0] if len(rows) > 1 else 2)
    n = _int(rows[1][1][1], rows[1][0], 0, what="crossing count")
    edges = []
    outer = None
    for line, toks in rows[2:]:
        if toks[0] == "edge":
            if len(toks) != 5:
                raise DiagramSyntaxError("edge takes 4 fields", line)
            v1 = _int(toks[1], line, 0, n - 1, "crossing")
            s1 = _int(toks[2], line, 1, 4, "slot")
            v2 = _int(toks[3], line, 0, n - 1, "crossing")
            s2 = _int(toks[4], line, 1, 4, "slot")
            if outer is not None:
                raise DiagramSyntaxError("edge after outer line", line)
            edges.append((v1, v2, s1, s2))
        elif toks[0] == "outer":
            if len(toks) != 3 or outer is not None:
                raise DiagramSyntaxError("malformed or repeated outer line", line)
            outer = (_int(toks[1], line, 0, n - 1, "crossing"), _int(toks[2], line, 1, 4, "slot"))
        else:
            raise DiagramSyntaxError(f"unknown directive {toks[0]!r}", line)
    if n == 0:
        if edges or outer is not None:
            raise DiagramSyntaxError("U takes no edge or outer lines", rows[2][0])
        return unknot()
    d = Diagram.from_edges(edges, outer, next_label=n)
    if check:
        rep = validate(d)
        if not rep.ok:
            raise DiagramError("invalid diagram: " + "; ".join(rep.problems))
    return d


# fixtures

def figure_example() -> Diagram:
    """Two crossings x=0, y=1 with a bigon and two kinks; outer on the 4-edge face."""
    return Diagram.from_edges([(0, 0, 3, 4), (0, 1, 1, 1), (1, 1, 2, 3), (0, 1, 2, 4)], outer=(0, 4))


def single_kink() -> Diagram:
    """One crossing with two loops; the outer face is the two-edge face."""
    return Diagram.from_edges([(0, 0, 1, 2), (0, 0, 3, 4)], outer=(0, 2))


# random generation

INSERTION_KINDS = ("I+", "II+", "III")


def generate_random_unknot(seed: int, steps: int, mode: str = "uniform",
                           kinds: Iterable[str] = INSERTION_KINDS,
                           return_moves: bool = False):
    """Apply ``steps`` random feasible insertion or III moves to U.

    ``mode="uniform"`` draws uniformly from the enumerated feasible moves of
    the allowed kinds.  ``mode="local"`` avoids full enumeration (needed for
    very large diagrams): it picks a random directed edge and, for II+, a
    random partner on the same face.
    """
    from . import moves as mv

    rng = random.Random(seed)
    kinds = tuple(kinds)
    d = unknot()
    history = []
    for _ in range(steps):
        if mode == "uniform":
            m = mv.random_uniform_move(d, rng, kinds)
        elif mode == "local":
            m = mv.random_local_move(d, rng, kinds)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        d = mv.apply_move(d, m)
        history.append(m)
    return (d, history) if return_moves else d
