"""Reidemeister moves on rotation-system diagrams.

Removal moves and the triangle move are named by the crossings they touch.
Insertion moves are named by directed edges, given as ``(crossing, slot)`` of
the edge's tail, or ``None`` for the single strand of U.

The strand of U is oriented so that the unbounded region lies on its right,
which is also the side where insertion moves act.  That gives exactly two
I+ moves and two II+ moves on U.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import ClassVar, Iterable, Sequence, Union

from .diagram import (
    Diagram,
    code,
    is_over,
    next_slot,
    prev_slot,
    unknot,
)

Tail = Union[tuple, None]


class InfeasibleMoveError(ValueError):
    def __init__(self, message: str, reason: str = "infeasible", index: int | None = None):
        self.reason = reason
        self.index = index
        super().__init__(message)


def _tail_key(e):
    return (-1, -1) if e is None else tuple(e)


@dataclass(frozen=True)
class IMinus:
    x: int
    kind: ClassVar[str] = "I-"
    weight: ClassVar[int] = 1

    def key(self):
        return (self.weight, (self.x,))

    def crossings(self):
        return (self.x,)


@dataclass(frozen=True)
class IIMinus:
    x: int
    y: int
    kind: ClassVar[str] = "II-"
    weight: ClassVar[int] = 0

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("II- needs two distinct crossings")
        if self.x > self.y:
            a, b = self.y, self.x
            object.__setattr__(self, "x", a)
            object.__setattr__(self, "y", b)

    def key(self):
        return (self.weight, (self.x, self.y))

    def crossings(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class III:
    """Triangle move on three crossings.

    ``turn`` is only set when two triangles share the same crossings (the
    three crossing shadow of the trefoil): ``"+"`` picks the face that visits
    them in increasing cyclic order, ``"-"`` the other one.
    """

    x: int
    y: int
    z: int
    turn: str | None = None
    kind: ClassVar[str] = "III"
    weight: ClassVar[int] = 2

    def __post_init__(self):
        t = sorted((self.x, self.y, self.z))
        if len(set(t)) != 3:
            raise ValueError("III needs three distinct crossings")
        if self.turn not in (None, "+", "-"):
            raise ValueError("III turn must be +, - or None")
        for name, val in zip("xyz", t):
            object.__setattr__(self, name, val)

    def key(self):
        return (self.weight, (self.x, self.y, self.z, self.turn or ""))

    def crossings(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class IPlus:
    e: Tail
    sign: str = "+"
    kind: ClassVar[str] = "I+"
    weight: ClassVar[int] = 3

    def __post_init__(self):
        if self.sign not in "+-" or len(self.sign) != 1:
            raise ValueError("sign must be '+' or '-'")
        if self.e is not None:
            object.__setattr__(self, "e", tuple(self.e))

    def key(self):
        return (self.weight, (_tail_key(self.e), self.sign))

    def crossings(self):
        return () if self.e is None else (self.e[0],)


@dataclass(frozen=True)
class IIPlus:
    e: Tail
    f: Tail
    winding: str = "+"
    order: int = 1
    kind: ClassVar[str] = "II+"
    weight: ClassVar[int] = 4

    def __post_init__(self):
        if self.winding not in ("+", "-"):
            raise ValueError("winding must be '+' or '-'")
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        for name in ("e", "f"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, tuple(val))
        if self.e != self.f and self.order != 1:
            object.__setattr__(self, "order", 1)

    def key(self):
        return (self.weight, (_tail_key(self.e), _tail_key(self.f), self.winding, self.order))

    def crossings(self):
        return tuple(t[0] for t in (self.e, self.f) if t is not None)


Move = Union[IMinus, IIMinus, III, IPlus, IIPlus]
MOVE_TYPES = (IIMinus, IMinus, III, IPlus, IIPlus)


def weight(m: Move) -> int:
    return m.weight


def move_sort_key(m: Move):
    return m.key()


# text syntax

def format_move(m: Move) -> str:
    if isinstance(m, IMinus):
        return f"I- {m.x}"
    if isinstance(m, IIMinus):
        return f"II- {m.x} {m.y}"
    if isinstance(m, III):
        return f"III {m.x} {m.y} {m.z}" + (f" {m.turn}" if m.turn else "")
    if isinstance(m, IPlus):
        e = "U" if m.e is None else f"{m.e[0]} {m.e[1]}"
        return f"I+ {e} {m.sign}"
    if isinstance(m, IIPlus):
        e = "U" if m.e is None else f"{m.e[0]} {m.e[1]}"
        f = "U" if m.f is None else f"{m.f[0]} {m.f[1]}"
        return f"II+ {e} {f} {m.winding} {m.order}"
    raise TypeError(f"not a move: {m!r}")


class MoveSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_move(text: str, line: int | None = None) -> Move:
    toks = text.split()
    if not toks:
        raise MoveSyntaxError("empty move", line)

    def num(tok):
        try:
            val = int(tok)
        except ValueError:
            raise MoveSyntaxError(f"expected integer, got {tok!r}", line) from None
        if val < 0:
            raise MoveSyntaxError(f"negative label {val}", line)
        return val

    def slot(tok):
        val = num(tok)
        if not 1 <= val <= 4:
            raise MoveSyntaxError(f"slot {val} out of range", line)
        return val

    def sign(tok):
        if tok not in ("+", "-"):
            raise MoveSyntaxError(f"expected + or -, got {tok!r}", line)
        return tok

    def tails(rest, count):
        out = []
        i = 0
        for _ in range(count):
            if i < len(rest) and rest[i] == "U":
                out.append(None)
                i += 1
            else:
                if i + 1 >= len(rest):
                    raise MoveSyntaxError("truncated edge", line)
                out.append((num(rest[i]), slot(rest[i + 1])))
                i += 2
        return out, rest[i:]

    head, rest = toks[0], toks[1:]
    try:
        if head == "I-" and len(rest) == 1:
            return IMinus(num(rest[0]))
        if head == "II-" and len(rest) == 2:
            return IIMinus(num(rest[0]), num(rest[1]))
        if head == "III" and len(rest) in (3, 4):
            turn = sign(rest[3]) if len(rest) == 4 else None
            return III(*(num(t) for t in rest[:3]), turn)
        if head == "I+":
            (e,), rest = tails(rest, 1)
            if len(rest) == 1:
                return IPlus(e, sign(rest[0]))
        if head == "II+":
            (e, f), rest = tails(rest, 2)
            if (e is None) != (f is None):
                raise MoveSyntaxError("U token must be used for both edges", line)
            if len(rest) == 2:
                o = num(rest[1])
                if o not in (1, 2):
                    raise MoveSyntaxError("order must be 1 or 2", line)
                return IIPlus(e, f, sign(rest[0]), o)
    except ValueError as exc:
        if isinstance(exc, MoveSyntaxError):
            raise
        raise MoveSyntaxError(str(exc), line) from None
    raise MoveSyntaxError(f"cannot parse move {text.strip()!r}", line)


def parse_moves(text: str) -> list[Move]:
    out = []
    for i, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(parse_move(body, i))
    return out


def format_moves(ms: Iterable[Move]) -> str:
    return "".join(format_move(m) + "\n" for m in ms)


# local face searches

def _monogon(d: Diagram, x: int) -> int | None:
    adj = d.adj
    for a in range(4):
        c = 4 * x + a
        if adj.get(c) == next_slot(c) and d.outer != c:
            return c
    return None


def _bigon_ok(d: Diagram, t: int, t2: int) -> bool:
    adj = d.adj
    h, h2 = adj[t], adj[t2]
    k1 = is_over(t) + is_over(h)
    k2 = is_over(t2) + is_over(h2)
    return {k1, k2} == {0, 2} and d.outer not in (t, t2)


def _bigon(d: Diagram, x: int, y: int) -> tuple[int, int] | None:
    adj = d.adj
    for a in range(4):
        t = 4 * x + a
        h = adj.get(t)
        if h is None or h >> 2 != y:
            continue
        t2 = prev_slot(h)
        h2 = adj[t2]
        if h2 >> 2 != x or prev_slot(h2) != t:
            continue
        if _bigon_ok(d, t, t2):
            return t, t2
    return None


# Over/under patterns of a triangle face that admit the triangle move.  The
# key is the slot (1..4) at which each of the three face edges arrives, in
# face order; the leaving slot of the next edge is one less.  Admissible
# means one edge passes over at both ends, one is mixed and one passes under
# at both ends.  Derived once by exhaustive enumeration of the 64 patterns.
III_PATTERNS = frozenset({
    (1, 1, 2), (1, 1, 4), (1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 2, 4), (1, 3, 2), (1, 3, 4),
    (1, 4, 1), (1, 4, 2), (1, 4, 3), (1, 4, 4), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 1, 4),
    (2, 2, 1), (2, 2, 3), (2, 3, 1), (2, 3, 2), (2, 3, 3), (2, 3, 4), (2, 4, 1), (2, 4, 3),
    (3, 1, 2), (3, 1, 4), (3, 2, 1), (3, 2, 2), (3, 2, 3), (3, 2, 4), (3, 3, 2), (3, 3, 4),
    (3, 4, 1), (3, 4, 2), (3, 4, 3), (3, 4, 4), (4, 1, 1), (4, 1, 2), (4, 1, 3), (4, 1, 4),
    (4, 2, 1), (4, 2, 3), (4, 3, 1), (4, 3, 2), (4, 3, 3), (4, 3, 4), (4, 4, 1), (4, 4, 3),
})


def _triangle_ok(d: Diagram, t0: int) -> tuple[int, int, int] | None:
    """If the face right of ``t0`` is an admissible non-outer triangle, return its tails."""
    adj = d.adj
    h0 = adj[t0]
    t1 = prev_slot(h0)
    h1 = adj[t1]
    t2 = prev_slot(h1)
    h2 = adj[t2]
    if prev_slot(h2) != t0:
        return None
    if len({t0 >> 2, t1 >> 2, t2 >> 2}) != 3:
        return None
    if d.outer in (t0, t1, t2):
        return None
    if ((h0 & 3) + 1, (h1 & 3) + 1, (h2 & 3) + 1) not in III_PATTERNS:
        return None
    return t0, t1, t2


def _turn(tri) -> str:
    a, b, c = (t >> 2 for t in tri)
    return "+" if (a < b < c or b < c < a or c < a < b) else "-"


def _triangles(d: Diagram, xs: Sequence[int]) -> list[tuple[int, int, int]]:
    """Admissible triangles on exactly the crossings ``xs``; at most two."""
    adj = d.adj
    want = set(xs)
    x = min(xs)
    out = []
    for a in range(4):
        t0 = 4 * x + a
        if t0 not in adj:
            return []
        tri = _triangle_ok(d, t0)
        if tri and {t >> 2 for t in tri} == want:
            out.append(tri)
    return out


def _triangle(d: Diagram, xs: Sequence[int], turn: str | None = None) -> tuple[int, int, int] | None:
    tris = _triangles(d, xs)
    if turn is not None:
        tris = [t for t in tris if _turn(t) == turn]
    return tris[0] if len(tris) == 1 else None


def _iii_move(d: Diagram, tri) -> III:
    cs = [t >> 2 for t in tri]
    return III(*cs, _turn(tri) if len(_triangles(d, cs)) > 1 else None)


def _face_contains(d: Diagram, t: int, u: int) -> bool:
    adj = d.adj
    c = t
    while True:
        if c == u:
            return True
        c = prev_slot(adj[c])
        if c == t:
            return False


# feasibility

def check_move(d: Diagram, m: Move) -> tuple[bool, str | None]:
    """``(True, None)`` if feasible, else ``(False, "absent" | "infeasible")``."""
    adj = d.adj
    cr = d.crossings
    if isinstance(m, IMinus):
        if m.x not in cr:
            return False, "absent"
        return (True, None) if _monogon(d, m.x) is not None else (False, "infeasible")
    if isinstance(m, IIMinus):
        if m.x not in cr or m.y not in cr:
            return False, "absent"
        return (True, None) if _bigon(d, m.x, m.y) is not None else (False, "infeasible")
    if isinstance(m, III):
        if not set(m.crossings()) <= cr:
            return False, "absent"
        return (True, None) if _triangle(d, m.crossings(), m.turn) is not None else (False, "infeasible")
    if isinstance(m, IPlus):
        if m.e is None:
            return (True, None) if not adj else (False, "absent")
        return (True, None) if code(*m.e) in adj else (False, "absent")
    if isinstance(m, IIPlus):
        if m.e is None or m.f is None:
            if m.e is None and m.f is None and not adj:
                return True, None
            return False, "absent"
        e, f = code(*m.e), code(*m.f)
        if e not in adj or f not in adj:
            return False, "absent"
        return (True, None) if _face_contains(d, e, f) else (False, "infeasible")
    raise TypeError(f"not a move: {m!r}")


def is_feasible(d: Diagram, m: Move) -> bool:
    return check_move(d, m)[0]


def normalize_move(d: Diagram, m: Move) -> Move:
    """Drop II+ components that do not change the result on ``d``."""
    if isinstance(m, IIPlus) and m.winding == "-":
        if m.e is None:
            return m
        if d.outer is None or not _face_contains(d, code(*m.e), d.outer):
            return IIPlus(m.e, m.f, "+", m.order)
    return m


# enumeration

def enumerate_moves(d: Diagram, kinds: Iterable[str] | None = None) -> list[Move]:
    """All feasible moves of ``d`` up to identity, sorted by weight then fields."""
    kinds = set(kinds) if kinds is not None else {"I-", "II-", "III", "I+", "II+"}
    adj = d.adj
    if not adj:
        out = []
        if "I+" in kinds:
            out += [IPlus(None, "+"), IPlus(None, "-")]
        if "II+" in kinds:
            out += [IIPlus(None, None, "+", 1), IIPlus(None, None, "-", 1)]
        return out
    faces = d.face_tails()
    outer = d.outer
    found = set()
    plus2 = []
    for face in faces:
        is_outer = outer in face if outer is not None else False
        size = len(face)
        if size == 1 and not is_outer and "I-" in kinds:
            found.add(IMinus(face[0] >> 2))
        elif size == 2 and not is_outer and "II-" in kinds:
            t, t2 = face
            if t >> 2 != t2 >> 2 and _bigon_ok(d, t, t2):
                found.add(IIMinus(t >> 2, t2 >> 2))
        elif size == 3 and not is_outer and "III" in kinds:
            tri = _triangle_ok(d, face[0])
            if tri:
                found.add(_iii_move(d, tri))
        if "II+" in kinds:
            windings = ("+", "-") if is_outer else ("+",)
            tails = [(t >> 2, (t & 3) + 1) for t in face]
            for e in tails:
                for f in tails:
                    orders = (1, 2) if e == f else (1,)
                    for w in windings:
                        for o in orders:
                            plus2.append(IIPlus(e, f, w, o))
    out = sorted(found, key=move_sort_key)
    if "I+" in kinds:
        for t in sorted(adj):
            e = (t >> 2, (t & 3) + 1)
            out.append(IPlus(e, "+"))
            out.append(IPlus(e, "-"))
    if plus2:
        plus2.sort(key=move_sort_key)
        out += plus2
    return out


def count_moves(d: Diagram) -> dict[str, int]:
    """Move counts per kind without materializing the II+ list."""
    counts = {"II-": 0, "I-": 0, "III": 0, "I+": 0, "II+": 0}
    if not d.adj:
        counts["I+"] = 2
        counts["II+"] = 2
        return counts
    for m in enumerate_moves(d, ("I-", "II-", "III")):
        counts[m.kind] += 1
    counts["I+"] = 2 * len(d.adj)
    for face in d.face_tails():
        size = len(face)
        counts["II+"] += (size * size + size) * (2 if d.outer in face else 1)
    return counts


# application

def _remove(d: Diagram, removed: set[int], link: dict[int, int]) -> Diagram:
    """Delete ``removed`` crossings, splicing strands through ``link``.

    ``link`` pairs the slots of removed crossings that become joined once the
    crossings are gone.  Each surviving endpoint attached to a removed
    crossing follows link/edge alternations until it reaches another
    surviving endpoint.
    """
    adj = d.adj
    new = dict(adj)
    for x in removed:
        for a in range(4):
            new.pop(4 * x + a, None)
    chain_of: dict[int, int] = {}
    for x in removed:
        for a in range(4):
            p = adj[4 * x + a]
            if p >> 2 in removed:
                continue
            # p is a surviving terminal whose partner is a port
            cur = 4 * x + a
            chain_of[p] = p
            while True:
                q = link[cur]
                chain_of[q] = p
                r = adj[q]
                if r >> 2 not in removed:
                    new[p] = r
                    new[r] = p
                    break
                cur = r
    if not new:
        return unknot(d.next_label)
    outer = d.outer
    if outer is None or outer >> 2 in removed:
        outer = None
        for u in d.outer_face():
            if u >> 2 not in removed:
                outer = u
                break
            if u in chain_of:
                outer = chain_of[u]
                break
        if outer is None:
            # the old outer face lay entirely inside the move; any face of the
            # spliced curve is as good a guess as another
            outer = min(new)
    return Diagram(new, outer, d.next_label)


def _apply_iminus(d: Diagram, x: int) -> Diagram:
    c = _monogon(d, x)
    c1 = next_slot(c)
    link = {c ^ 2: c1 ^ 2, c1 ^ 2: c ^ 2}
    return _remove(d, {x}, link)


def _apply_iiminus(d: Diagram, x: int, y: int) -> Diagram:
    t, t2 = _bigon(d, x, y)
    adj = d.adj
    h, h2 = adj[t], adj[t2]
    link = {t ^ 2: h ^ 2, h ^ 2: t ^ 2, t2 ^ 2: h2 ^ 2, h2 ^ 2: t2 ^ 2}
    return _remove(d, {x, y}, link)


def _apply_iii(d: Diagram, tri: tuple[int, int, int]) -> Diagram:
    adj = d.adj
    phi = {}
    triangle = set()
    pairs = []
    for t in tri:
        h = adj[t]
        phi[t ^ 2] = h
        phi[h ^ 2] = t
        triangle.update((t, h))
        pairs.append((t ^ 2, h ^ 2))
    new = dict(adj)
    for p in phi:
        q = adj[p]
        new[phi[p]] = phi.get(q, q)
        new[phi.get(q, q)] = phi[p]
    for a, b in pairs:
        new[a] = b
        new[b] = a
    outer = d.outer
    if outer is not None and outer >> 2 in {t >> 2 for t in tri}:
        for u in d.outer_face():
            if u not in triangle:
                outer = phi.get(u, u)
                break
    return Diagram(new, outer, d.next_label)


def _apply_iplus(d: Diagram, e, sign: str) -> Diagram:
    c = d.next_label
    i = 0 if sign == "+" else 1
    s = [4 * c + ((i + k) & 3) for k in range(4)]
    new = dict(d.adj)
    new[s[2]] = s[3]
    new[s[3]] = s[2]
    if e is None:
        new[s[1]] = s[0]
        new[s[0]] = s[1]
        return Diagram(new, s[1], c + 1)
    t = code(*e)
    h = d.adj[t]
    new[t] = s[0]
    new[s[0]] = t
    new[s[1]] = h
    new[h] = s[1]
    return Diagram(new, d.outer, c + 1)


def _apply_iiplus(d: Diagram, m: IIPlus) -> Diagram:
    cl, cr = d.next_label, d.next_label + 1
    L = [4 * cl + k for k in range(4)]
    R = [4 * cr + k for k in range(4)]
    new = dict(d.adj)

    def join(a, b):
        new[a] = b
        new[b] = a

    if m.e is None:
        join(L[2], R[0])
        join(R[1], L[1])
        join(R[2], R[3])
        join(L[3], L[0])
        outer_face = True
    else:
        e, f = code(*m.e), code(*m.f)
        he, hf = d.adj[e], d.adj[f]
        outer_face = d.outer is not None and _face_contains(d, e, d.outer)
        if e != f:
            join(e, L[0])
            join(L[2], R[0])
            join(R[2], he)
            join(f, R[3])
            join(R[1], L[1])
            join(L[3], hf)
        elif m.order == 1:
            join(e, L[0])
            join(L[2], R[0])
            join(R[2], R[3])
            join(R[1], L[1])
            join(L[3], he)
        else:
            join(e, R[3])
            join(R[1], L[1])
            join(L[3], L[0])
            join(L[2], R[0])
            join(R[2], he)
    outer = d.outer
    if outer_face:
        outer = new[L[0]] if m.winding == "+" else new[R[3]]
    return Diagram(new, outer, cr + 1)


def apply_move(d: Diagram, m: Move) -> Diagram:
    """Return D(m).  Raises :class:`InfeasibleMoveError` if ``m`` is not feasible."""
    ok, reason = check_move(d, m)
    if not ok:
        raise InfeasibleMoveError(f"{format_move(m)} is {reason} in this diagram", reason)
    if isinstance(m, IIMinus):
        return _apply_iiminus(d, m.x, m.y)
    if isinstance(m, IMinus):
        return _apply_iminus(d, m.x)
    if isinstance(m, III):
        return _apply_iii(d, _triangle(d, m.crossings(), m.turn))
    if isinstance(m, IPlus):
        return _apply_iplus(d, m.e, m.sign)
    return _apply_iiplus(d, m)


def apply_sequence(d: Diagram, ms: Sequence[Move]) -> Diagram:
    """Left fold of :func:`apply_move`; the error carries the failing index."""
    for i, m in enumerate(ms):
        try:
            d = apply_move(d, m)
        except InfeasibleMoveError as exc:
            raise InfeasibleMoveError(f"step {i}: {exc}", exc.reason, i) from None
    return d


def trace_sequence(d: Diagram, ms: Sequence[Move]) -> list[Diagram]:
    out = [d]
    for m in ms:
        d = apply_move(d, m)
        out.append(d)
    return out


class NotAnUntanglingError(ValueError):
    pass


def sequence_defect(d: Diagram, ms: Sequence[Move]) -> int:
    """Defect ``2*len(ms) - n`` of an untangling, cross-checked against the weight sum."""
    end = apply_sequence(d, ms)
    if end.adj:
        raise NotAnUntanglingError(f"sequence ends with {end.n} crossings")
    defect = 2 * len(ms) - d.n
    total = sum(m.weight for m in ms)
    assert defect == total, f"defect {defect} differs from weight sum {total}"
    return defect


def created_crossings(d: Diagram, m: Move) -> tuple[int, ...]:
    """Labels an insertion move hands out when applied to ``d``."""
    if isinstance(m, IPlus):
        return (d.next_label,)
    if isinstance(m, IIPlus):
        return (d.next_label, d.next_label + 1)
    return ()


def inverse_move(d: Diagram, m: Move) -> Move:
    """The move that takes ``apply_move(d, m)`` back to ``d``; only for I+, II+ and III."""
    if isinstance(m, IPlus):
        return IMinus(d.next_label)
    if isinstance(m, IIPlus):
        return IIMinus(d.next_label, d.next_label + 1)
    if isinstance(m, III):
        tri = _triangle(d, m.crossings(), m.turn)
        if tri is None:
            raise InfeasibleMoveError(f"{format_move(m)} is infeasible in this diagram")
        e = _apply_iii(d, tri)
        # the new triangle sits on the slots facing away from the old one
        fresh = {t ^ 2 for t in tri} | {d.adj[t] ^ 2 for t in tri}
        (back,) = [t for t in _triangles(e, m.crossings()) if set(t) <= fresh]
        return _iii_move(e, back)
    raise ValueError(f"{format_move(m)} has no inverse here")


def effect_set(d: Diagram, m: Move) -> frozenset[int]:
    """Crossings removed (I-, II-) or created (I+, II+) by ``m``; empty for III."""
    if isinstance(m, (IMinus, IIMinus)):
        return frozenset(m.crossings())
    return frozenset(created_crossings(d, m))


# random sampling without full enumeration

def random_uniform_move(d: Diagram, rng: random.Random,
                        kinds: Sequence[str] = ("I+", "II+", "III")) -> Move:
    """Uniform draw from ``enumerate_moves(d, kinds)`` in linear time.

    The II+ moves are counted per face and only the drawn one is built.
    """
    kinds = tuple(kinds)
    if not d.adj:
        ms = enumerate_moves(d, kinds)
        return ms[rng.randrange(len(ms))]
    cheap = enumerate_moves(d, [k for k in kinds if k in ("I-", "II-", "III")])
    n_kink = 2 * len(d.adj) if "I+" in kinds else 0
    faces = d.face_tails() if "II+" in kinds else []
    sizes = [(len(f) ** 2 + len(f)) * (2 if d.outer in f else 1) for f in faces]
    r = rng.randrange(len(cheap) + n_kink + sum(sizes))
    if r < len(cheap):
        return cheap[r]
    r -= len(cheap)
    if r < n_kink:
        t = sorted(d.adj)[r >> 1]
        return IPlus((t >> 2, (t & 3) + 1), "+-"[r & 1])
    r -= n_kink
    for face, size in zip(faces, sizes):
        if r >= size:
            r -= size
            continue
        w = "+"
        if d.outer in face:
            w, r = "+-"[r & 1], r >> 1
        m = len(face)
        # pairs (e, f) with e != f, then each e twice for the two orders
        if r < m * m - m:
            i, j = divmod(r, m - 1)
            j += j >= i
            o = 1
        else:
            i, o = divmod(r - (m * m - m), 2)
            j, o = i, o + 1
        e, f = face[i], face[j]
        return IIPlus((e >> 2, (e & 3) + 1), (f >> 2, (f & 3) + 1), w, o)
    raise AssertionError("index past the move count")


def random_local_move(d: Diagram, rng: random.Random, kinds: Sequence[str] = ("I+", "II+", "III")) -> Move:
    adj = d.adj
    if not adj:
        choices = [k for k in kinds if k in ("I+", "II+")]
        kind = rng.choice(choices)
        if kind == "I+":
            return IPlus(None, rng.choice("+-"))
        return IIPlus(None, None, rng.choice("+-"), 1)
    keys = list(adj)
    for _ in range(64):
        kind = rng.choice(kinds)
        t = rng.choice(keys)
        e = (t >> 2, (t & 3) + 1)
        if kind == "I+":
            return IPlus(e, rng.choice("+-"))
        if kind == "II+":
            face = d.face_of(t)
            u = rng.choice(face)
            f = (u >> 2, (u & 3) + 1)
            m = IIPlus(e, f, rng.choice("+-"), rng.choice((1, 2)) if e == f else 1)
            return normalize_move(d, m)
        if kind == "III":
            tri = _triangle_ok(d, t)
            if tri:
                return _iii_move(d, tri)
    return IPlus((min(adj) >> 2, (min(adj) & 3) + 1), "+")
