"""Defect-bounded untangling.

Three deciders share one search skeleton:

* :func:`untangle_brute` tries every feasible move (the oracle),
* :func:`untangle_naive_greedy` fires a II- move whenever one exists and
  branches otherwise (sound but incomplete),
* :func:`untangle_special_greedy` guesses a set S of special crossings, fires
  greedy II- moves (those avoiding S) without branching and branches only on
  special moves.

Every yes answer carries a witness that is replayed and checked before it is
returned.  Hitting a node or time cap gives ``"unknown"``, never ``"no"``.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diagram import Diagram, canonical_form, code
from .moves import (
    III,
    IIMinus,
    IIPlus,
    IMinus,
    IPlus,
    Move,
    apply_move,
    check_move,
    effect_set,
    enumerate_moves,
    format_move,
    sequence_defect,
)

DEFAULT_MAX_NODES = 10**7

GREEDY = "greedy"
SPECIAL = "special"
NEITHER = "neither"


class SearchLimitExceeded(RuntimeError):
    pass


@dataclass
class SolveResult:
    answer: str
    k: int
    algo: str
    witness: list | None = None
    special: frozenset | None = None
    nodes: int = 0
    memo_hits: int = 0
    seconds: float = 0.0

    @property
    def yes(self) -> bool:
        return self.answer == "yes"

    def report(self) -> dict:
        out = {
            "answer": self.answer,
            "k": self.k,
            "algo": self.algo,
            "witness": None if self.witness is None else [format_move(m) for m in self.witness],
            "nodes": self.nodes,
            "memo_hits": self.memo_hits,
        }
        if self.special is not None:
            out["special"] = sorted(self.special)
        return out


class _Search:
    def __init__(self, max_nodes: int | None, max_seconds: float | None):
        self.max_nodes = DEFAULT_MAX_NODES if max_nodes is None else max_nodes
        self.deadline = None if max_seconds is None else time.perf_counter() + max_seconds
        self.nodes = 0
        self.memo_hits = 0
        self.t0 = time.perf_counter()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise SearchLimitExceeded(f"node cap {self.max_nodes} reached")
        if self.deadline is not None and not (self.nodes & 63) and time.perf_counter() > self.deadline:
            raise SearchLimitExceeded("time cap reached")

    def finish(self, answer, k, algo, witness=None, special=None) -> SolveResult:
        return SolveResult(answer, k, algo, witness, special, self.nodes, self.memo_hits,
                           time.perf_counter() - self.t0)


def _kinds_within(k: int) -> tuple[str, ...]:
    return tuple(kind for kind, w in (("II-", 0), ("I-", 1), ("III", 2), ("I+", 3), ("II+", 4)) if w <= k)


def _checked(d: Diagram, ms: list, k: int) -> list:
    defect = sequence_defect(d, ms)
    assert defect <= k, f"witness defect {defect} exceeds budget {k}"
    return ms


# brute force

def untangle_brute(d: Diagram, k: int, max_nodes: int | None = None,
                   max_seconds: float | None = None) -> SolveResult:
    """Exhaustive search over all feasible moves within budget ``k``."""
    search = _Search(max_nodes, max_seconds)
    if k < 0:
        return search.finish("no", k, "brute")
    failed: dict[bytes, int] = {}

    def dfs(d: Diagram, budget: int):
        if not d.adj:
            return []
        key = canonical_form(d)
        if failed.get(key, -1) >= budget:
            search.memo_hits += 1
            return None
        search.tick()
        for m in enumerate_moves(d, _kinds_within(budget)):
            sub = dfs(apply_move(d, m), budget - m.weight)
            if sub is not None:
                return [m] + sub
        failed[key] = max(budget, failed.get(key, -1))
        return None

    try:
        w = dfs(d, k)
    except SearchLimitExceeded:
        return search.finish("unknown", k, "brute")
    if w is None:
        return search.finish("no", k, "brute")
    return search.finish("yes", k, "brute", _checked(d, w, k))


def untangle_moves_budget(d: Diagram, k: int, max_nodes: int | None = None,
                          max_seconds: float | None = None) -> SolveResult:
    """Is there an untangling with at most ``k`` moves?"""
    search = _Search(max_nodes, max_seconds)
    if d.n > 2 * k:
        # each move removes at most two crossings
        return search.finish("no", k, "moves")
    failed: dict[bytes, int] = {}

    def dfs(d: Diagram, left: int):
        if not d.adj:
            return []
        if d.n > 2 * left:
            return None
        key = canonical_form(d)
        if failed.get(key, -1) >= left:
            search.memo_hits += 1
            return None
        search.tick()
        for m in enumerate_moves(d):
            if m.weight >= 3 and d.n + 2 > 2 * (left - 1):
                # an insertion leaves too many crossings for the remaining moves
                continue
            sub = dfs(apply_move(d, m), left - 1)
            if sub is not None:
                return [m] + sub
        failed[key] = max(left, failed.get(key, -1))
        return None

    try:
        w = dfs(d, k)
    except SearchLimitExceeded:
        return search.finish("unknown", k, "moves")
    if w is None:
        return search.finish("no", k, "moves")
    sequence_defect(d, w)
    return search.finish("yes", k, "moves", w)


# naive greedy

def first_ii_minus(d: Diagram, avoid: frozenset = frozenset()) -> IIMinus | None:
    """Lexicographically smallest feasible II- move avoiding ``avoid``."""
    for m in enumerate_moves(d, ("II-",)):
        if m.x not in avoid and m.y not in avoid:
            return m
    return None


def untangle_naive_greedy(d: Diagram, k: int, max_nodes: int | None = None,
                          max_seconds: float | None = None) -> SolveResult:
    """Fire any II- move eagerly, otherwise branch.  A no answer is not conclusive."""
    search = _Search(max_nodes, max_seconds)
    failed: dict[bytes, int] = {}

    def run(d: Diagram, budget: int):
        if budget < 0:
            return None
        if not d.adj:
            return []
        g = first_ii_minus(d)
        if g is not None:
            search.tick()
            sub = run(apply_move(d, g), budget)
            return None if sub is None else [g] + sub
        key = canonical_form(d)
        if failed.get(key, -1) >= budget:
            search.memo_hits += 1
            return None
        search.tick()
        for m in enumerate_moves(d, _kinds_within(budget)):
            sub = run(apply_move(d, m), budget - m.weight)
            if sub is not None:
                return [m] + sub
        failed[key] = max(budget, failed.get(key, -1))
        return None

    try:
        w = run(d, k)
    except SearchLimitExceeded:
        return search.finish("unknown", k, "naive")
    if w is None:
        return search.finish("no", k, "naive")
    return search.finish("yes", k, "naive", _checked(d, w, k))


# special / greedy calculus

@dataclass(frozen=True)
class SpecialState:
    d: Diagram
    s: frozenset
    budget: int = 0


def edge_endpoints(d: Diagram, e) -> tuple[int, ...]:
    if e is None:
        return ()
    t = code(*e)
    return (t >> 2, d.adj[t] >> 2)


def classify_move(st: SpecialState, m: Move) -> str:
    """Greedy, special or neither with respect to the special set ``st.s``."""
    ok, reason = check_move(st.d, m)
    if not ok:
        raise ValueError(f"{format_move(m)} is {reason}")
    s = st.s
    if isinstance(m, IIMinus):
        ins = (m.x in s) + (m.y in s)
        return GREEDY if ins == 0 else SPECIAL if ins == 2 else NEITHER
    if isinstance(m, (IMinus, III)):
        return SPECIAL if all(x in s for x in m.crossings()) else NEITHER
    if isinstance(m, IPlus):
        return SPECIAL if all(x in s for x in edge_endpoints(st.d, m.e)) else NEITHER
    if isinstance(m, IIPlus):
        ends = edge_endpoints(st.d, m.e) + edge_endpoints(st.d, m.f)
        return SPECIAL if all(x in s for x in ends) else NEITHER
    raise TypeError(m)


def state_after(st: SpecialState, m: Move) -> SpecialState:
    kind = classify_move(st, m)
    if kind == NEITHER:
        raise ValueError(f"{format_move(m)} is neither greedy nor special")
    s = st.s if kind == GREEDY else st.s ^ effect_set(st.d, m)
    return SpecialState(apply_move(st.d, m), frozenset(s), st.budget - m.weight)


def replay_special(d: Diagram, s: Iterable[int], ms: Sequence[Move]) -> list[tuple[str, SpecialState]]:
    """Walk ``ms`` from ``(d, s)``; raises if some move is neither greedy nor special."""
    st = SpecialState(d, frozenset(s), 0)
    out = []
    for m in ms:
        kind = classify_move(st, m)
        st = state_after(st, m)
        out.append((kind, st))
    return out


@dataclass
class SpecialSetParts:
    s1: frozenset
    s2: frozenset
    s3: frozenset

    @property
    def s(self) -> frozenset:
        return self.s1 | self.s2 | self.s3


def infer_special_parts(d: Diagram, ms: Sequence[Move]) -> SpecialSetParts:
    original = d.crossings
    s1: set[int] = set()
    pairs: list[tuple[int, int]] = []
    cur = d
    for m in ms:
        if isinstance(m, IMinus):
            s1 |= {m.x} & original
        elif isinstance(m, III):
            s1 |= set(m.crossings()) & original
        elif isinstance(m, IPlus):
            s1 |= set(edge_endpoints(cur, m.e)) & original
        elif isinstance(m, IIPlus):
            s1 |= set(edge_endpoints(cur, m.e) + edge_endpoints(cur, m.f)) & original
        elif isinstance(m, IIMinus):
            pairs.append((m.x, m.y))
        cur = apply_move(cur, m)
    if cur.adj:
        raise ValueError("sequence does not untangle the diagram")
    s2, s3 = set(), set()
    for a, b in pairs:
        for x, y in ((a, b), (b, a)):
            if x in original and x not in s1:
                if y in s1:
                    s2.add(x)
                elif y not in original:
                    s3.add(x)
    return SpecialSetParts(frozenset(s1), frozenset(s2), frozenset(s3))


def infer_special_set(d: Diagram, ms: Sequence[Move]) -> frozenset:
    """A special set for which every move of the untangling ``ms`` is greedy or special."""
    s = infer_special_parts(d, ms).s
    replay_special(d, s, ms)
    defect = sequence_defect(d, ms)
    assert len(s) <= 3 * defect, f"|S| = {len(s)} exceeds 3 * defect = {3 * defect}"
    return s


# SpecialGreedy

def special_moves(d: Diagram, s: frozenset, budget: int) -> list[Move]:
    st = SpecialState(d, s, budget)
    return [m for m in enumerate_moves(d, _kinds_within(budget)) if classify_move(st, m) == SPECIAL]


def untangle_special_greedy(d: Diagram, k: int, max_nodes: int | None = None,
                            max_seconds: float | None = None,
                            candidate_sets: Iterable[Iterable[int]] | None = None) -> SolveResult:
    """Guess S with |S| <= 3k, then greedy II- moves eagerly and branch on special moves.

    Candidate sets are tried by ascending size and then lexicographically.
    The search for one candidate stops at the first witness; memo entries
    are shared between candidates because the key includes the image of S.
    """
    search = _Search(max_nodes, max_seconds)
    if k < 0:
        return search.finish("no", k, "special")
    if not d.adj:
        return search.finish("yes", k, "special", [], frozenset())
    failed: dict[tuple, int] = {}
    cap_ii = 2 * k

    def run(d: Diagram, s: frozenset, budget: int, ii_left: int):
        out = []
        # greedy moves are safe to fire in any order
        while d.adj:
            g = first_ii_minus(d, s)
            if g is None:
                break
            search.tick()
            out.append(g)
            d = apply_move(d, g)
        if not d.adj:
            return out
        key = (canonical_form(d, s), ii_left)
        if failed.get(key, -1) >= budget:
            search.memo_hits += 1
            return None
        search.tick()
        for m in special_moves(d, s, budget):
            if isinstance(m, IIMinus):
                if ii_left == 0:
                    continue
                left = ii_left - 1
            else:
                left = ii_left
            s2 = s ^ effect_set(d, m)
            sub = run(apply_move(d, m), s2, budget - m.weight, left)
            if sub is not None:
                return out + [m] + sub
        failed[key] = max(budget, failed.get(key, -1))
        return None

    if candidate_sets is None:
        labels = sorted(d.crossings)
        top = min(3 * k, len(labels))
        candidate_sets = itertools.chain.from_iterable(
            itertools.combinations(labels, r) for r in range(top + 1))
    try:
        for cand in candidate_sets:
            s = frozenset(cand)
            w = run(d, s, k, cap_ii)
            if w is not None:
                replay_special(d, s, w)
                return search.finish("yes", k, "special", _checked(d, w, k), s)
    except SearchLimitExceeded:
        return search.finish("unknown", k, "special")
    return search.finish("no", k, "special")


SOLVERS = {
    "brute": untangle_brute,
    "naive": untangle_naive_greedy,
    "special": untangle_special_greedy,
    "moves": untangle_moves_budget,
}


def solve(d: Diagram, k: int, algo: str = "special", **caps) -> SolveResult:
    return SOLVERS[algo](d, k, **caps)


def min_defect(d: Diagram, kmax: int, algo: str = "special", jobs: int = 1, **caps) -> int | None:
    """Smallest k <= kmax with a yes answer, or None.  Unknown answers raise."""
    res = min_defect_result(d, kmax, algo, jobs, **caps)
    return None if res is None else res.k


def _solve_at(job):
    d, k, algo, caps = job
    return SOLVERS[algo](d, k, **caps)


def min_defect_result(d: Diagram, kmax: int, algo: str = "special", jobs: int = 1,
                      **caps) -> SolveResult | None:
    """Smallest-budget yes result, or None.

    With ``jobs > 1`` the budgets are searched in worker processes, but the
    results are still read in increasing k, so the answer and witness do not
    depend on the job count.
    """
    todo = [(d, k, algo, caps) for k in range(kmax + 1)]
    pool = ProcessPoolExecutor(jobs) if jobs > 1 and len(todo) > 1 else None
    results = pool.map(_solve_at, todo) if pool else map(_solve_at, todo)
    try:
        for k, res in enumerate(results):
            if res.answer == "unknown":
                raise SearchLimitExceeded(f"search cap hit at k={k}")
            if res.yes:
                return res
        return None
    finally:
        if pool:
            pool.shutdown(wait=False, cancel_futures=True)


# constructive rearrangement

class SwapError(RuntimeError):
    """Internal consistency failure while rearranging a sequence (a bug trap)."""


def same_diagram(a: Diagram, b: Diagram) -> bool:
    """Label-exact equality, with outer markers compared as faces."""
    if a.adj != b.adj:
        return False
    if a.outer is None or b.outer is None:
        return a.outer is None and b.outer is None
    return b.outer in a.face_of(a.outer)


def _find_equivalent(start: Diagram, like: Move, target: Diagram) -> Move:
    """A move of the same type as ``like`` taking ``start`` exactly to ``target``."""
    ok, _ = check_move(start, like)
    if ok and same_diagram(apply_move(start, like), target):
        return like
    for m in enumerate_moves(start, (like.kind,)):
        if same_diagram(apply_move(start, m), target):
            return m
    if isinstance(like, IIPlus):
        # enumeration drops windings that do not matter; try them explicitly
        for m in enumerate_moves(start, ("II+",)):
            alt = IIPlus(m.e, m.f, "-", m.order)
            if check_move(start, alt)[0] and same_diagram(apply_move(start, alt), target):
                return alt
    raise SwapError(f"no counterpart of {format_move(like)} found")


def _swap_greedy_forward(d: Diagram, first: Move, g: IIMinus) -> tuple[IIMinus, Move]:
    """(first, g) -> (g, first_hat) with the same end diagram."""
    target = apply_move(apply_move(d, first), g)
    if not check_move(d, g)[0]:
        raise SwapError(f"{format_move(g)} is not feasible before {format_move(first)}")
    hat = _find_equivalent(apply_move(d, g), first, target)
    return g, hat


def _swap_greedy_backward(d: Diagram, m: IIMinus, nxt: Move) -> tuple[Move, IIMinus]:
    """(m, nxt) -> (nxt_hat, m) with the same end diagram."""
    target = apply_move(apply_move(d, m), nxt)
    for cand in [nxt] + enumerate_moves(d, (nxt.kind,)):
        if not check_move(d, cand)[0]:
            continue
        mid = apply_move(d, cand)
        if check_move(mid, m)[0] and same_diagram(apply_move(mid, m), target):
            return cand, m
    raise SwapError(f"cannot move {format_move(m)} past {format_move(nxt)}")


def _bubble_to_front(d: Diagram, ms: list, j: int) -> list:
    ms = list(ms)
    states = [d]
    for m in ms[:j]:
        states.append(apply_move(states[-1], m))
    for p in range(j, 0, -1):
        g, hat = _swap_greedy_forward(states[p - 1], ms[p - 1], ms[p])
        ms[p - 1], ms[p] = g, hat
    return ms


def swap_to_front(d: Diagram, s: Iterable[int], ms: Sequence[Move], g: IIMinus) -> list:
    """Rearrange the untangling ``ms`` of ``(d, s)`` so that it starts with greedy ``g``.

    The defect is unchanged.  If ``g`` already occurs in ``ms`` it is
    bubbled to the front.  Otherwise the II- moves removing the two
    crossings of ``g`` are brought together and exchanged for ``g`` and a
    partner move before bubbling.
    """
    s = frozenset(s)
    ms = list(ms)
    replay_special(d, s, ms)
    defect = sequence_defect(d, ms)
    if classify_move(SpecialState(d, s), g) != GREEDY:
        raise ValueError(f"{format_move(g)} is not greedy")
    if g in ms:
        out = _bubble_to_front(d, ms, ms.index(g))
    else:
        x, z = g.x, g.y
        i = next(p for p, m in enumerate(ms) if isinstance(m, (IMinus, IIMinus)) and x in m.crossings())
        j = next(p for p, m in enumerate(ms) if isinstance(m, (IMinus, IIMinus)) and z in m.crossings())
        if i > j:
            i, j, x, z = j, i, z, x
        mi, mj = ms[i], ms[j]
        if not (isinstance(mi, IIMinus) and isinstance(mj, IIMinus)):
            raise SwapError("crossings of a greedy move must be removed by II- moves")
        y = mi.y if mi.x == x else mi.x
        w = mj.x if mj.y == z else mj.y
        states = [d]
        for m in ms[:i]:
            states.append(apply_move(states[-1], m))
        cur = states[i]
        # carry m_i forward until it sits right before m_j
        for p in range(i, j - 1):
            hat, _ = _swap_greedy_backward(cur, ms[p], ms[p + 1])
            ms[p], ms[p + 1] = hat, ms[p]
            cur = apply_move(cur, hat)
        before = apply_move(apply_move(cur, ms[j - 1]), ms[j])
        partner = IIMinus(w, y)
        if not check_move(cur, g)[0]:
            raise SwapError(f"{format_move(g)} infeasible at the exchange point")
        after_g = apply_move(cur, g)
        if not check_move(after_g, partner)[0] or not same_diagram(apply_move(after_g, partner), before):
            raise SwapError("bigon exchange failed")
        ms[j - 1], ms[j] = g, partner
        replay_special(d, s, ms)
        out = _bubble_to_front(d, ms, j - 1)
    replay_special(d, s, out)
    if sequence_defect(d, out) != defect or out[0] != g:
        raise SwapError("rearranged sequence changed its defect")
    return out
