"""Turn a closed polyline with per-segment heights into a knot diagram.

The reduction gadgets are laid out on an integer grid.  Every segment of
the curve carries a height; where two segments cross, the higher one passes
over.  The resulting crossings, their cyclic slot order and the outer face
are read off exactly (integer arithmetic only), so the combinatorial diagram
is a faithful quotient of the drawing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import Diagram


class LayoutError(ValueError):
    """The drawing is degenerate (touching segments, overlaps, height ties)."""


@dataclass(frozen=True)
class CrossingInfo:
    """Where a crossing sits in the drawing."""
    over_seg: int
    under_seg: int
    point: tuple[float, float]


def _orient(ax, ay, bx, by, cx, cy):
    return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def find_crossings(points: np.ndarray, chunk: int = 400) -> list[tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, of segments that cross properly.

    Segment ``i`` runs from ``points[i]`` to ``points[i+1]`` (cyclically).
    Raises LayoutError on any touching or collinear overlap between
    non-adjacent segments.
    """
    p = np.asarray(points, dtype=np.int64)
    q = np.roll(p, -1, axis=0)
    n = len(p)
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    idx = np.arange(n)
    out = []
    for s in range(0, n, chunk):
        e = min(n, s + chunk)
        a = np.arange(s, e)[:, None]
        bbox = ((lo[s:e, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[s:e, None, 0])
                & (lo[s:e, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[s:e, None, 1]))
        bbox &= idx[None, :] > a
        adjacent = (idx[None, :] == a + 1) | ((a == 0) & (idx[None, :] == n - 1))
        bbox &= ~adjacent
        ii, jj = np.nonzero(bbox)
        if len(ii) == 0:
            continue
        ii = ii + s
        P, Q, R, S = p[ii], q[ii], p[jj], q[jj]
        d1 = _orient(P[:, 0], P[:, 1], Q[:, 0], Q[:, 1], R[:, 0], R[:, 1])
        d2 = _orient(P[:, 0], P[:, 1], Q[:, 0], Q[:, 1], S[:, 0], S[:, 1])
        d3 = _orient(R[:, 0], R[:, 1], S[:, 0], S[:, 1], P[:, 0], P[:, 1])
        d4 = _orient(R[:, 0], R[:, 1], S[:, 0], S[:, 1], Q[:, 0], Q[:, 1])
        touching = (d1 == 0) | (d2 == 0) | (d3 == 0) | (d4 == 0)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)
        # a zero orientation inside overlapping boxes is a degeneracy only
        # when the touching point actually lies on both segments
        for k in np.nonzero(touching)[0]:
            if _touches(P[k], Q[k], R[k], S[k]):
                raise LayoutError(f"segments {ii[k]} and {jj[k]} touch at a non-crossing point")
        for k in np.nonzero(proper)[0]:
            out.append((int(ii[k]), int(jj[k])))
    return out


def _on_segment(a, b, c) -> bool:
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (cross == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))


def _touches(p, q, r, s) -> bool:
    return _on_segment(p, q, r) or _on_segment(p, q, s) or _on_segment(r, s, p) or _on_segment(r, s, q)


def _param(p, q, r, s) -> float:
    """Position (0..1) of the crossing along segment p->q."""
    d = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0])
    t = (r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])
    return t / d


def _point(p, q, t):
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def polyline_diagram(points, heights) -> tuple[Diagram, list[CrossingInfo], list[list[tuple[float, int]]]]:
    """Build the diagram of the closed curve through ``points``.

    ``heights[i]`` is the height of segment ``i``.  Returns the diagram (with
    crossings labelled 0.. in order of first visit from segment 0), per
    crossing drawing info, and for every segment the sorted list of
    ``(param, crossing)`` passages on it.
    """
    pts = [tuple(map(int, pt)) for pt in points]
    n = len(pts)
    if len(heights) != n:
        raise LayoutError("need one height per segment")
    pairs = find_crossings(np.array(pts))
    if not pairs:
        return Diagram({}, None, 0), [], [[] for _ in range(n)]
    seg = lambda i: (pts[i], pts[(i + 1) % n])
    passages: list[list[tuple[float, int, int]]] = [[] for _ in range(n)]
    raw = []
    for k, (i, j) in enumerate(pairs):
        if heights[i] == heights[j]:
            raise LayoutError(f"segments {i} and {j} cross at equal height {heights[i]}")
        (p, q), (r, s) = seg(i), seg(j)
        ti = _param(p, q, r, s)
        tj = _param(r, s, p, q)
        passages[i].append((ti, k, j))
        passages[j].append((tj, k, i))
        raw.append((i, j, _point(p, q, ti)))
    for lst in passages:
        lst.sort()
    # relabel crossings in order of first visit
    order = {}
    for lst in passages:
        for _, k, _ in lst:
            if k not in order:
                order[k] = len(order)
    info = [None] * len(raw)
    for k, (i, j, pt) in enumerate(raw):
        over, under = (i, j) if heights[i] > heights[j] else (j, i)
        info[order[k]] = CrossingInfo(over, under, pt)

    def direction(i):
        p, q = seg(i)
        return (q[0] - p[0], q[1] - p[1])

    # slots: over strand enters at 1 and leaves at 3; slots run clockwise
    slot_in, slot_out = {}, {}
    for v, ci in enumerate(info):
        do = direction(ci.over_seg)
        du = direction(ci.under_seg)
        slot_in[(v, ci.over_seg)] = 1
        slot_out[(v, ci.over_seg)] = 3
        # direction of slot 2: the backward over direction turned clockwise
        back = (-do[0], -do[1])
        cw = (back[1], -back[0])
        if (-du[0]) * cw[0] + (-du[1]) * cw[1] > 0:
            slot_in[(v, ci.under_seg)], slot_out[(v, ci.under_seg)] = 2, 4
        else:
            slot_in[(v, ci.under_seg)], slot_out[(v, ci.under_seg)] = 4, 2
    walk = []  # (crossing, segment) in curve order
    for i, lst in enumerate(passages):
        for _, k, _ in lst:
            walk.append((order[k], i))
    edges = []
    m = len(walk)
    for a in range(m):
        v1, s1 = walk[a]
        v2, s2 = walk[(a + 1) % m]
        edges.append((v1, v2, slot_out[(v1, s1)], slot_in[(v2, s2)]))
    outer = _outer_marker(pts, walk, passages, order, slot_in, slot_out)
    d = Diagram.from_edges(edges, outer=outer)
    segpass = [[(t, order[k]) for t, k, _ in lst] for lst in passages]
    return d, info, segpass


def _outer_marker(pts, walk, passages, order, slot_in, slot_out):
    """Tail of a directed edge with the unbounded region on its right."""
    n = len(pts)
    i = min(range(n), key=lambda k: (pts[k][0], pts[k][1]))
    prev, nxt = pts[(i - 1) % n], pts[(i + 1) % n]
    # leftmost vertex: travelling downwards there puts the outside on the right
    down = (nxt[1] - pts[i][1]) < (prev[1] - pts[i][1]) if nxt[1] != prev[1] else nxt[0] > prev[0]
    # the edge through vertex i runs from the last passage before it to the next one after
    last = None
    for k in range(i - 1, i - 1 - n, -1):
        lst = passages[k % n]
        if lst:
            last = (order[lst[-1][1]], k % n)
            break
    first = None
    for k in range(i, i + n):
        lst = passages[k % n]
        if lst:
            first = (order[lst[0][1]], k % n)
            break
    if down:
        v, s = last
        return (v, slot_out[(v, s)])
    v, s = first
    return (v, slot_in[(v, s)])
