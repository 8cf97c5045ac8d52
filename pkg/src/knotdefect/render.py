"""SVG drawings of diagrams for inspection.

Each crossing becomes a vertex and each edge is subdivided twice, so loops
and parallel edges turn into honest polygons.  The outer face is pinned to
a regular polygon and every other vertex sits at the average of its
neighbours (a Tutte embedding), found with one sparse linear solve.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from .diagram import Diagram, is_over, validate

SIZE = 480
MARGIN = 24
GAP = 0.35        # fraction of the first edge piece left blank at an underpass


def tutte_layout(d: Diagram) -> tuple[dict, dict]:
    """Vertex positions and the vertex path of every edge.

    Vertices are crossing ids and ``("e", a, i)`` for the i-th subdivision
    point of the edge whose smaller endpoint code is ``a``.
    """
    adj = d.adj
    paths = {}
    for a in sorted(adj):
        b = adj[a]
        if a < b:
            paths[a] = [a >> 2, ("e", a, 0), ("e", a, 1), b >> 2]
    nbrs: dict = {}
    for path in paths.values():
        for u, v in zip(path, path[1:]):
            nbrs.setdefault(u, []).append(v)
            nbrs.setdefault(v, []).append(u)
    # outer cycle in face order
    cycle = []
    for t in d.outer_face():
        h = adj[t]
        a = min(t, h)
        inner = paths[a][1:3] if a == t else paths[a][2:0:-1]
        cycle += [t >> 2, *inner]
    seen = set()
    pinned = []
    for v in cycle:
        if v not in seen:
            seen.add(v)
            pinned.append(v)
    verts = sorted(nbrs, key=repr)
    index = {v: i for i, v in enumerate(verts)}
    pos = np.zeros((len(verts), 2))
    k = len(pinned)
    for i, v in enumerate(pinned):
        ang = 2 * math.pi * i / k
        pos[index[v]] = (math.cos(ang), -math.sin(ang))
    free = [v for v in verts if v not in seen]
    if free:
        fi = {v: i for i, v in enumerate(free)}
        L = lil_matrix((len(free), len(free)))
        rhs = np.zeros((len(free), 2))
        for v in free:
            i = fi[v]
            L[i, i] = len(nbrs[v])
            for u in nbrs[v]:
                if u in fi:
                    L[i, fi[u]] -= 1
                else:
                    rhs[i] += pos[index[u]]
        sol = spsolve(L.tocsc(), rhs)
        sol = np.asarray(sol).reshape(len(free), 2)
        for v in free:
            pos[index[v]] = sol[fi[v]]
    return {v: tuple(pos[index[v]]) for v in verts}, paths


def _px(p):
    s = (SIZE - 2 * MARGIN) / 2
    return (round(MARGIN + s * (p[0] + 1), 2), round(MARGIN + s * (p[1] + 1), 2))


def render_svg(d: Diagram) -> str:
    rep = validate(d)
    if not rep:
        raise ValueError(f"cannot draw an invalid diagram: {rep}")
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">\n')
    style = '<g fill="none" stroke="black" stroke-width="2">\n'
    if not d.adj:
        c = SIZE / 2
        return head + style + f'<circle cx="{c}" cy="{c}" r="{c - MARGIN}"/>\n</g>\n</svg>\n'
    pos, paths = tutte_layout(d)
    out = [head, style]
    for a, path in paths.items():
        pts = [pos[v] for v in path]
        b = d.adj[a]
        if not is_over(a):
            pts[0] = _toward(pts[0], pts[1])
        if not is_over(b):
            pts[-1] = _toward(pts[-1], pts[-2])
        coords = " ".join(f"{x},{y}" for x, y in map(_px, pts))
        out.append(f'<polyline class="edge" data-ends="{a} {b}" points="{coords}"/>\n')
    out.append("</g>\n")
    for v in sorted(d.crossings):
        x, y = _px(pos[v])
        out.append(f'<text class="crossing" x="{x}" y="{y - 4}" font-size="10">{v}</text>\n')
    out.append("</svg>\n")
    return "".join(out)


def _toward(p, q, f=GAP):
    return (p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1]))
