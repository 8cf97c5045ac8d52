"""Doubled arcs ("bands") on the integer grid and their expansion to a curve.

A band is described by its core: an axis-parallel polyline starting at the
strand it hangs from.  Expanding a band walks down one side of the core
(strand A), around the far end, and back up the other side (strand B), so
the band contributes a U-shaped piece of the knot.  Along the core a band
can carry

* width changes (used for the wide heads that other bands pass through),
* half twists, where the strands swap sides; strand A passes over,
* child bands, spliced into strand A and pointing away from the band.

Each core segment has a height.  Both strands of a segment share it, so a
band always passes entirely over or entirely under another band.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TWIST_OVER = 10**12
TWIST_UNDER = -10**12


def _unit(p, q):
    dx, dy = q[0] - p[0], q[1] - p[1]
    if (dx == 0) == (dy == 0):
        raise ValueError(f"core segment {p}->{q} is not axis-parallel")
    return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


def _left(d):
    return (-d[1], d[0])


def _add(p, *terms):
    x, y = p
    for c, v in terms:
        x += c * v[0]
        y += c * v[1]
    return (x, y)


@dataclass
class Band:
    owner: object
    core: list = field(default_factory=list)
    widths: list = field(default_factory=list)
    heights: list = field(default_factory=list)
    events: list = field(default_factory=list)   # (segment, point, kind, payload)

    def to(self, x, y, width=1, height=None):
        """Extend the core to ``(x, y)``."""
        if not self.core:
            raise ValueError("band has no start point")
        if (x, y) == self.core[-1]:
            return self
        _unit(self.core[-1], (x, y))
        if len(self.core) >= 2 and _unit(self.core[-2], self.core[-1]) == _unit(self.core[-1], (x, y)) \
                and self.widths[-1] == width and self.heights[-1] == height:
            self.core[-1] = (x, y)
        else:
            self.core.append((x, y))
            self.widths.append(width)
            self.heights.append(height)
        return self

    def twist(self, point, tag):
        self.events.append((len(self.core) - 2, point, "twist", tag))
        return self

    def attach(self, point, child: "Band"):
        self.events.append((len(self.core) - 2, point, "child", child))
        return self


@dataclass
class Vertex:
    """A corner of the expanded curve; the segment starting here has ``height``."""
    x: int
    y: int
    height: int | None
    owner: object
    tag: object = None

    @property
    def pt(self):
        return (self.x, self.y)


def expand(band: Band, base, side: int) -> list[Vertex]:
    """Curve of ``band`` hanging from ``base``; strand A starts on ``side``.

    ``side`` is +1 or -1 relative to the left normal of the first core
    segment.  The height of the last vertex (the segment leaving the band)
    is left as ``None`` for the caller.
    """
    core = [base] + list(band.core[1:]) if band.core else [base]
    nseg = len(core) - 1
    if nseg < 1:
        raise ValueError(f"band {band.owner} has an empty core")
    events = [[] for _ in range(nseg)]
    for seg, point, kind, payload in band.events:
        events[seg].append((point, kind, payload))
    A: list[Vertex] = []
    B: list[Vertex] = []
    s = side
    own = band.owner
    for k in range(nseg):
        p, q = core[k], core[k + 1]
        d = _unit(p, q)
        n = _left(d)
        w, h = band.widths[k], band.heights[k]
        if k == 0:
            A.append(Vertex(*_add(p, (s * w, n)), h, own))
            B.append(Vertex(*_add(p, (-s * w, n)), h, own))
        evs = sorted(events[k], key=lambda e: abs(e[0][0] - p[0]) + abs(e[0][1] - p[1]))
        for point, kind, payload in evs:
            if kind == "twist":
                A.append(Vertex(*_add(point, (-2, d), (s * w, n)), TWIST_OVER, own, payload))
                B.append(Vertex(*_add(point, (-2, d), (-s * w, n)), TWIST_UNDER, own, payload))
                s = -s
                A.append(Vertex(*_add(point, (2, d), (s * w, n)), h, own))
                B.append(Vertex(*_add(point, (2, d), (-s * w, n)), h, own))
            else:
                child = payload
                on_a = _add(point, (s * w, n))
                u = (s * n[0], s * n[1])
                cside = -(d[0] * _left(u)[0] + d[1] * _left(u)[1])
                sub = expand(child, on_a, cside)
                sub[-1].height = h
                A.extend(sub)
        if k < nseg - 1:
            d2 = _unit(q, core[k + 2])
            n2 = _left(d2)
            w2, h2 = band.widths[k + 1], band.heights[k + 1]
            if d2 != d:
                A.append(Vertex(*_add(q, (s * w, n), (s * w2, n2)), h2, own))
                B.append(Vertex(*_add(q, (-s * w, n), (-s * w2, n2)), h2, own))
            else:
                if w2 != w:
                    A.append(Vertex(*_add(q, (s * w, n)), h2, own))
                    B.append(Vertex(*_add(q, (-s * w, n)), h2, own))
                A.append(Vertex(*_add(q, (s * w2, n)), h2, own))
                B.append(Vertex(*_add(q, (-s * w2, n)), h2, own))
    q = core[-1]
    d = _unit(core[-2], q)
    n = _left(d)
    w = band.widths[-1]
    A.append(Vertex(*_add(q, (s * w, n)), band.heights[-1], own))
    B.append(Vertex(*_add(q, (-s * w, n)), None, own))
    # walk B backwards: the segment from B[i] to B[i-1] has B[i-1]'s height
    back = []
    for i in range(len(B) - 1, -1, -1):
        v = B[i]
        prev = B[i - 1] if i > 0 else None
        back.append(Vertex(v.x, v.y, prev.height if prev else None, own, prev.tag if prev else None))
    return A + back


def spine_curve(fingers: list[tuple[int, Band]], x0: int, x1: int, lift: int = 6) -> list[Vertex]:
    """Closed curve: a horizontal line at y=0 from ``x0`` to ``x1`` with the
    given bands hanging down from their base x positions, closed above."""
    out = [Vertex(x0, 0, 0, "spine")]
    for bx, band in sorted(fingers, key=lambda f: f[0]):
        if band.core[1][0] != bx or band.core[1][1] >= 0:
            raise ValueError(f"finger {band.owner} must start straight down from ({bx}, 0)")
        # hanging down from an eastbound line puts strand A on the west side
        sub = expand(band, (bx, 0), -1)
        sub[-1].height = 0
        out.extend(sub)
    out += [Vertex(x1, 0, 0, "spine"), Vertex(x1, lift, 0, "spine"), Vertex(x0, lift, 0, "spine")]
    return out
