"""Compile a Minimum Axiom Set instance into a knot diagram.

Every sentence ``s`` of the doubled instance gets a gadget: fingers
``g0 .. gl`` (one per incoming relation, plus ``g0``) and a key finger
``K``, all hanging from a common horizontal spine.  The far end of each
finger except ``g0`` is a wide *head*.  Other bands pass through a head;
a head is *locked* (its finger cannot be pulled back by bigon moves) as
long as one designated *partner* band and at least one *premise* band
pass through it, because their crossing inside the head leaves a triangle
at the head's end instead of a bigon.

Heads and their partners form a cycle per gadget::

    head of g_j   partner g_{j-1}, premises: the stems of relation j
    head of g_1   partner K,       premises: the stems of relation 1
    head of K     partner g_l,     premise:  g0

A *stem* is an excursion of ``g1(t)`` through a channel below all gadgets
that visits the head of ``g_j(s)`` for every relation ``j`` of ``s`` with
``t`` among its premises.  Once ``g1(t)`` is gone the stems of ``t`` have
left every head.

``g0`` carries three half twists: ``m`` near the spine, ``c`` below it and
a kink ``y`` at its tip.  Removing ``y`` (one weight-1 move) lets ``g0``
slide out of the head of ``K``, which starts the cycle of unlocking.  A
derived sentence unlocks from a relation instead, after which ``c`` and
``y`` cancel by a bigon move.  The copy ``g0(s')`` of the mirrored gadget
is spliced into ``g0(s)`` between ``m`` and ``c`` so that the leftover
``m`` twists of a derived pair cancel each other.

Everything is drawn on an integer grid (see :mod:`.bands`) and read off
exactly by :func:`.planar.polyline_diagram`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagram import Diagram, serialize_diagram, validate
from .bands import Band, Vertex, spine_curve
from .instance import MasError, MasInstance, double_instance, hat
from .planar import polyline_diagram

X_PER_PAIR = 32
BAND_X = 4                   # crossings where two bands cross once
WEAVE_OVER = 10**9
WEAVE_UNDER = -10**9
GAP = 10                     # between g0(s) and g0(s')
PAIR_GAP = 9


def g(s, i):
    return ("g", s, i)


def key(s):
    return ("K", s)


# depths (positive = further below the spine)
M_S, BRANCH, C_S = 5, 10, 15
M_H, C_H = 16, 22
WEAVE_TOP = 28


@dataclass
class Depths:
    weaves: int          # excursions in the deepest weave stack
    lmax: int
    mmax: int

    def __post_init__(self):
        self.S1 = WEAVE_TOP + 6 * self.weaves + 3
        self.S2 = self.S1 + 3
        self.R = self.S2 + 3
        self.D1 = self.R + 3 * (self.lmax + 1)
        self.B = self.D1 + 3
        self.BT = self.B + 6
        self.channel = self.BT + 3 * (self.mmax + 3) + 12

    def A(self, idx):
        """Track of the idx-th passing finger, counted from the west (0-based)."""
        return self.R + 3 * (idx + 1)

    def head(self, m):
        """(y_high, [h_1..h_m], y_low, bottom) for a head with m premises."""
        bt = self.BT
        return (bt + 3, [bt + 3 * (m - r + 2) for r in range(1, m + 1)],
                bt + 3 * (m + 2), bt + 3 * (m + 3))


@dataclass
class Gadget:
    sentence: str
    premises: list            # premises[j-1] = sorted premise list of relation j
    mirrored: bool
    ox: int = 0
    cells: dict = field(default_factory=dict)

    @property
    def l(self):
        return len(self.premises)

    def layout_x(self):
        """Local x positions, west edge at 0 (before mirroring)."""
        l = self.l
        cells = {}
        order = [g(self.sentence, j) for j in range(l, 0, -1)] + [key(self.sentence)]
        x = {"s1": 0, "s2": 3}
        prev = None
        for f in order:
            m = 1 if f[0] == "K" else len(self.premises[f[2] - 1])
            cell = {"m": m}
            if prev is None:
                cell["xw"] = 6
            else:
                cell["xm"] = cells[prev]["c"] + 4 + 3 * (cells[prev]["m"] + 1)
                cell["xw"] = cell["xm"] + 3
            if f[0] == "K":
                cell["xr"] = cell["xm"] + 3
                cell["xt"] = cell["xr"] + 3
                cell["c"] = cell["xt"] + 7
            else:
                cell["c"] = cell["xw"] + 3 * (m + 1) + 4
            cells[f] = cell
            prev = f
        x["e"] = cells[order[-1]]["c"] + 7
        x["c0"] = x["e"] + 3
        self.order = order
        self.cells = cells
        self.xs = x
        self.width = x["c0"]

    def X(self, xl):
        """Global x of a local x (measured from the west edge)."""
        v = xl - self.xs["c0"]
        return self.ox - v if self.mirrored else self.ox + v

    def P(self, xl, depth):
        return (self.X(xl), -depth)

    def c(self, f):
        return self.xs["c0"] if f[0] == "g" and f[2] == 0 else self.cells[f]["c"]

    def tracks(self, j, r):
        """Global (entry, exit) x of the premise track r (1-based) of head j."""
        c = self.cells[g(self.sentence, j)]["c"]
        a, b = self.X(c - 4 - 3 * r), self.X(c + 4 + 3 * r)
        return min(a, b), max(a, b)

    def extent(self):
        a, b = self.X(0), self.X(self.xs["c0"])
        return min(a, b), max(a, b)


class _Heights:
    """Per-band height layers; every band passes wholly over or under another."""

    def __init__(self):
        self.layer = {}
        self.uid = 0

    def of(self, owner):
        if owner not in self.layer:
            self.layer[owner] = len(self.layer) + 1
        self.uid += 1
        return self.layer[owner] * 100000 + self.uid

    def weave(self, over):
        self.uid += 1
        return WEAVE_OVER + self.uid if over else WEAVE_UNDER - self.uid


@dataclass
class GadgetLayout:
    """The compiled diagram plus names for the crossings that matter."""
    instance: MasInstance          # the doubled instance
    diagram: Diagram
    atlas: dict                    # name -> crossing id
    owners: dict                   # crossing id -> (owner, owner)
    gadgets: dict                  # sentence -> Gadget
    base: MasInstance | None = None

    def q_set(self, s):
        """Crossings X(s) + y(s) + Z(s) of one sentence."""
        sfx = f"({s})"
        out = {v for n, v in self.atlas.items() if n.startswith("x^") and n.endswith(sfx)}
        out.add(self.atlas[f"y({s})"])
        out |= {v for n, v in self.atlas.items()
                if n.startswith("z^") and n.split("(", 1)[1].split(",")[0] == s}
        return out

    def atlas_text(self):
        return "".join(f"{n} {v}\n" for n, v in self.atlas.items())

    def knot_text(self):
        return serialize_diagram(self.diagram)


def _check_input(inst: MasInstance):
    if inst.trivially_no:
        raise MasError("instance is a trivial no-instance (k < 0)")
    if not inst.is_preprocessed():
        raise MasError("instance is not preprocessed")


def _plan(dbl: MasInstance, order: list[str]):
    gadgets = {}
    for s in dbl.sentences:
        rels = dbl.incoming(s)
        prem = [sorted(r.premises, key=order.index) for r in rels]
        gadgets[s] = Gadget(s, prem, mirrored=s not in order[: len(order) // 2])
        gadgets[s].layout_x()
    # place pairs (s, s') from west to east
    x = 0
    base = order[: len(order) // 2]
    for s in base:
        gs, gh = gadgets[s], gadgets[hat(s)]
        gs.ox = x + gs.width
        gh.ox = gs.ox + GAP
        x = gh.ox + gh.width + PAIR_GAP
    return gadgets


def _draw(dbl: MasInstance, order: list[str], gadgets: dict, weaves: dict, dp: Depths):
    """Build all bands and return the closed curve."""
    H = _Heights()
    base = order[: len(order) // 2]
    stems = [s for s in order if any(s in p for gd in gadgets.values() for p in gd.premises)]
    nst = len(stems)
    xmin = min(gd.extent()[0] for gd in gadgets.values())
    xmax = max(gd.extent()[1] for gd in gadgets.values())
    # every stem gets three channel tracks and two side columns
    track = {}
    for i, s in enumerate(stems):
        track[s] = dict(t2=dp.channel + 3 * i, t1=dp.channel + 3 * nst + 3 * i,
                        t3=dp.channel + 6 * nst + 3 * i, xw=xmin - 3 * (i + 1), xe=xmax + 3 * (i + 1))
    visits = {s: [] for s in stems}
    for s in order:
        gd = gadgets[s]
        for j, prem in enumerate(gd.premises, 1):
            _, hs, _, _ = dp.head(len(prem))
            for r, t in enumerate(prem, 1):
                a, b = gd.tracks(j, r)
                visits[t].append((a, b, hs[r - 1]))
    for v in visits.values():
        v.sort()

    stack_top = {}

    def weave_stack(gd, f, band):
        """Add the excursions of finger f below those already placed in its gadget."""
        depth = stack_top.get(gd.sentence, WEAVE_TOP)
        for target, count in weaves.get((gd.sentence, f), []):
            for _ in range(count):
                band.to(*gd.P(gd.c(f), depth), height=H.of(band.owner))
                tx = gd.c(target) - 3
                band.to(*gd.P(tx, depth), height=H.weave(True))
                band.to(*gd.P(tx, depth + 3), height=H.weave(True))
                band.to(*gd.P(gd.c(f), depth + 3), height=H.weave(False))
                depth += 6
        stack_top[gd.sentence] = depth

    def head(gd, f, band):
        c = gd.c(f)
        m = gd.cells[f]["m"]
        band.to(*gd.P(c, dp.BT), height=H.of(band.owner))
        band.to(*gd.P(c, dp.head(m)[3]), width=4, height=H.of(band.owner))

    def passage(gd, f, target, band, via):
        """f dives into the head of target (its west neighbour) and comes back."""
        cf, ct = gd.c(f), gd.c(target)
        yh, _, yl, _ = dp.head(gd.cells[target]["m"])
        tc = gd.cells[target]
        h = lambda: H.of(band.owner)
        band.to(*gd.P(cf, via), height=h())
        band.to(*gd.P(tc["xw"], via), height=h())
        band.to(*gd.P(tc["xw"], yl), height=h())
        band.to(*gd.P(ct, yl), height=h())
        band.to(*gd.P(ct, yh), height=h())
        xm = gd.cells[f]["xm"]
        band.to(*gd.P(xm, yh), height=h())
        band.to(*gd.P(xm, dp.B), height=h())
        band.to(*gd.P(cf, dp.B), height=h())

    def stem(gd, band):
        s = gd.sentence
        tr = track[s]
        h = lambda: H.of(band.owner)
        c1 = gd.c(g(s, 1))
        band.to(*gd.P(c1, dp.S1), height=h())
        band.to(*gd.P(gd.xs["s1"], dp.S1), height=h())
        band.to(*gd.P(gd.xs["s1"], tr["t1"]), height=h())
        band.to(tr["xw"], -tr["t1"], height=h())
        band.to(tr["xw"], -tr["t2"], height=h())
        for a, b, depth in visits[s]:
            band.to(a, -tr["t2"], height=h())
            band.to(a, -depth, height=h())
            band.to(b, -depth, height=h())
            band.to(b, -tr["t2"], height=h())
        band.to(tr["xe"], -tr["t2"], height=h())
        band.to(tr["xe"], -tr["t3"], height=h())
        band.to(gd.X(gd.xs["s2"]), -tr["t3"], height=h())
        band.to(*gd.P(gd.xs["s2"], dp.S2), height=h())
        band.to(*gd.P(c1, dp.S2), height=h())

    def finger(gd, j):
        s, l = gd.sentence, gd.l
        f = g(s, j)
        band = Band(f, [gd.P(gd.c(f), 0)])
        weave_stack(gd, f, band)
        if j == 1 and s in track:
            stem(gd, band)
        if j == l:
            kc = gd.cells[key(s)]
            yh, _, yl, _ = dp.head(1)
            h = lambda: H.of(f)
            band.to(*gd.P(gd.c(f), dp.R), height=h())
            band.to(*gd.P(gd.xs["e"], dp.R), height=h())
            band.to(*gd.P(gd.xs["e"], yl), height=h())
            band.to(*gd.P(kc["c"], yl), height=h())
            band.to(*gd.P(kc["c"], yh), height=h())
            band.to(*gd.P(kc["xr"], yh), height=h())
            band.to(*gd.P(kc["xr"], dp.D1), height=h())
            band.to(*gd.P(gd.c(f), dp.D1), height=h())
        else:
            passage(gd, f, g(s, j + 1), band, dp.A(l - 1 - j))
        head(gd, f, band)
        return band

    def key_finger(gd):
        s, l = gd.sentence, gd.l
        f = key(s)
        band = Band(f, [gd.P(gd.c(f), 0)])
        passage(gd, f, g(s, 1), band, dp.A(l - 1))
        head(gd, f, band)
        return band

    def g0(gd, band, m_depth, c_depth, child=None):
        s = gd.sentence
        f = g(s, 0)
        kc = gd.cells[key(s)]
        _, (hk,), _, _ = dp.head(1)
        band.to(*gd.P(gd.xs["c0"], WEAVE_TOP), height=H.of(f))
        band.twist(gd.P(gd.xs["c0"], m_depth), ("m", s))
        if child is not None:
            band.attach(gd.P(gd.xs["c0"], BRANCH), child)
        band.twist(gd.P(gd.xs["c0"], c_depth), ("c", s))
        weave_stack(gd, f, band)
        band.to(*gd.P(gd.xs["c0"], hk), height=H.of(f))
        band.to(*gd.P(kc["xt"], hk), height=H.of(f))
        band.to(*gd.P(kc["xt"], dp.BT + 15), height=H.of(f))
        band.twist(gd.P(kc["xt"], dp.BT + 10), ("y", s))
        return band

    fingers = []
    for s in base:
        gs, gh = gadgets[s], gadgets[hat(s)]
        # the copy's g0 hangs off g0(s)
        child = Band(g(gh.sentence, 0), [(gs.ox + 1, -BRANCH)])
        child.to(gh.ox, -BRANCH, height=H.of(child.owner))
        g0(gh, child, M_H, C_H)
        root = Band(g(s, 0), [(gs.ox, 0)])
        g0(gs, root, M_S, C_S, child)
        for gd in (gs, gh):
            for j in range(1, gd.l + 1):
                band = finger(gd, j)
                fingers.append((band.core[0][0], band))
            band = key_finger(gd)
            fingers.append((band.core[0][0], band))
        fingers.append((gs.ox, root))
    x0 = min(t["xw"] for t in track.values()) - 6 if track else xmin - 6
    x1 = max(t["xe"] for t in track.values()) + 6 if track else xmax + 6
    return spine_curve(fingers, x0, x1)


def _count_pairs(curve, info):
    counts = {}
    for ci in info:
        a, b = curve[ci.over_seg].owner, curve[ci.under_seg].owner
        if a == b:
            continue
        k = frozenset((a, b))
        counts[k] = counts.get(k, 0) + 1
    return counts


def _weave_plan(dbl, gadgets, counts):
    plan = {}
    for s in dbl.sentences:
        gd = gadgets[s]
        l = gd.l

        def nat(i, j):
            c = counts.get(frozenset((g(s, i), g(s, j))), 0)
            assert c % BAND_X == 0, (s, i, j, c)
            return c // BAND_X

        def need(target, have):
            missing = target - have
            if missing < 0 or missing % 2:
                raise AssertionError(f"cannot pad {s}: {have} band crossings, target {target}")
            return missing // 2

        per_pair = X_PER_PAIR // BAND_X
        if l == 1:
            plan[(s, g(s, 0))] = [(g(s, 1), need(2 * per_pair, nat(0, 1)))]
            continue
        for j in range(1, l):
            plan[(s, g(s, j))] = [(g(s, j + 1), need(per_pair, nat(j, j + 1)))]
        far = need(per_pair, nat(0, l))
        near = need(per_pair, nat(0, 1) + 2 * far)
        plan[(s, g(s, 0))] = [(g(s, l), far), (g(s, 1), near)]
    return plan


def build_reduction(inst: MasInstance) -> GadgetLayout:
    """Diagram of the doubled instance with its crossing atlas."""
    _check_input(inst)
    dbl = double_instance(inst)
    order = list(inst.sentences) + [hat(s) for s in inst.sentences]
    gadgets = _plan(dbl, order)
    lmax = max((gd.l for gd in gadgets.values()), default=1)
    mmax = max((len(p) for gd in gadgets.values() for p in gd.premises), default=1)
    if not inst.sentences:
        d = Diagram({}, None, 0)
        return GadgetLayout(dbl, d, {}, {}, gadgets, inst)
    dp = Depths(0, lmax, mmax)
    curve = _draw(dbl, order, gadgets, {}, dp)
    _, info, _ = polyline_diagram([v.pt for v in curve], [v.height for v in curve])
    weaves = _weave_plan(dbl, gadgets, _count_pairs(curve, info))
    stack = max(sum(n for (s, _), w in weaves.items() if s == t for _, n in w) for t in dbl.sentences)
    dp = Depths(stack, lmax, mmax)
    curve = _draw(dbl, order, gadgets, weaves, dp)
    d, info, segpass = polyline_diagram([v.pt for v in curve], [v.height for v in curve])
    rep = validate(d)
    if not rep:
        raise AssertionError(f"compiled diagram is invalid: {rep}")
    atlas, owners = _atlas(dbl, order, gadgets, dp, curve, info, segpass)
    return GadgetLayout(dbl, d, atlas, owners, gadgets, inst)


def _atlas(dbl, order, gadgets, dp, curve, info, segpass):
    owners = {}
    for v, ci in enumerate(info):
        owners[v] = (curve[ci.over_seg].owner, curve[ci.under_seg].owner)
    # position of each crossing's passages along the curve
    where = {}
    for si, lst in enumerate(segpass):
        for t, v in lst:
            where.setdefault(v, []).append((si, t))
    atlas = {}
    for s in order:
        gd = gadgets[s]
        l = gd.l
        if l == 1:
            pairs = [(0, 1)]
        else:
            pairs = [(i, i + 1) for i in range(l)] + [(l, 0)]
        for i, j in pairs:
            fi, fj = g(s, i), g(s, j)
            xs = [v for v, (a, b) in owners.items() if {a, b} == {fi, fj}]

            def along(v, fi=fi):
                return min(p for p in where[v] if curve[p[0]].owner == fi)
            xs.sort(key=along)
            if l == 1:
                assert len(xs) == 2 * X_PER_PAIR, (s, len(xs))
                for n, v in enumerate(xs[:X_PER_PAIR], 1):
                    atlas[f"x^{n}_0({s})"] = v
                for n, v in enumerate(xs[X_PER_PAIR:], 1):
                    atlas[f"x^{n}_1({s})"] = v
            else:
                assert len(xs) == X_PER_PAIR, (s, i, j, len(xs))
                for n, v in enumerate(xs, 1):
                    atlas[f"x^{n}_{i}({s})"] = v
        for v, ci in enumerate(info):
            tag = curve[ci.over_seg].tag
            if tag and tag[1] == s:
                atlas[{"y": f"y({s})", "c": f"c({s})", "m": f"m({s})"}[tag[0]]] = v
    # premise stems crossing the outer strands of heads
    for s in order:
        gd = gadgets[s]
        for j, prem in enumerate(gd.premises, 1):
            _, hs, _, _ = dp.head(len(prem))
            c = gd.cells[g(s, j)]["c"]
            wx, ex = sorted((gd.X(c - 4), gd.X(c + 4)))
            for r, t in enumerate(prem, 1):
                y = -(hs[r - 1] - 1)
                for name, x in ((f"z^1_{j}({s},{t})", wx), (f"z^2_{j}({s},{t})", ex)):
                    hit = [v for v, ci in enumerate(info)
                           if ci.point == (x, y) and set(owners[v]) == {g(s, j), g(t, 1)}]
                    assert len(hit) == 1, (name, hit)
                    atlas[name] = hit[0]
    # stems crossing stems
    for v in range(len(info)):
        a, b = owners[v]
        if a != b and a[0] == b[0] == "g" and a[2] == b[2] == 1 and _in_channel(info[v], dp):
            newer, older = (a, b)
            base = f"r({newer[1]},{older[1]})"
            n = sum(1 for name in atlas if name.startswith(base + "#")) + 1
            atlas[f"{base}#{n}"] = v
    return atlas, owners


def _in_channel(ci, dp):
    return -ci.point[1] >= dp.channel - 1
