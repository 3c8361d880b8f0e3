"""Oriented planar diagrams as PD codes.

Conventions
-----------
A crossing is a 4-tuple of edge labels listed counterclockwise.  Slots 0 and
2 carry the under-strand, slots 1 and 3 the over-strand, and slot 0 is the
*incoming* end of the under-strand.  The sign is stored explicitly: a crossing
is positive when the over-strand enters at slot 3 and leaves at slot 1.

The 0-smoothing joins slots (0,1) and (2,3); the 1-smoothing joins (0,3) and
(1,2).  For a positive crossing the 0-smoothing is the oriented resolution,
for a negative crossing the 1-smoothing is.

Edges are relabelled 1..2n along the orientation, component by component.
Crossingless unknotted components cannot be written in a PD code and are
carried as a count in ``free_loops``.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import symmetric_signature


class DiagramError(ValueError):
    """Raised for malformed diagrams or invalid diagram operations."""


@dataclass(frozen=True)
class Crossing:
    incident_edges: tuple[int, int, int, int]
    sign: int


@dataclass(frozen=True)
class LinkDiagram:
    pd: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    free_loops: int = 0
    _components: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        pd = tuple(tuple(int(e) for e in x) for x in self.pd)
        signs = tuple(int(s) for s in self.signs)
        object.__setattr__(self, "pd", pd)
        object.__setattr__(self, "signs", signs)
        if len(pd) != len(signs):
            raise DiagramError("pd and signs differ in length")
        if any(len(x) != 4 for x in pd):
            raise DiagramError("every crossing needs exactly 4 edges")
        if any(s not in (1, -1) for s in signs):
            raise DiagramError("signs must be +1 or -1")
        if self.free_loops < 0:
            raise DiagramError("free_loops must be nonnegative")
        ends = defaultdict(list)
        for c, x in enumerate(pd):
            for k, e in enumerate(x):
                ends[e].append((c, k))
        bad = [e for e, v in ends.items() if len(v) != 2]
        if bad:
            raise DiagramError(f"edges {sorted(bad)} do not appear exactly twice")
        # each edge must be entered once and left once
        inflow = defaultdict(int)
        outflow = defaultdict(int)
        for x, s in zip(pd, signs):
            over_in, over_out = (3, 1) if s == 1 else (1, 3)
            inflow[x[0]] += 1
            inflow[x[over_in]] += 1
            outflow[x[2]] += 1
            outflow[x[over_out]] += 1
        for e in ends:
            if inflow[e] != 1 or outflow[e] != 1:
                raise DiagramError(f"orientation is inconsistent along edge {e}")
        object.__setattr__(self, "_components", _trace_oriented(pd, signs))

    @property
    def crossings(self) -> list[Crossing]:
        return [Crossing(x, s) for x, s in zip(self.pd, self.signs)]

    @property
    def n_crossings(self) -> int:
        return len(self.pd)

    @property
    def edge_count(self) -> int:
        return 2 * len(self.pd)

    @property
    def orientation(self) -> tuple[tuple[int, ...], ...]:
        """Edge labels of each component in traversal order."""
        return self._components

    @property
    def component_count(self) -> int:
        return len(self._components) + self.free_loops

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def is_knot(self) -> bool:
        return self.component_count == 1

    def to_json(self) -> str:
        payload = {
            "free_loops": self.free_loops,
            "orientation": [list(c) for c in self.orientation],
            "pd": [list(x) for x in self.pd],
            "signs": list(self.signs),
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LinkDiagram":
        try:
            data = json.loads(text)
            pd = [tuple(x) for x in data["pd"]]
            signs = data.get("signs")
        except (ValueError, KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from exc
        if signs is None:
            signs = [_sign_from_numbering(x, 2 * len(pd)) for x in pd]
        d = cls(pd, signs, int(data.get("free_loops", 0)))
        orient = data.get("orientation")
        if orient is not None:
            given = sorted(tuple(c) for c in orient)
            if given != sorted(d.orientation):
                raise DiagramError("orientation field disagrees with pd and signs")
        return d


def _sign_from_numbering(x, n_edges):
    # KnotTheory-style fallback when signs are omitted and edges follow the orientation
    b, d = x[1], x[3]
    return 1 if (b - d) % n_edges == 1 else -1


def _trace_oriented(pd, signs):
    """Components of an oriented PD code as edge sequences."""
    succ = {}
    for x, s in zip(pd, signs):
        succ[x[0]] = x[2]
        if s == 1:
            succ[x[3]] = x[1]
        else:
            succ[x[1]] = x[3]
    seen = set()
    comps = []
    for e in sorted(succ):
        if e in seen:
            continue
        cyc = [e]
        seen.add(e)
        nxt = succ[e]
        while nxt != e:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = succ[nxt]
        comps.append(tuple(cyc))
    return tuple(comps)


# ---------------------------------------------------------------------------
# unoriented assembly


def _edge_ends(upd):
    ends = defaultdict(list)
    for c, x in enumerate(upd):
        for k, e in enumerate(x):
            ends[e].append((c, k))
    return ends


def _other_end(ends, e, here):
    a, b = ends[e]
    return b if a == here else a


def _unoriented_components(upd, hint=None):
    """Traverse strands of an unoriented PD code (under strand on slots 0/2).

    Returns a list of components, each a list of ``(edge, head)`` pairs where
    ``head`` is the ``(crossing, slot)`` the edge flows into.  The starting
    direction of each component agrees with ``hint`` on as many edges as
    possible.
    """
    ends = _edge_ends(upd)
    hint = hint or {}
    seen = set()
    comps = []
    for e0 in sorted(ends):
        if e0 in seen:
            continue
        walk = []
        e, head = e0, ends[e0][1]
        while True:
            walk.append((e, head))
            seen.add(e)
            c, k = head
            out = (c, (k + 2) % 4)
            e = upd[c][out[1]]
            head = _other_end(ends, e, out)
            if e == e0 and head == walk[0][1]:
                break
        agree = sum(1 for f, h in walk if hint.get(f) == h)
        against = sum(1 for f, h in walk if f in hint and hint[f] != h)
        if against > agree:
            walk = _reverse_walk(walk, ends)
        comps.append(walk)
    return comps


def _reverse_walk(walk, ends):
    rev = []
    for e, head in reversed(walk):
        rev.append((e, _other_end(ends, e, head)))
    # keep the same starting edge
    i = [e for e, _ in rev].index(walk[0][0])
    return rev[i:] + rev[:i]


def _crossing_signs(upd, walks):
    heads = {}
    for walk in walks:
        for _, head in walk:
            heads[head] = True
    signs = []
    for c in range(len(upd)):
        under_in = 0 if (c, 0) in heads else 2
        over_in = 3 if (c, 3) in heads else 1
        if under_in == 2:
            over_in = 4 - over_in  # rotate by two
        signs.append(1 if over_in == 3 else -1)
    return signs


ORIENTATION_POLICIES = ("inherit", "max_positive")


def _assemble(upd, free_loops, hint=None, orientation_choice=None, policy="base"):
    """Orient an unoriented PD code and relabel edges along the orientation.

    ``orientation_choice`` holds one flag per component (base traversal
    order); a true flag reverses that component.  It may also be one of the
    strings ``"inherit"`` or ``"max_positive"``, which select a policy.
    Without it, ``policy`` decides: ``"base"`` keeps the hinted orientation,
    ``"max_positive"`` picks the relative orientation with the most positive
    crossings.
    """
    ends = _edge_ends(upd)
    base = _unoriented_components(upd, hint)
    ncomp = len(base)
    if isinstance(orientation_choice, str):
        if orientation_choice not in ORIENTATION_POLICIES:
            raise DiagramError(f"unknown orientation policy {orientation_choice!r}")
        policy = "base" if orientation_choice == "inherit" else orientation_choice
        orientation_choice = None
    if orientation_choice is not None:
        flags = tuple(bool(f) for f in orientation_choice)
        if len(flags) != ncomp:
            raise DiagramError(f"orientation_choice needs {ncomp} flags, got {len(flags)}")
    elif policy == "max_positive" and ncomp > 1:
        hint = hint or {}
        best = None
        for rest in itertools.product((False, True), repeat=ncomp - 1):
            cand = (False,) + rest
            walks = [(_reverse_walk(w, ends) if f else w) for w, f in zip(base, cand)]
            pos = sum(1 for s in _crossing_signs(upd, walks) if s > 0)
            agree = sum(1 for w in walks for e, h in w if hint.get(e) == h)
            key = (pos, agree)
            if best is None or key > best[0]:
                best = (key, cand)
        flags = best[1]
    else:
        flags = (False,) * ncomp
    walks = [(_reverse_walk(w, ends) if f else w) for w, f in zip(base, flags)]
    signs = _crossing_signs(upd, walks)
    label = {}
    for walk in walks:
        for e, _ in walk:
            label[e] = len(label) + 1
    heads = {h for walk in walks for _, h in walk}
    pd = []
    for c, x in enumerate(upd):
        y = tuple(label[e] for e in x)
        if (c, 0) not in heads:
            y = y[2:] + y[:2]
        pd.append(y)
    return LinkDiagram(tuple(pd), tuple(signs), free_loops)


class _Wiring:
    """Graph of crossing ports and pass-through points used to build diagrams."""

    def __init__(self):
        self.links = defaultdict(list)
        self.crossings = []  # per crossing: port order (under-first, ccw)

    def add_crossing(self, port_order):
        self.crossings.append(tuple(port_order))
        return len(self.crossings) - 1

    def connect(self, a, b):
        self.links[a].append(b)
        self.links[b].append(a)

    def build(self):
        edge_of = {}
        n_edges = 0
        for c, order in enumerate(self.crossings):
            for port in order:
                start = ("x", c, port)
                if start in edge_of:
                    continue
                prev, cur = start, self.links[start][0]
                while cur[0] != "x":
                    a, b = self.links[cur]
                    prev, cur = cur, (b if a == prev else a)
                    if cur == start:
                        break
                edge_of[start] = n_edges
                edge_of[cur] = n_edges
                n_edges += 1
        # closed loops made only of pass-through points
        seen = set()
        loops = 0
        for node in self.links:
            if node[0] == "x" or node in seen:
                continue
            stack = [node]
            touches_crossing = False
            comp = set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                for w in self.links[v]:
                    if w[0] == "x":
                        touches_crossing = True
                    elif w not in comp:
                        stack.append(w)
            seen |= comp
            if not touches_crossing:
                loops += 1
        upd = [tuple(edge_of[("x", c, port)] for port in order) for c, order in enumerate(self.crossings)]
        return upd, loops


# ports of a column crossing, counterclockwise
_SW, _SE, _NE, _NW = 0, 1, 2, 3


def _add_column(w, col, n):
    """Add a vertical twist region with ``n`` signed half twists.

    A positive entry puts the SW-NE strand over; with antiparallel strands such
    a crossing is negative, with parallel strands positive.  Crossings are
    created top-down.
    """
    T = lambda pos: ("t", col, pos)  # noqa: E731
    if n == 0:
        w.connect(T("TL"), T("BL"))
        w.connect(T("TR"), T("BR"))
        return []
    order = (_SE, _NE, _NW, _SW) if n > 0 else (_SW, _SE, _NE, _NW)
    ids = [w.add_crossing(order) for _ in range(abs(n))]
    w.connect(T("TL"), ("x", ids[0], _NW))
    w.connect(T("TR"), ("x", ids[0], _NE))
    for a, b in zip(ids, ids[1:]):
        w.connect(("x", a, _SW), ("x", b, _NW))
        w.connect(("x", a, _SE), ("x", b, _NE))
    w.connect(T("BL"), ("x", ids[-1], _SW))
    w.connect(T("BR"), ("x", ids[-1], _SE))
    return ids


def pretzel_diagram(p: int, q: int, r: int, orientation_choice=None) -> LinkDiagram:
    """Standard diagram of the pretzel link P(p, q, r).

    Crossings are listed column by column (p, then q, then r), top-down within
    each column.  A zero entry is a column of two parallel vertical strands,
    so P(p, q, 0) is T(2, p) # T(2, q).  Without ``orientation_choice`` the
    relative orientation of the components maximizes positive crossings.
    """
    w = _Wiring()
    for col, n in enumerate((p, q, r)):
        _add_column(w, col, n)
    for top in ("T", "B"):
        for col in range(3):
            w.connect(("t", col, top + "R"), ("t", (col + 1) % 3, top + "L"))
    upd, loops = w.build()
    return _assemble(upd, loops, orientation_choice=orientation_choice, policy="max_positive")


def pretzel_columns(p: int, q: int, r: int) -> list[list[int]]:
    """Crossing indices of each column of ``pretzel_diagram``, top-down."""
    out, start = [], 0
    for n in (p, q, r):
        out.append(list(range(start, start + abs(n))))
        start += abs(n)
    return out


def torus2_diagram(n: int, orientation_choice=None) -> LinkDiagram:
    """Closure of the 2-strand braid with ``n`` half twists, T(2, n)."""
    w = _Wiring()
    _add_column(w, 0, n)
    w.connect(("t", 0, "TL"), ("t", 0, "BL"))
    w.connect(("t", 0, "TR"), ("t", 0, "BR"))
    upd, loops = w.build()
    return _assemble(upd, loops, orientation_choice=orientation_choice, policy="max_positive")


def unknot(kinks: int = 0, sign: int = 1) -> LinkDiagram:
    """Round unknot, optionally carrying a chain of Reidemeister-I kinks of
    the given sign."""
    if kinks == 0:
        return LinkDiagram((), (), 1)
    n = 2 * kinks
    upd = []
    for k in range(kinks):
        through, loop = 2 * k + 1, 2 * k + 2
        nxt = (through + 1) % n + 1
        upd.append((through, nxt, loop, loop) if sign > 0 else (through, loop, loop, nxt))
    return _assemble(upd, 0)


def reorient(d: LinkDiagram, orientation_choice) -> LinkDiagram:
    """Reverse the components flagged in ``orientation_choice`` (one flag per
    component of ``d.orientation``)."""
    hint = _heads(d)
    return _assemble(d.pd, d.free_loops, hint=hint, orientation_choice=orientation_choice)


def _heads(d: LinkDiagram):
    hint = {}
    for c, (x, s) in enumerate(zip(d.pd, d.signs)):
        hint[x[0]] = (c, 0)
        if s == 1:
            hint[x[3]] = (c, 3)
        else:
            hint[x[1]] = (c, 1)
    return hint


def is_oriented_smoothing(d: LinkDiagram, index: int, smoothing: int) -> bool:
    return (d.signs[index] == 1) == (smoothing == 0)


def resolve(d: LinkDiagram, crossing_index: int, smoothing: int, orientation_choice=None) -> LinkDiagram:
    """Smooth one crossing.

    The oriented smoothing inherits the orientation of ``d``.  The other
    smoothing has no canonical orientation: ``orientation_choice`` (one flag
    per component, relative to the orientation agreeing best with ``d``, or
    ``"inherit"`` / ``"max_positive"``) is used when given, otherwise the
    relative orientation with the most positive crossings is taken.
    """
    n = d.n_crossings
    if not 0 <= crossing_index < n:
        raise DiagramError(f"crossing index {crossing_index} out of range for {n} crossings")
    if smoothing not in (0, 1):
        raise DiagramError("smoothing must be 0 or 1")
    x = d.pd[crossing_index]
    parent = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    arcs = ((0, 1), (2, 3)) if smoothing == 0 else ((0, 3), (1, 2))
    for a, b in arcs:
        ra, rb = find(x[a]), find(x[b])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    keep = [c for c in range(n) if c != crossing_index]
    newidx = {c: i for i, c in enumerate(keep)}
    upd = [tuple(find(e) for e in d.pd[c]) for c in keep]
    present = {e for y in upd for e in y}
    loops = len({find(e) for e in x} - present)
    # orientation hint: heads of surviving edge ends
    hint = {}
    for e, (c, k) in _heads(d).items():
        if c != crossing_index:
            hint.setdefault(find(e), (newidx[c], k))
    # a merged edge entering the smoothed crossing gets its head from the
    # other member of its class
    oriented = is_oriented_smoothing(d, crossing_index, smoothing)
    policy = "base" if oriented else "max_positive"
    return _assemble(upd, d.free_loops + loops, hint=hint, orientation_choice=orientation_choice, policy=policy)


def resolve_all(d: LinkDiagram, smoothings) -> LinkDiagram:
    """Smooth every crossing; returns a crossingless diagram."""
    if len(smoothings) != d.n_crossings:
        raise DiagramError("need one smoothing per crossing")
    circles = count_smoothing_circles(d, smoothings)
    return LinkDiagram((), (), circles)


def count_smoothing_circles(d: LinkDiagram, smoothings) -> int:
    parent = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for x, s in zip(d.pd, smoothings):
        if s == 0:
            union(x[0], x[1])
            union(x[2], x[3])
        else:
            union(x[0], x[3])
            union(x[1], x[2])
    edges = {e for x in d.pd for e in x}
    return len({find(e) for e in edges}) + d.free_loops


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing."""
    pd, signs = [], []
    for x, s in zip(d.pd, d.signs):
        if s == 1:
            pd.append((x[3], x[0], x[1], x[2]))
        else:
            pd.append((x[1], x[2], x[3], x[0]))
        signs.append(-s)
    return LinkDiagram(tuple(pd), tuple(signs), d.free_loops)


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class DiagramStats:
    writhe: int
    seifert_circle_count: int
    strongly_negative_count: int
    non_negative_count: int
    n_plus: int
    n_minus: int


def seifert_circles(d: LinkDiagram) -> list[set[int]]:
    """Seifert circles as sets of adjacent crossing indices (free loops give
    empty sets)."""
    parent = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for x, s in zip(d.pd, d.signs):
        if s == 1:
            union(x[0], x[1])
            union(x[2], x[3])
        else:
            union(x[0], x[3])
            union(x[1], x[2])
    adjacent = defaultdict(set)
    for c, x in enumerate(d.pd):
        for e in x:
            adjacent[find(e)].add(c)
    circles = [adjacent[r] for r in sorted(adjacent)]
    circles.extend(set() for _ in range(d.free_loops))
    return circles


def stats(d: LinkDiagram) -> DiagramStats:
    circles = seifert_circles(d)
    strongly_negative = 0
    for adj in circles:
        signs = [d.signs[c] for c in adj]
        if sum(1 for s in signs if s < 0) >= 2 and all(s < 0 for s in signs):
            strongly_negative += 1
    return DiagramStats(
        writhe=d.writhe,
        seifert_circle_count=len(circles),
        strongly_negative_count=strongly_negative,
        non_negative_count=len(circles) - strongly_negative,
        n_plus=d.n_plus,
        n_minus=d.n_minus,
    )


def _require_knot(d: LinkDiagram, what: str):
    if d.component_count != 1:
        raise DiagramError(f"{what} needs a knot diagram, got {d.component_count} components")


def slice_bennequin_bounds(d: LinkDiagram) -> tuple[int, int | None]:
    """Lower bounds for s: ``w - O + 1`` and the sharper
    ``w - (O_ge - O_lt) + 1`` (``None`` when every Seifert circle is
    strongly negative)."""
    _require_knot(d, "slice-Bennequin bounds")
    st = stats(d)
    plain = st.writhe - st.seifert_circle_count + 1
    if st.non_negative_count < 1:
        return plain, None
    sharper = st.writhe - (st.non_negative_count - st.strongly_negative_count) + 1
    return plain, sharper


def omega(p: int, q: int, r: int) -> int:
    return p * q + q * r + r * p


# ---------------------------------------------------------------------------
# signature


def _faces(d: LinkDiagram):
    """Faces as orbits of crossing corners; corner (c, k) lies between slots
    k and k+1."""
    ends = _edge_ends(d.pd)
    face_of = {}
    nf = 0
    for c in range(d.n_crossings):
        for k in range(4):
            if (c, k) in face_of:
                continue
            cur = (c, k)
            while cur not in face_of:
                face_of[cur] = nf
                cc, kk = cur
                slot = (kk + 1) % 4
                cur = _other_end(ends, d.pd[cc][slot], (cc, slot))
            nf += 1
    return face_of, nf


def _goeritz_signature(d: LinkDiagram, white_parity: int) -> int:
    face_of, nf = _faces(d)
    # checkerboard colour: corners k and k+1 of a crossing get opposite colours
    colour = {}
    adj = defaultdict(list)
    for c in range(d.n_crossings):
        for k in range(4):
            f, g = face_of[(c, k)], face_of[(c, (k + 1) % 4)]
            adj[f].append(g)
            adj[g].append(f)
    for start in range(nf):
        if start in colour:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if g not in colour:
                    colour[g] = 1 - colour[f]
                    stack.append(g)
                elif colour[g] == colour[f]:
                    raise DiagramError("diagram is not checkerboard colourable")
    white = sorted(f for f in range(nf) if colour[f] == white_parity)
    index = {f: i for i, f in enumerate(white)}
    size = len(white)
    g = [[Fraction(0)] * size for _ in range(size)]
    mu = 0
    for c, (x, s) in enumerate(zip(d.pd, d.signs)):
        # white corners are {0, 2} or {1, 3}
        even_white = colour[face_of[(c, 0)]] == white_parity
        eta = 1 if even_white else -1
        a, b = (face_of[(c, 0)], face_of[(c, 2)]) if even_white else (face_of[(c, 1)], face_of[(c, 3)])
        # the oriented smoothing merges corners {1, 3} when positive, {0, 2} when negative
        merges_white = (s == 1) != even_white
        if not merges_white:
            mu += eta
        if a != b:
            i, j = index[a], index[b]
            g[i][j] -= eta
            g[j][i] -= eta
            g[i][i] += eta
            g[j][j] += eta
    reduced = [row[1:] for row in g[1:]]
    return symmetric_signature(reduced) - mu


def signature(d: LinkDiagram) -> int:
    """Knot signature from a Goeritz matrix with the Gordon-Litherland
    correction.  The convention gives sigma(T(2,3)) = -2."""
    _require_knot(d, "signature")
    if d.n_crossings == 0:
        return 0
    return _goeritz_signature(d, 0)
