"""Local simplification of the Khovanov complex.

Crossings are added one at a time to a complex of crossingless tangles whose
boundary points are the diagram edges cut by the processed region.  After each
crossing, closed loops are removed (a loop is isomorphic to two shifted copies
of the empty tangle) and every isomorphism between objects is cancelled by
Gaussian elimination.  The base ring is Q[t] with the Frobenius algebra
Q[t][x]/(x^2 - t): t = 0 gives Khovanov homology, t = 1 the Lee deformation.

Morphisms between two crossingless tangles are linear combinations of dotted
cobordisms with no closed components.  Such a cobordism is determined by the
cycles of the union of the two matchings, so a morphism is stored as
``{(dotmask, tpow): coeff}`` with one dot bit per cycle.  Neck cutting turns
every connected cobordism into this normal form.

Gradings: an object ``(matching, h, q)`` stands for the tangle shifted by
``{q}``; a dot has q-degree -2 and t has q-degree -4.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


Matching = tuple  # sorted tuple of sorted pairs


def _matching(pairs) -> Matching:
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


@lru_cache(maxsize=None)
def _partner(m: Matching) -> dict:
    out = {}
    for a, b in m:
        out[a] = b
        out[b] = a
    return out


@lru_cache(maxsize=None)
def cycles(a: Matching, b: Matching) -> tuple[dict, int]:
    """Cycles of the union of two matchings on the same points.

    Returns ``(cycle_of_point, count)``; cycles are numbered in order of
    their smallest point.
    """
    pa, pb = _partner(a), _partner(b)
    cyc = {}
    n = 0
    for start in sorted(pa):
        if start in cyc:
            continue
        u = start
        while True:
            cyc[u] = n
            v = pa[u]
            cyc[v] = n
            u = pb[v]
            if u == start:
                break
        n += 1
    return cyc, n


@lru_cache(maxsize=None)
def _comultiplication(m: int, e: int) -> tuple:
    """Terms of Delta^(m-1)(x^e) as ``(subset_bits, tpow)``; counit for m = 0."""
    if m == 0:
        return ((0, 0),) if e == 1 else ()
    out = []
    for bits in range(1 << m):
        k = bin(bits).count("1")
        rest = m - 1 + e - k
        if rest >= 0 and rest % 2 == 0:
            out.append((bits, rest // 2))
    return tuple(out)


class _Surface:
    """Connected components of a glued cobordism, with their boundary cycles.

    ``disk_count`` disks are glued along ``seams``; ``boundary`` lists, for
    each boundary circle, the disk it lies on.
    """

    __slots__ = ("comps",)

    def __init__(self, disk_count, seams, boundary):
        parent = list(range(disk_count))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in seams:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        roots = {}
        info = []
        for d in range(disk_count):
            r = find(d)
            if r not in roots:
                roots[r] = len(info)
                info.append([0, 0, 0, []])  # disks, seams, disk mask, boundary idx
            c = info[roots[r]]
            c[0] += 1
            c[2] |= 1 << d
        for a, b in seams:
            info[roots[find(a)]][1] += 1
        for i, d in enumerate(boundary):
            info[roots[find(d)]][3].append(i)
        comps = []
        for disks, nseams, mask, bnd in info:
            chi = disks - nseams
            twice_genus = 2 - chi - len(bnd)
            if twice_genus < 0 or twice_genus % 2:
                raise AssertionError("inconsistent cobordism topology")
            comps.append((mask, twice_genus // 2, tuple(bnd)))
        self.comps = tuple(comps)

    def evaluate(self, dots_mask: int, extra_dots: dict, weight, tpow: int, out: dict):
        """Add ``weight * t^tpow *`` (the normal form of the surface with dots
        on the disks in ``dots_mask``, plus ``extra_dots[i]`` on component
        ``i``) into ``out`` keyed by boundary dot mask."""
        partial = [(0, tpow, weight)]
        for idx, (mask, genus, bnd) in enumerate(self.comps):
            dots = bin(dots_mask & mask).count("1") + genus + extra_dots.get(idx, 0)
            terms = _comultiplication(len(bnd), dots & 1)
            if not terms:
                return
            base_t = dots >> 1
            scale = 1 << genus
            nxt = []
            for bmask, bt, bw in partial:
                for bits, tt in terms:
                    m = bmask
                    for j, b in enumerate(bnd):
                        if bits >> j & 1:
                            m |= 1 << b
                    nxt.append((m, bt + base_t + tt, bw * scale))
            partial = nxt
        for m, tt, w in partial:
            key = (m, tt)
            v = out.get(key, 0) + w
            if v:
                out[key] = v
            else:
                out.pop(key, None)


def _add_into(out: dict, elem: dict, factor=1):
    for k, v in elem.items():
        w = out.get(k, 0) + factor * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)


@lru_cache(maxsize=None)
def _compose_surface(a: Matching, b: Matching, c: Matching) -> tuple:
    cab, k = cycles(a, b)
    cbc, l = cycles(b, c)
    cac, m = cycles(a, c)
    seams = [(cab[u], k + cbc[u]) for u, _ in b]
    reps = {}
    for u, i in cac.items():
        reps.setdefault(i, u)
    boundary = [cab[reps[i]] for i in range(m)]
    return _Surface(k + l, seams, boundary), k


def compose(g: dict, f: dict, a: Matching, b: Matching, c: Matching) -> dict:
    """``g o f`` for ``f: a -> b`` and ``g: b -> c``."""
    surf, k = _compose_surface(a, b, c)
    out = {}
    for (fm, ft), fc in f.items():
        for (gm, gt), gc in g.items():
            surf.evaluate(fm | (gm << k), {}, fc * gc, ft + gt, out)
    return out


# ---------------------------------------------------------------------------
# complexes


@dataclass
class _Obj:
    matching: Matching
    h: int
    q: int


@dataclass
class TangleComplex:
    """Complex over the category of crossingless tangles on ``boundary``."""

    boundary: tuple
    objects: dict = field(default_factory=dict)  # id -> _Obj
    out: dict = field(default_factory=lambda: defaultdict(dict))  # src -> {tgt: elem}
    inn: dict = field(default_factory=lambda: defaultdict(dict))  # tgt -> {src: elem}
    next_id: int = 0

    def add_object(self, obj: _Obj) -> int:
        i = self.next_id
        self.next_id += 1
        self.objects[i] = obj
        return i

    def set_entry(self, src: int, tgt: int, elem: dict):
        if elem:
            self.out[src][tgt] = elem
            self.inn[tgt][src] = elem
        else:
            self.out[src].pop(tgt, None)
            self.inn[tgt].pop(src, None)

    def remove(self, i: int):
        for t in list(self.out.get(i, {})):
            self.inn[t].pop(i, None)
        for s in list(self.inn.get(i, {})):
            self.out[s].pop(i, None)
        self.out.pop(i, None)
        self.inn.pop(i, None)
        del self.objects[i]

    def size(self) -> int:
        return len(self.objects)

    def d_squared_is_zero(self) -> bool:
        for src, mids in self.out.items():
            a = self.objects[src].matching
            acc = defaultdict(dict)
            for mid, f in mids.items():
                b = self.objects[mid].matching
                for tgt, g in self.out.get(mid, {}).items():
                    c = self.objects[tgt].matching
                    _add_into(acc[tgt], compose(g, f, a, b, c))
            if any(acc.values()):
                return False
        return True


def _invertible(elem: dict, src: _Obj, tgt: _Obj):
    if src.matching != tgt.matching or src.q != tgt.q or len(elem) != 1:
        return None
    (key, c), = elem.items()
    if key != (0, 0):
        return None
    return c


def simplify(cx: TangleComplex):
    """Cancel isomorphisms by Gaussian elimination until none remain."""
    objs = cx.objects
    work = list(objs)
    queued = set(work)
    while work:
        x = work.pop()
        queued.discard(x)
        if x not in objs:
            continue
        ox = objs[x]
        for y, elem in cx.out.get(x, {}).items():
            c = _invertible(elem, ox, objs[y])
            if c is None:
                continue
            touched = [w for w in cx.inn[y] if w != x]
            _eliminate(cx, x, y, c)
            for w in touched:
                if w in objs and w not in queued:
                    queued.add(w)
                    work.append(w)
            break


def _eliminate(cx: TangleComplex, x: int, y: int, c):
    """Cancel the isomorphism ``x -> y`` (a scalar ``c`` times identity).

    Each surviving entry ``w -> z`` with ``w -> y`` (delta) and ``x -> z``
    (gamma) becomes ``d - gamma c^-1 delta``.
    """
    objs = cx.objects
    inv = Fraction(1, 1) / c
    if inv.denominator == 1:
        inv = int(inv)
    mx = objs[x].matching
    into_y = [(w, e) for w, e in cx.inn[y].items() if w != x]
    from_x = [(z, e) for z, e in cx.out[x].items() if z != y]
    for w, delta in into_y:
        mw = objs[w].matching
        for z, gamma in from_x:
            mz = objs[z].matching
            corr = compose(gamma, delta, mw, mx, mz)
            if not corr:
                continue
            cur = dict(cx.out[w].get(z, {}))
            _add_into(cur, corr, -inv)
            cx.set_entry(w, z, cur)
    cx.remove(x)
    cx.remove(y)


# ---------------------------------------------------------------------------
# adding a crossing


class _CrossingStep:
    """Topological data for tensoring the complex with one crossing."""

    def __init__(self, old_boundary: tuple, x: tuple):
        self.x = x
        old = set(old_boundary)
        slots_of = defaultdict(list)
        for k, e in enumerate(x):
            slots_of[e].append(k)
        self.shared = {e: ks[0] for e, ks in slots_of.items() if e in old}
        self.kinks = [tuple(ks) for e, ks in slots_of.items() if len(ks) == 2]
        fresh = {e: ks[0] for e, ks in slots_of.items() if len(ks) == 1 and e not in old}
        self.node_of_label = {}
        for e in old_boundary:
            if e not in self.shared:
                self.node_of_label[e] = ("o", e)
        for e, k in fresh.items():
            self.node_of_label[e] = ("s", k)
        self.label_of_node = {v: k for k, v in self.node_of_label.items()}
        self.new_boundary = tuple(sorted(self.node_of_label))
        # seams between old points and slots, and between kink slots
        self.link = {}
        for e, k in self.shared.items():
            self.link[("o", e)] = ("s", k)
            self.link[("s", k)] = ("o", e)
        for k1, k2 in self.kinks:
            self.link[("s", k1)] = ("s", k2)
            self.link[("s", k2)] = ("s", k1)
        self._glue_cache = {}
        self._surf_cache = {}

    @staticmethod
    def smoothing_arcs(s: int):
        return ((0, 1), (2, 3)) if s == 0 else ((0, 3), (1, 2))

    def glue(self, m: Matching, s: int):
        """New matching and closed loops (as node lists) for old matching ``m``
        glued to smoothing ``s``."""
        key = (m, s)
        hit = self._glue_cache.get(key)
        if hit is not None:
            return hit
        arc = {}
        for a, b in m:
            arc[("o", a)] = ("o", b)
            arc[("o", b)] = ("o", a)
        for a, b in self.smoothing_arcs(s):
            arc[("s", a)] = ("s", b)
            arc[("s", b)] = ("s", a)
        seen = set()
        pairs = []
        for start in sorted(self.label_of_node):
            if start in seen:
                continue
            u = start
            seen.add(u)
            while True:
                v = arc[u]
                seen.add(v)
                if v in self.label_of_node:
                    break
                u = self.link[v]
                seen.add(u)
            pairs.append((self.label_of_node[start], self.label_of_node[v]))
        loops = []
        for start in sorted(arc):
            if start in seen:
                continue
            nodes = []
            u = start
            while u not in seen:
                seen.add(u)
                nodes.append(u)
                v = arc[u]
                seen.add(v)
                nodes.append(v)
                u = self.link[v]
            loops.append(tuple(nodes))
        res = (_matching(pairs), tuple(loops))
        self._glue_cache[key] = res
        return res

    def surface(self, m1: Matching, s1: int, m2: Matching, s2: int):
        """Surface of (morphism on the old part) x (identity or saddle) with
        all loops at both ends capped off.

        Boundary circles are the cycles of the two new matchings, in the
        canonical order; component indices of bottom and top loops are
        returned so that caps can add their dots.
        """
        key = (m1, s1, m2, s2)
        hit = self._surf_cache.get(key)
        if hit is not None:
            return hit
        n1, loops1 = self.glue(m1, s1)
        n2, loops2 = self.glue(m2, s2)
        cold, k = cycles(m1, m2)
        # crossing side: cycles of the union of the two smoothings on slots
        arcs1, arcs2 = self.smoothing_arcs(s1), self.smoothing_arcs(s2)
        ccross, l = cycles(_matching(arcs1), _matching(arcs2))

        def disk(node):
            kind, v = node
            return cold[v] if kind == "o" else k + ccross[v]

        seams = [(disk(a), disk(b)) for a, b in self.link.items() if a < b]
        cnew, nb = cycles(n1, n2)
        reps = {}
        for u, i in cnew.items():
            reps.setdefault(i, u)
        boundary = [disk(self.node_of_label[reps[i]]) for i in range(nb)]
        loop_bnd_start = len(boundary)
        for lp in loops1 + loops2:
            boundary.append(disk(lp[0]))
        surf = _Surface(k + l, seams, boundary)
        comp_of_bnd = {}
        for idx, (_, _, bnd) in enumerate(surf.comps):
            for b in bnd:
                comp_of_bnd[b] = idx
        bottom = [comp_of_bnd[loop_bnd_start + i] for i in range(len(loops1))]
        top = [comp_of_bnd[loop_bnd_start + len(loops1) + i] for i in range(len(loops2))]
        # strip the capped loop circles from the boundary lists
        keep = set(range(nb))
        comps = []
        for mask, genus, bnd in surf.comps:
            comps.append((mask, genus, tuple(b for b in bnd if b in keep)))
        surf.comps = tuple(comps)
        res = (surf, k, bottom, top, n1, n2, len(loops1), len(loops2))
        self._surf_cache[key] = res
        return res


def _loop_q(bits: int, n: int) -> int:
    ones = bin(bits).count("1")  # copies labelled "x"
    return (n - ones) - ones


def add_crossing(cx: TangleComplex, x: tuple) -> TangleComplex:
    """Tensor the complex with the crossing ``x`` (unshifted cube grading),
    deloop and simplify."""
    step = _CrossingStep(cx.boundary, x)
    new = TangleComplex(step.new_boundary)
    index = {}  # (old id, s, loop bits) -> new id
    for oid, o in cx.objects.items():
        for s in (0, 1):
            n, loops = step.glue(o.matching, s)
            for bits in range(1 << len(loops)):
                nid = new.add_object(_Obj(n, o.h + s, o.q + s + _loop_q(bits, len(loops))))
                index[(oid, s, bits)] = nid

    def emit(src_old, s1, tgt_old, s2, elem, sign):
        m1 = cx.objects[src_old].matching
        m2 = cx.objects[tgt_old].matching
        surf, k, bottom, top, _, _, nl1, nl2 = step.surface(m1, s1, m2, s2)
        for b1 in range(1 << nl1):
            for b2 in range(1 << nl2):
                # target copy "1" is projected by a dotted cap, copy "x" by a
                # plain cap; source copy "1" is included by a cup, copy "x"
                # by (dotted cup - t * cup)
                base = defaultdict(int)
                for i, comp in enumerate(top):
                    if not b2 >> i & 1:
                        base[comp] += 1
                xs = [bottom[i] for i in range(nl1) if b1 >> i & 1]
                out = {}
                for choice in range(1 << len(xs)):
                    extra = dict(base)
                    plain = 0
                    for j, comp in enumerate(xs):
                        if choice >> j & 1:
                            plain += 1
                        else:
                            extra[comp] = extra.get(comp, 0) + 1
                    w = -sign if plain & 1 else sign
                    for (fm, ft), fc in elem.items():
                        surf.evaluate(fm, extra, w * fc, ft + plain, out)
                if out:
                    src = index[(src_old, s1, b1)]
                    tgt = index[(tgt_old, s2, b2)]
                    cur = dict(new.out[src].get(tgt, {}))
                    _add_into(cur, out)
                    new.set_entry(src, tgt, cur)

    for src, targets in cx.out.items():
        for tgt, elem in targets.items():
            for s in (0, 1):
                emit(src, s, tgt, s, elem, 1)
    for oid, o in cx.objects.items():
        ident = {(0, 0): 1}
        emit(oid, 0, oid, 1, ident, -1 if o.h % 2 else 1)
    simplify(new)
    return new


def crossing_order(pd) -> list[int]:
    """Greedy order keeping the cut boundary small."""
    remaining = set(range(len(pd)))
    boundary = set()
    order = []
    while remaining:
        best = None
        for c in remaining:
            edges = pd[c]
            shared = sum(1 for e in edges if e in boundary)
            growth = sum(1 for e in set(edges) if edges.count(e) == 1 and e not in boundary) - shared
            key = (-shared, growth, c)
            if best is None or key < best[0]:
                best = (key, c)
        c = best[1]
        order.append(c)
        remaining.discard(c)
        for e in pd[c]:
            if e in boundary:
                boundary.discard(e)
            elif pd[c].count(e) == 1:
                boundary.add(e)
    return order


@dataclass
class ReducedComplex:
    """Complex of free Q[t]-modules with final (shifted) gradings.

    ``objects`` maps ids to ``(h, q)``; ``entries`` maps ``(src, tgt)`` to
    ``{tpow: coeff}``.
    """

    objects: dict
    entries: dict

    def ranks(self) -> dict:
        out = defaultdict(int)
        for h, q in self.objects.values():
            out[(h, q)] += 1
        return dict(out)

    def d_squared_is_zero(self) -> bool:
        """d o d = 0 as polynomials in t."""
        out = defaultdict(dict)
        for (src, tgt), poly in self.entries.items():
            out[src][tgt] = poly
        for src, mids in out.items():
            acc = defaultdict(lambda: defaultdict(int))
            for mid, f in mids.items():
                for tgt, g in out.get(mid, {}).items():
                    for i, a in f.items():
                        for j, b in g.items():
                            acc[tgt][i + j] += a * b
            if any(v for row in acc.values() for v in row.values()):
                return False
        return True


def reduce_diagram(pd, signs, free_loops: int = 0, progress=None, check: bool = False) -> ReducedComplex:
    """Minimal complex over Q[t] for the diagram (global shifts applied).

    With ``check`` the relation d o d = 0 is verified after every crossing.
    """
    cx = TangleComplex(())
    for bits in range(1 << free_loops):
        cx.add_object(_Obj((), 0, _loop_q(bits, free_loops)))
    for step, c in enumerate(crossing_order(pd)):
        cx = add_crossing(cx, tuple(pd[c]))
        if check and not cx.d_squared_is_zero():
            raise AssertionError(f"d o d != 0 after crossing {c}")
        if progress:
            progress(step + 1, len(pd), cx.size())
    n_plus = sum(1 for s in signs if s > 0)
    n_minus = len(signs) - n_plus
    objects = {i: (o.h - n_minus, o.q + n_plus - 2 * n_minus) for i, o in cx.objects.items()}
    entries = {}
    for src, targets in cx.out.items():
        for tgt, elem in targets.items():
            poly = {}
            for (mask, tp), c in elem.items():
                assert mask == 0
                poly[tp] = poly.get(tp, 0) + c
            poly = {k: v for k, v in poly.items() if v}
            if poly:
                entries[(src, tgt)] = poly
    return ReducedComplex(objects, entries)
