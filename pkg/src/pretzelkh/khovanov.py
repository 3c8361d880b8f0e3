"""Rational Khovanov homology.

Two routes are provided.  ``cube_complex`` builds the full cube of
resolutions and is meant as a reference for small diagrams.
``khovanov_homology`` runs the local simplification in :mod:`.scanning`,
which handles the pretzel diagrams of the tables in well under a minute.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

from . import scanning
from .diagram import LinkDiagram
from .linalg import rank
from .polynomial import Laurent, PoincarePolynomial, Q, QINV

CUBE_CROSSING_LIMIT = 22


class CrossingLimitError(RuntimeError):
    """The diagram has more crossings than the requested method allows."""


class Bigrading(NamedTuple):
    i: int
    j: int


class BigradedDims:
    """Ranks indexed by bigrading ``(i, j)``; zero ranks are not stored."""

    __slots__ = ("_ranks",)

    def __init__(self, ranks=None):
        self._ranks = {Bigrading(int(i), int(j)): int(r) for (i, j), r in (ranks or {}).items() if r}
        if any(r < 0 for r in self._ranks.values()):
            raise ValueError("ranks must be nonnegative")

    def __getitem__(self, key) -> int:
        return self._ranks.get(Bigrading(*key), 0)

    def items(self):
        return sorted(self._ranks.items())

    def as_dict(self) -> dict:
        return {tuple(k): v for k, v in self._ranks.items()}

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def support(self) -> list[Bigrading]:
        return sorted(self._ranks)

    def shifted(self, di: int, dj: int) -> "BigradedDims":
        return BigradedDims({(i + di, j + dj): r for (i, j), r in self._ranks.items()})

    def __eq__(self, other):
        return isinstance(other, BigradedDims) and self._ranks == other._ranks

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        return f"BigradedDims({dict(self.items())})"

    def to_json(self) -> str:
        ranks = [{"i": i, "j": j, "rank": r} for (i, j), r in self.items()]
        return json.dumps({"ranks": ranks}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BigradedDims":
        data = json.loads(text)
        return cls({(e["i"], e["j"]): e["rank"] for e in data["ranks"]})


# ---------------------------------------------------------------------------
# the cube of resolutions


@dataclass
class ChainComplex:
    """Cochain complex with a basis in each homological degree.

    ``generators[h]`` lists ``(state, labels, q)`` for each basis vector of
    C^h: the resolution as a bit vector over crossings, the circle labelling
    as a bit mask (1 means ``x``) and the quantum degree.
    ``differential[h]`` maps a basis index of C^h to its image in C^{h+1}
    as a sparse dict.
    """

    generators: dict
    differential: dict

    @property
    def degrees(self) -> dict:
        return {h: [g[2] for g in gens] for h, gens in self.generators.items()}

    def dims(self) -> BigradedDims:
        out = defaultdict(int)
        for h, gens in self.generators.items():
            for g in gens:
                out[(h, g[2])] += 1
        return BigradedDims(out)

    def d_squared_is_zero(self) -> bool:
        for h, cols in self.differential.items():
            nxt = self.differential.get(h + 1, {})
            for image in cols.values():
                total = {}
                for mid, a in image.items():
                    for tgt, b in nxt.get(mid, {}).items():
                        total[tgt] = total.get(tgt, 0) + a * b
                if any(total.values()):
                    return False
        return True


def _smoothing_circles(pd, state):
    parent = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    for c, x in enumerate(pd):
        arcs = ((0, 1), (2, 3)) if not state >> c & 1 else ((0, 3), (1, 2))
        for a, b in arcs:
            ra, rb = find(x[a]), find(x[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(e) for x in pd for e in x})
    index = {r: i for i, r in enumerate(roots)}
    return {e: index[find(e)] for x in pd for e in x}, len(roots)


def _split(mask, i, j):
    """Remove bits ``i`` and ``j`` (i < j) from mask, returning (rest, bi, bj)."""
    bi, bj = mask >> i & 1, mask >> j & 1
    low = mask & ((1 << i) - 1)
    mid = (mask >> (i + 1)) & ((1 << (j - i - 1)) - 1)
    high = mask >> (j + 1)
    return low | (mid << i) | (high << (j - 1)), bi, bj


def _insert(rest, pos, bit):
    low = rest & ((1 << pos) - 1)
    return low | (bit << pos) | ((rest >> pos) << (pos + 1))


def cube_complex(d: LinkDiagram, lee_t=0, max_crossings: int = CUBE_CROSSING_LIMIT) -> ChainComplex:
    """Khovanov cube complex with Frobenius algebra Q[x]/(x^2 - lee_t).

    ``lee_t = 0`` gives the Khovanov complex (q-graded differential); a
    nonzero value gives the Lee complex, which is only q-filtered.  Basis
    vectors are (state, label mask) with label bit 1 meaning ``x``.
    """
    n = d.n_crossings
    if n > max_crossings:
        raise CrossingLimitError(f"{n} crossings exceeds the cube limit of {max_crossings}")
    pd = d.pd
    extra = d.free_loops
    n_minus = d.n_minus
    shift_q = d.n_plus - 2 * n_minus
    circles = {}
    for state in range(1 << n):
        cmap, count = _smoothing_circles(pd, state)
        circles[state] = (cmap, count + extra)
    generators = defaultdict(list)
    index = {}
    for state in range(1 << n):
        h = bin(state).count("1")
        _, m = circles[state]
        for mask in range(1 << m):
            xs = bin(mask).count("1")
            q = h + (m - xs) - xs + shift_q
            index[(state, mask)] = len(generators[h - n_minus])
            generators[h - n_minus].append((state, mask, q))
    differential = defaultdict(dict)
    for state in range(1 << n):
        cmap, m = circles[state]
        h = bin(state).count("1")
        for c in range(n):
            if state >> c & 1:
                continue
            tgt = state | (1 << c)
            tmap, m2 = circles[tgt]
            sign = -1 if bin(state & ((1 << c) - 1)).count("1") % 2 else 1
            x = pd[c]
            a, b = cmap[x[0]], cmap[x[2]]
            for mask in range(1 << m):
                image = {}
                if a != b:
                    # merge: circles a, b of the source become tmap[x[0]]
                    i, j = min(a, b), max(a, b)
                    rest, bi, bj = _split(mask, i, j)
                    pos = tmap[x[0]]
                    if bi and bj:
                        if lee_t:
                            image[_insert(rest, pos, 0)] = lee_t
                    else:
                        image[_insert(rest, pos, bi | bj)] = 1
                else:
                    # split: circle a becomes tmap[x[0]] and tmap[x[1]]
                    p1, p2 = tmap[x[0]], tmap[x[1]]
                    lo, hi = min(p1, p2), max(p1, p2)
                    bit = mask >> a & 1
                    rest = (mask & ((1 << a) - 1)) | ((mask >> (a + 1)) << a)

                    def put(b_lo, b_hi, coeff):
                        v = _insert(_insert(rest, lo, b_lo), hi, b_hi)
                        image[v] = image.get(v, 0) + coeff

                    if bit == 0:
                        put(1, 0, 1)
                        put(0, 1, 1)
                    else:
                        put(1, 1, 1)
                        if lee_t:
                            put(0, 0, lee_t)
                image = {index[(tgt, v)]: sign * w for v, w in image.items() if w}
                src = index[(state, mask)]
                row = differential[h - n_minus].setdefault(src, {})
                for k, w in image.items():
                    row[k] = row.get(k, 0) + w
    return ChainComplex(dict(generators), dict(differential))


def homology_dims(cx: ChainComplex) -> BigradedDims:
    """Homology ranks of a q-graded complex, computed per quantum degree."""
    # rank of d^h restricted to each q block
    block_rank = {}
    degrees = cx.degrees
    for h, columns in cx.differential.items():
        qs = degrees[h]
        qt = degrees.get(h + 1, [])
        rows = defaultdict(list)
        for src, image in columns.items():
            for tgt in image:
                if qt[tgt] != qs[src]:
                    raise ValueError("differential does not preserve the quantum grading")
            if image:
                rows[qs[src]].append(image)
        for q, vecs in rows.items():
            block_rank[(h, q)] = rank(vecs)
    out = {}
    for (h, q), dim in cx.dims().items():
        r = dim - block_rank.get((h, q), 0) - block_rank.get((h - 1, q), 0)
        if r:
            out[(h, q)] = r
    return BigradedDims(out)


# ---------------------------------------------------------------------------
# fast route


def reduced_complex(d: LinkDiagram, progress=None) -> scanning.ReducedComplex:
    return scanning.reduce_diagram(d.pd, d.signs, d.free_loops, progress=progress)


def khovanov_homology(d: LinkDiagram, method: str = "auto", max_crossings: int | None = None, progress=None) -> BigradedDims:
    """Rational Khovanov homology of a diagram.

    ``method`` is ``"scan"`` (local simplification), ``"cube"`` (full cube of
    resolutions) or ``"auto"`` (scan).
    """
    if max_crossings is not None and d.n_crossings > max_crossings:
        raise CrossingLimitError(f"{d.n_crossings} crossings exceeds the limit of {max_crossings}")
    if method == "cube":
        return homology_dims(cube_complex(d))
    if method not in ("auto", "scan"):
        raise ValueError(f"unknown method {method!r}")
    red = reduced_complex(d, progress=progress)
    # at t = 0 every surviving entry carries a positive power of t and
    # vanishes, so the minimal complex has zero differential
    return BigradedDims(red.ranks())


def poincare_polynomial(dims: BigradedDims) -> PoincarePolynomial:
    return PoincarePolynomial({(j, i): r for (i, j), r in dims.items()})


def graded_euler_characteristic(dims: BigradedDims) -> Laurent:
    out = defaultdict(int)
    for (i, j), r in dims.items():
        out[j] += (-1) ** (i % 2) * r
    return Laurent(out)


def jones_kauffman(d: LinkDiagram) -> Laurent:
    """Unnormalised Jones polynomial from the Kauffman state sum,
    ``(-1)^n- q^(n+ - 2n-) sum_states (-q)^r (q + q^-1)^circles``."""
    from .diagram import count_smoothing_circles

    n = d.n_crossings
    loop = Q + QINV
    total = Laurent()
    by_count = defaultdict(int)
    for state in range(1 << n):
        smoothing = [state >> c & 1 for c in range(n)]
        r = sum(smoothing)
        by_count[(r, count_smoothing_circles(d, smoothing))] += 1
    for (r, k), mult in by_count.items():
        total = total + Laurent({r: (-1) ** r * mult}) * loop ** k
    return total * Laurent({d.n_plus - 2 * d.n_minus: (-1) ** d.n_minus})


def latex_table(dims: BigradedDims, caption: str = "") -> str:
    """Rank table with homological degree as columns and quantum degree as
    rows (highest first)."""
    if not dims.support():
        return "\\begin{tabular}{c}\n$0$\n\\end{tabular}\n"
    hs = sorted({i for i, _ in dims.support()})
    qs = sorted({j for _, j in dims.support()}, reverse=True)
    hs = list(range(hs[0], hs[-1] + 1))
    lines = ["\\begin{tabular}{r|" + "c" * len(hs) + "}"]
    lines.append("$j \\backslash i$ & " + " & ".join(f"${h}$" for h in hs) + " \\\\ \\hline")
    qmin, qmax = qs[-1], qs[0]
    for q in range(qmax, qmin - 1, -2):
        cells = [str(dims[(h, q)]) if dims[(h, q)] else "" for h in hs]
        lines.append(f"${q}$ & " + " & ".join(cells) + " \\\\")
    lines.append("\\end{tabular}")
    if caption:
        lines.append(f"% {caption}")
    return "\n".join(lines) + "\n"
