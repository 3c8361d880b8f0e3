"""E1 pages of Turner's skein spectral sequence.

Resolving crossings ``1..m`` of an oriented diagram ``D`` one after another
gives diagrams ``D(k)`` (crossings ``1..k`` 1-smoothed) and ``D~(k)``
(crossings ``1..k-1`` 1-smoothed, crossing ``k`` 0-smoothed).  For each
quantum degree ``j`` there is a spectral sequence converging to
``KH^*_j(D)`` whose E1 page is assembled from the homologies of the
``D~(k)`` and of ``D(m)``, placed by integer shifts computed from crossing
sign counts.  Only the E1 page and consistency checks are computed here.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .diagram import DiagramError, LinkDiagram, is_oriented_smoothing, resolve
from .khovanov import BigradedDims, khovanov_homology


@dataclass(frozen=True)
class ResolutionSequence:
    """``resolved[k]`` is D(k) and ``tilde[k]`` is D~(k), for k = 0..m
    (``tilde[0] = resolved[0] = base``).  ``provenance[k]`` records how the
    orientations of D(k) and D~(k) were obtained."""

    base: LinkDiagram
    crossing_order: tuple
    orientation_choices: tuple
    resolved: tuple
    tilde: tuple
    provenance: tuple

    @property
    def m(self) -> int:
        return len(self.crossing_order)


def _describe(choice, oriented: bool) -> str:
    if choice is None:
        return "inherited" if oriented else "default:max_positive"
    if isinstance(choice, str):
        return choice
    return "flags:" + "".join("1" if f else "0" for f in choice)


def build_sequence(d: LinkDiagram, crossing_order, orientation_choices=None) -> ResolutionSequence:
    """Materialise D(k) and D~(k) for the given crossings (indices into
    ``d``).

    ``orientation_choices[k-1]``, when given, is a pair of choices for D(k)
    and D~(k) as accepted by :func:`diagram.resolve`.  Missing choices use the
    canonical orientation where the smoothing is oriented and the
    max-positive default otherwise; either way the choice is recorded.
    """
    order = tuple(int(c) for c in crossing_order)
    if len(set(order)) != len(order):
        raise DiagramError("crossing ids in a resolution sequence must be distinct")
    for c in order:
        if not 0 <= c < d.n_crossings:
            raise DiagramError(f"crossing {c} out of range")
    m = len(order)
    if orientation_choices is None:
        choices = ((None, None),) * m
    else:
        choices = tuple(tuple(pair) for pair in orientation_choices)
        if len(choices) != m:
            raise DiagramError("need one pair of orientation choices per resolved crossing")
    alive = list(range(d.n_crossings))
    resolved, tilde, provenance = [d], [d], [("given", "given")]
    cur = d
    for k, c in enumerate(order):
        idx = alive.index(c)
        one_choice, zero_choice = choices[k]
        dt = resolve(cur, idx, 0, orientation_choice=zero_choice)
        nxt = resolve(cur, idx, 1, orientation_choice=one_choice)
        provenance.append(
            (
                _describe(one_choice, is_oriented_smoothing(cur, idx, 1)),
                _describe(zero_choice, is_oriented_smoothing(cur, idx, 0)),
            )
        )
        tilde.append(dt)
        resolved.append(nxt)
        alive.pop(idx)
        cur = nxt
    return ResolutionSequence(d, order, choices, tuple(resolved), tuple(tilde), tuple(provenance))


@dataclass(frozen=True)
class TurnerConstants:
    """Shift constants; lists are indexed by k (entry 0 of the per-step
    constants ``a``, ``b``, ``a_tilde``, ``b_tilde`` is unused and 0)."""

    n_plus: tuple
    n_minus: tuple
    n_plus_tilde: tuple
    n_minus_tilde: tuple
    a: tuple
    b: tuple
    a_tilde: tuple
    b_tilde: tuple
    A: tuple
    B: tuple

    def to_dict(self) -> dict:
        return {name: list(getattr(self, name)) for name in self.__dataclass_fields__}


def constants(seq: ResolutionSequence) -> TurnerConstants:
    """Constants of the E1 page.

    ``a_k = n-(k-1) - n-(k) - 1``, ``b_k = 3 a_k + 1``,
    ``a~_k = n-(k-1) - n~-(k)``, ``b~_k = 3 a~_k - 1``, ``A_k`` the partial
    sums of ``a`` and ``B_k = 3 A_k + k``.  Here ``n-(k)`` counts negative
    crossings of D(k) and ``n~-(k)`` those of D~(k).
    """
    m = seq.m
    n_plus = tuple(x.n_plus for x in seq.resolved)
    n_minus = tuple(x.n_minus for x in seq.resolved)
    nt_plus = tuple(x.n_plus for x in seq.tilde)
    nt_minus = tuple(x.n_minus for x in seq.tilde)
    a, b, at, bt, A, B = [0], [0], [0], [0], [0], [0]
    for k in range(1, m + 1):
        a.append(n_minus[k - 1] - n_minus[k] - 1)
        b.append(3 * a[k] + 1)
        at.append(n_minus[k - 1] - nt_minus[k])
        bt.append(3 * at[k] - 1)
        A.append(A[k - 1] + a[k])
        B.append(3 * A[k] + k)
    return TurnerConstants(n_plus, n_minus, nt_plus, nt_minus, tuple(a), tuple(b), tuple(at), tuple(bt), tuple(A), tuple(B))


@dataclass(frozen=True)
class E1Cell:
    s: int
    t: int
    rank: int
    leaf: str
    leaf_bigrading: tuple


@dataclass
class E1Page:
    j: int
    m: int
    cells: dict = field(default_factory=dict)  # (s, t) -> E1Cell

    @property
    def ranks(self) -> dict:
        return {k: c.rank for k, c in self.cells.items()}

    def to_json(self) -> str:
        cells = [
            {"s": c.s, "t": c.t, "rank": c.rank, "leaf": c.leaf, "leaf_bigrading": list(c.leaf_bigrading)}
            for _, c in sorted(self.cells.items())
        ]
        return json.dumps({"j": self.j, "cells": cells}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, m: int | None = None) -> "E1Page":
        data = json.loads(text)
        cells = {}
        for c in data["cells"]:
            cells[(c["s"], c["t"])] = E1Cell(c["s"], c["t"], c["rank"], c["leaf"], tuple(c["leaf_bigrading"]))
        if m is None:
            m = max((s for s, _ in cells), default=0)
        return cls(data["j"], m, cells)

    def to_latex(self) -> str:
        """Grid with columns s = 0..m and rows t (highest first)."""
        cols = list(range(self.m + 1))
        lines = [f"% j={self.j}", "\\begin{tabular}{|c||" + "c|" * len(cols) + "} \\hline"]
        lines.append("$t \\backslash s$ & " + " & ".join(str(s) for s in cols) + " \\\\ \\hline\\hline")
        ts = sorted({t for _, t in self.cells}, reverse=True)
        if ts:
            for t in range(ts[0], ts[-1] - 1, -1):
                row = [str(self.cells[(s, t)].rank) if (s, t) in self.cells else "" for s in cols]
                lines.append(f"${t}$ & " + " & ".join(row) + " \\\\ \\hline")
        lines.append("\\end{tabular}")
        return "\n".join(lines) + "\n"


def _leaf_homology(d: LinkDiagram) -> BigradedDims:
    return khovanov_homology(d)


class TurnerData:
    """A resolution sequence with its constants and cached leaf homologies."""

    def __init__(self, seq: ResolutionSequence, threads: int = 1):
        self.seq = seq
        self.constants = constants(seq)
        leaves = [seq.tilde[k] for k in range(1, seq.m + 1)] + [seq.resolved[seq.m]]
        if threads > 1 and len(leaves) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                homs = list(pool.map(_leaf_homology, leaves))
        else:
            homs = [_leaf_homology(x) for x in leaves]
        self.tilde_homology = {k: homs[k - 1] for k in range(1, seq.m + 1)}
        self.final_homology = homs[-1]

    def page(self, j: int) -> E1Page:
        seq, c = self.seq, self.constants
        m = seq.m
        page = E1Page(j, m)
        for s in range(m):
            k = s + 1
            di = c.A[s] + c.a_tilde[k]
            jj = j + c.B[s] + c.b_tilde[k]
            for (i, q), r in self.tilde_homology[k].items():
                if q == jj:
                    t = i - s - di
                    page.cells[(s, t)] = E1Cell(s, t, r, f"D~({k})", (i, q))
        jj = j + c.B[m]
        for (i, q), r in self.final_homology.items():
            if q == jj:
                t = i - m - c.A[m]
                page.cells[(m, t)] = E1Cell(m, t, r, f"D({m})", (i, q))
        return page

    def nonempty_j(self) -> list[int]:
        """Quantum degrees with a nonzero E1 page."""
        seq, c = self.seq, self.constants
        js = set()
        for s in range(seq.m):
            k = s + 1
            for (_, q), _r in self.tilde_homology[k].items():
                js.add(q - c.B[s] - c.b_tilde[k])
        for (_, q), _r in self.final_homology.items():
            js.add(q - c.B[seq.m])
        return sorted(js)


def e1_page(seq: ResolutionSequence, j: int) -> E1Page:
    return TurnerData(seq).page(j)


def e1_euler_check(page: E1Page, dims_of_base: BigradedDims, j: int) -> bool:
    """Euler characteristics of the E1 page and of KH^*_j agree."""
    lhs = sum((-1) ** ((s + t) % 2) * r for (s, t), r in page.ranks.items())
    rhs = sum((-1) ** (i % 2) * r for (i, q), r in dims_of_base.items() if q == j)
    return lhs == rhs


def diagonal_support_check(page: E1Page, j: int, c: int) -> bool:
    """Every nonzero cell satisfies ``s + t = (j - c +- 1) / 2``."""
    allowed = {(j - c - 1) / 2, (j - c + 1) / 2}
    return all((s + t) in allowed for (s, t), r in page.ranks.items() if r)
