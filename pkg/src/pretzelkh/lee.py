"""Lee homology and the Rasmussen s-invariant.

The Lee complex uses the Frobenius algebra Q[x]/(x^2 - t) with t a nonzero
rational (``t = 1`` is Lee's original deformation; ``t = -1`` flips the sign
of the extra terms).  Its differential does not decrease the quantum
filtration.  s is read off from the filtration on the degree-0 homology.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass

from . import scanning
from .diagram import DiagramError, LinkDiagram
from .khovanov import CUBE_CROSSING_LIMIT, BigradedDims, cube_complex
from .linalg import EchelonBasis, kernel, rank


@dataclass
class FilteredComplex:
    """Filtered complex split as ``d_kh + phi``.

    ``generators[h]`` lists the filtration degree (quantum degree) of each
    basis vector of C^h.  ``d_kh[h]`` holds the degree preserving part and
    ``phi[h]`` the part raising the quantum degree; both map a basis index
    of C^h to a sparse vector in C^{h+1}.
    """

    generators: dict
    d_kh: dict
    phi: dict

    def total(self, h: int) -> dict:
        out = {}
        for part in (self.d_kh.get(h, {}), self.phi.get(h, {})):
            for src, image in part.items():
                row = out.setdefault(src, {})
                for tgt, c in image.items():
                    v = row.get(tgt, 0) + c
                    if v:
                        row[tgt] = v
                    else:
                        row.pop(tgt, None)
        return out

    def d_squared_is_zero(self) -> bool:
        for h in self.generators:
            first, second = self.total(h), self.total(h + 1)
            for image in first.values():
                acc = defaultdict(int)
                for mid, a in image.items():
                    for tgt, b in second.get(mid, {}).items():
                        acc[tgt] += a * b
                if any(acc.values()):
                    return False
        return True

    def is_filtered(self) -> bool:
        for part, exact in ((self.d_kh, True), (self.phi, False)):
            for h, cols in part.items():
                qs, qt = self.generators[h], self.generators.get(h + 1, [])
                for src, image in cols.items():
                    for tgt in image:
                        gap = qt[tgt] - qs[src]
                        if (gap != 0) if exact else (gap <= 0 or gap % 4):
                            return False
        return True


def lee_complex(d: LinkDiagram, t=1, max_crossings: int = CUBE_CROSSING_LIMIT) -> FilteredComplex:
    """Lee complex from the full cube of resolutions."""
    if not t:
        raise ValueError("the Lee deformation needs t != 0")
    cx = cube_complex(d, lee_t=t, max_crossings=max_crossings)
    degrees = cx.degrees
    d_kh, phi = defaultdict(dict), defaultdict(dict)
    for h, cols in cx.differential.items():
        qs, qt = degrees[h], degrees.get(h + 1, [])
        for src, image in cols.items():
            for tgt, c in image.items():
                part = d_kh if qt[tgt] == qs[src] else phi
                part[h].setdefault(src, {})[tgt] = c
    return FilteredComplex(degrees, dict(d_kh), dict(phi))


def reduced_lee_complex(d: LinkDiagram, t=1) -> FilteredComplex:
    """Small filtered complex, filtered chain homotopy equivalent to the Lee
    complex, obtained by local simplification over Q[t]."""
    red = scanning.reduce_diagram(d.pd, d.signs, d.free_loops)
    ids = defaultdict(list)
    for oid in sorted(red.objects):
        h, q = red.objects[oid]
        ids[h].append(oid)
    pos = {oid: (h, i) for h, lst in ids.items() for i, oid in enumerate(lst)}
    generators = {h: [red.objects[o][1] for o in lst] for h, lst in ids.items()}
    phi = defaultdict(dict)
    for (src, tgt), poly in red.entries.items():
        value = sum(c * t**k for k, c in poly.items())
        if not value:
            continue
        hs, i = pos[src]
        ht, j = pos[tgt]
        if ht != hs + 1:
            raise AssertionError("reduced differential changes degree by more than one")
        phi[hs].setdefault(i, {})[j] = value
    return FilteredComplex(generators, {}, dict(phi))


def _complex(d: LinkDiagram, method: str, t) -> FilteredComplex:
    if method == "cube":
        return lee_complex(d, t=t)
    if method in ("auto", "scan"):
        return reduced_lee_complex(d, t=t)
    raise ValueError(f"unknown method {method!r}")


def lee_homology_rank(d: LinkDiagram, method: str = "auto", t=1) -> dict:
    """Ranks of Lee homology by homological degree (zero ranks omitted)."""
    fc = _complex(d, method, t)
    ranks = {}
    for h in fc.generators:
        ranks[h] = rank(list(fc.total(h).values()))
    out = {}
    for h, gens in fc.generators.items():
        r = len(gens) - ranks.get(h, 0) - ranks.get(h - 1, 0)
        if r:
            out[h] = r
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class SInvariantResult:
    s: int
    s_min: int
    s_max: int
    lee_rank: int

    def to_json(self) -> str:
        return json.dumps({"s": self.s, "s_min": self.s_min, "s_max": self.s_max, "lee_rank": self.lee_rank}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SInvariantResult":
        data = json.loads(text)
        return cls(data["s"], data["s_min"], data["s_max"], data["lee_rank"])


def filtration_profile(fc: FilteredComplex) -> dict:
    """``j -> r(j)``, the rank of ``H^0(F_j) -> H^0`` at every level where it
    can change, where ``F_j`` is spanned by generators of degree >= j."""
    qs = fc.generators.get(0, [])
    d0 = fc.total(0)
    # processing generators from high to low degree makes each kernel vector
    # end at its lowest-degree coordinate, so Z(F_j) is spanned by the basis
    # vectors whose last generator has degree >= j
    order = sorted(range(len(qs)), key=lambda i: (-qs[i], i))
    span = EchelonBasis()
    for image in fc.total(-1).values():
        span.add(image)
    base = len(span)
    by_level = defaultdict(list)
    for z in kernel(d0, order):
        last = max(z, key=order.index)
        by_level[qs[last]].append(z)
    profile = {}
    for j in sorted(set(qs), reverse=True):
        for z in by_level.get(j, []):
            span.add(z)
        profile[j] = len(span) - base
    return profile


def s_invariant(d: LinkDiagram, method: str = "auto", t=1) -> SInvariantResult:
    """Rasmussen's s-invariant of a knot diagram."""
    if d.component_count != 1:
        raise DiagramError(f"s is defined for knots only; diagram has {d.component_count} components")
    fc = _complex(d, method, t)
    profile = filtration_profile(fc)
    total = max(profile.values(), default=0)
    if total != 2:
        raise AssertionError(f"degree-0 Lee homology has rank {total}, expected 2")
    s_min = max(j for j, r in profile.items() if r == 2)
    s_max = max(j for j, r in profile.items() if r >= 1)
    if s_max != s_min + 2:
        raise AssertionError(f"filtration jumps at {s_min} and {s_max} are not two apart")
    return SInvariantResult(s_min + 1, s_min, s_max, total)


def is_h_thin(dims: BigradedDims):
    """The offset ``c`` if the support lies on ``j = 2i + c +- 1`` for a
    unique ``c``, else None."""
    offsets = {j - 2 * i for (i, j), _ in dims.items()}
    if not offsets:
        return None
    candidates = None
    for v in offsets:
        here = {v - 1, v + 1}
        candidates = here if candidates is None else candidates & here
    if candidates is None or len(candidates) != 1:
        return None
    return candidates.pop()


def s_from_thin(dims: BigradedDims) -> int:
    """s of an H-thin knot: the diagonal offset."""
    c = is_h_thin(dims)
    if c is None:
        raise ValueError("homology is not H-thin")
    return c
