"""Closed forms for pretzel knot homology and s-invariant predictions.

These are the published answers, used as oracles against the engine.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass

from .diagram import omega
from .polynomial import PoincarePolynomial


class ExtrapolationWarning(UserWarning):
    """A closed form was evaluated outside the range where it is stated."""


@dataclass(frozen=True)
class FormulaConstants:
    p: int

    def I_m(self, m: int) -> int:
        return (self.p - m - 3) // 2

    @property
    def I_0(self) -> int:
        return (self.p - 9) // 2

    def I_n(self, n: int) -> int:
        return (self.p + n - 5) // 2


def _check_p(p: int, allow_p7: bool):
    if p % 2 == 0:
        raise ValueError("p must be odd")
    if p >= 9:
        return
    if p == 7 and allow_p7:
        warnings.warn("p = 7 is outside the stated range p >= 9; the output is extrapolated and unverified", ExtrapolationWarning, stacklevel=3)
        return
    raise ValueError("the closed form is stated for odd p >= 9")


def _terms_pq0(p: int) -> dict:
    """Coefficients ``(q_exp, t_exp) -> c`` of KH(P(p, -(p-2), 0))."""
    k = FormulaConstants(p)
    out = defaultdict(int)

    def add(c, a, b):
        out[(a, b)] += c

    add(1, -2 * p + 5, -p + 2)
    add(1, -2 * p + 9, -p + 3)
    add(2, -2 * p + 9, -p + 4)
    add(1, -2 * p + 11, -p + 5)
    for n in range(-p + 7, -1, 2):
        i = k.I_n(n)
        add(i + 1, 2 * n - 1, n - 2)
        add(i + 2, 2 * n - 1, n - 1)
        add(i, 2 * n + 1, n - 1)
        add(i + 1, 2 * n + 1, n)
    i0 = k.I_0
    add(i0 + 3, -1, -2)
    add(i0 + 3, -1, -1)
    add(i0 + 2, 1, -1)
    add(i0 + 4, 1, 0)
    add(i0 + 4, 3, 0)
    add(i0 + 3, 3, 1)
    add(i0 + 3, 5, 1)
    add(i0 + 4, 5, 2)
    for m in range(2, p - 2, 2):
        i = k.I_m(m)
        add(i + 1, 2 * m + 3, m)
        add(i, 2 * m + 3, m + 1)
        add(i + 2, 2 * m + 5, m + 1)
        add(i + 1, 2 * m + 5, m + 2)
    add(1, 2 * p + 3, p)
    return out


def _poly(terms: dict) -> PoincarePolynomial:
    bad = {k: v for k, v in terms.items() if v < 0}
    if bad:
        raise ValueError(f"closed form has negative coefficients {bad}")
    return PoincarePolynomial(terms)


def kh_formula_pq0(p: int, allow_p7: bool = False) -> PoincarePolynomial:
    """Poincare polynomial of P(p, -(p-2), 0) for odd p >= 9.

    ``allow_p7`` permits p = 7 (emitting :class:`ExtrapolationWarning`).
    """
    _check_p(p, allow_p7)
    return _poly(_terms_pq0(p))


def kh_formula_pqr(p: int, r: int, branch: str = "auto") -> PoincarePolynomial:
    """Poincare polynomial of P(p, -(p-2), -r) for odd p >= 9, even r >= 2.

    ``branch`` selects the closed form: ``"r2"`` (stated for r = 2),
    ``"general"`` (stated for r >= 4) or ``"auto"``.  Both are defined at
    r = 2 so they can be compared there.
    """
    _check_p(p, False)
    if r < 2 or r % 2:
        raise ValueError("r must be even and >= 2")
    if branch == "auto":
        branch = "r2" if r == 2 else "general"
    if branch == "r2" and r != 2:
        raise ValueError("the r = 2 closed form needs r = 2")
    base = _terms_pq0(p)
    out = defaultdict(int)
    shift = 2 if branch == "r2" else r
    for (a, b), c in base.items():
        out[(a + 2 * shift, b + shift)] += c
    out[(1, 0)] += 1
    out[(3, 0)] += 1
    out[(3, 1)] += 1
    if branch == "r2":
        out[(9, 3)] += 1
    elif branch == "general":
        for k in range(1, r // 2):
            for qa in (1, 3):
                out[(4 * k + qa, 2 * k)] += 1
                out[(4 * k + qa + 2, 2 * k + 1)] += 1
        out[(2 * r + 5, r + 1)] += 1
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return _poly(out)


# ---------------------------------------------------------------------------
# s and signature estimates


@dataclass(frozen=True)
class SPrediction:
    """Predicted s for a pretzel knot.

    ``value`` is set when s is determined; ``interval`` is the estimate row
    of the tables (a single point when exact).  ``case`` is the sign pattern
    after normalisation (E0, E1, E2, O0, O1) and ``mirrored`` tells whether
    normalisation negated the triple.
    """

    value: int | None
    interval: tuple[int, int]
    case_tag: str
    case: str
    mirrored: bool
    alternating: bool
    sigma: int | None

    def contains(self, s: int) -> bool:
        return self.interval[0] <= s <= self.interval[1]

    def to_dict(self) -> dict:
        return {
            "alternating": self.alternating,
            "case": self.case,
            "case_tag": self.case_tag,
            "interval": list(self.interval),
            "mirrored": self.mirrored,
            "sigma": self.sigma,
            "value": self.value,
        }


def is_knot_triple(p: int, q: int, r: int) -> bool:
    evens = sum(1 for x in (p, q, r) if x % 2 == 0)
    return evens <= 1


def _classify(p: int, q: int, r: int):
    """Case, mirror flag and the normalised positive parameters.

    E cases return ``(case, mirrored, (p, q, r))`` meaning E0 = P(p,q,r),
    E1 = P(p,q,-r), E2 = P(p,-q,-r) with p, q odd and r even, all positive.
    O cases return O0 = P(p,q,r) and O1 = P(p,q,-r) with p, q, r odd positive.
    """
    entries = (p, q, r)
    evens = [x for x in entries if x % 2 == 0]
    if len(evens) == 1:
        e = evens[0]
        odds = [x for x in entries if x % 2]
        pos = [x for x in odds if x > 0]
        neg = [-x for x in odds if x < 0]
        if len(pos) == 2:
            return ("E0", False, (pos[0], pos[1], e)) if e > 0 else ("E1", False, (pos[0], pos[1], -e))
        if len(neg) == 2:
            return ("E0", True, (neg[0], neg[1], -e)) if e < 0 else ("E1", True, (neg[0], neg[1], e))
        # mixed odd signs: P(p,-q,-r) when the even entry is negative,
        # otherwise the mirror P(q',-p',-r) of P(-p',q',r)
        if e < 0:
            return "E2", False, (pos[0], neg[0], -e)
        return "E2", True, (neg[0], pos[0], e)
    pos = sorted(x for x in entries if x > 0)
    neg = sorted(-x for x in entries if x < 0)
    if not neg:
        return "O0", False, tuple(pos)
    if not pos:
        return "O0", True, tuple(neg)
    if len(neg) == 1:
        return "O1", False, (pos[0], pos[1], neg[0])
    return "O1", True, (neg[0], neg[1], pos[0])


def predict_s(p: int, q: int, r: int) -> SPrediction | None:
    """Predicted s of the pretzel knot P(p, q, r), or None for triples with
    an entry in {-1, 0, 1}, which the estimates do not cover."""
    if not is_knot_triple(p, q, r):
        raise ValueError(f"P({p},{q},{r}) is not a knot")
    if any(abs(x) <= 1 for x in (p, q, r)):
        return None
    case, mirrored, (a, b, c) = _classify(p, q, r)
    alternating = case in ("E0", "O0")
    if case == "E0":
        v = a + b - 2
        value, interval, tag = v, (v, v), "E0-alternating"
    elif case == "E1":
        v = a + b
        value, interval, tag = v, (v, v), "E1-positive"
    elif case == "E2":
        v = a - b
        value, interval, tag = v, (v - 2, v), "Thm1.2"
    elif case == "O0":
        value, interval, tag = -2, (-2, -2), "O0-negative"
    else:
        # P(a, b, -c) is the mirror of P(c, -a, -b)
        lo = min(a, b)
        interval = (-2, 0)
        if c > lo:
            value, tag = 0, "Thm1.3-pgtmin"
        elif c < lo:
            value, tag = -2, "Thm1.3-pltmin"
        else:
            value, tag = None, "open"
    if mirrored:
        value = None if value is None else -value
        interval = (-interval[1], -interval[0])
    return SPrediction(value, interval, tag, case, mirrored, alternating, sigma_prediction(p, q, r))


def sigma_prediction(p: int, q: int, r: int) -> int | None:
    """Signature of P(p, q, r) from the estimate tables (None outside them)."""
    if not is_knot_triple(p, q, r) or any(abs(x) <= 1 for x in (p, q, r)):
        return None
    case, mirrored, (a, b, c) = _classify(p, q, r)
    w = omega(p, q, r)
    if case == "E0":
        sigma = -(a + b - 2)
    elif case == "E1":
        sigma = -a - b if w < 0 else -a - b + 2
    elif case == "E2":
        sigma = -(a - b) if w < 0 else -(a - b - 2)
    elif case == "O0":
        sigma = 2
    else:
        sigma = 0 if w < 0 else 2
    return -sigma if mirrored else sigma


def torus_support(p: int) -> set[tuple[int, int]]:
    """Bigradings allowed for KH(T(2, p)), p >= 2: j = p - 1 +- 1 + 2i with
    0 <= i <= p."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return {(i, p - 1 + e + 2 * i) for i in range(p + 1) for e in (-1, 1)}
