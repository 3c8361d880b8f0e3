"""Laurent polynomials in q and Poincare polynomials in (q, t)."""

from __future__ import annotations

import re
from collections import defaultdict


class Laurent:
    """Laurent polynomial in one variable ``q`` with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "Laurent":
        return cls({exp: coeff})

    def __add__(self, other):
        out = defaultdict(int, self.coeffs)
        for k, v in other.coeffs.items():
            out[k] += v
        return Laurent(out)

    def __neg__(self):
        return Laurent({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({k: v * other for k, v in self.coeffs.items()})
        out = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] += x * y
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Laurent({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = "1" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if e == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


Q = Laurent({1: 1})
QINV = Laurent({-1: 1})


class PoincarePolynomial:
    """Laurent polynomial in q and t with positive integer coefficients.

    Terms are keyed by ``(q_exponent, t_exponent)``; the t exponent is the
    homological degree, the q exponent the quantum degree.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = int(c)
            if c < 0:
                raise ValueError("Poincare polynomials have nonnegative coefficients")
            if c:
                clean[(int(a), int(b))] = c
        self.terms = clean

    def __add__(self, other):
        out = defaultdict(int, self.terms)
        for k, v in other.terms.items():
            out[k] += v
        return PoincarePolynomial(out)

    def shift(self, q: int, t: int) -> "PoincarePolynomial":
        """Multiply by ``q^q t^t``."""
        return PoincarePolynomial({(a + q, b + t): c for (a, b), c in self.terms.items()})

    def coefficient(self, q: int, t: int) -> int:
        return self.terms.get((q, t), 0)

    def __eq__(self, other):
        return isinstance(other, PoincarePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"PoincarePolynomial({self})"

    def __str__(self):
        """Terms ``c*q^a*t^b`` sorted by t exponent, then q exponent."""
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*q^{a}*t^{b}" for (a, b), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0])))

    _TERM = re.compile(r"^\s*(\d+)\*q\^(-?\d+)\*t\^(-?\d+)\s*$")

    @classmethod
    def parse(cls, text: str) -> "PoincarePolynomial":
        text = text.strip()
        if text == "0":
            return cls()
        out = defaultdict(int)
        for part in text.split("+"):
            m = cls._TERM.match(part)
            if not m:
                raise ValueError(f"cannot parse term {part!r}")
            c, a, b = (int(g) for g in m.groups())
            out[(a, b)] += c
        return cls(out)
