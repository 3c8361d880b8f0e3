"""Exact sparse linear algebra over the rationals.

Vectors and matrix rows are plain dicts ``{index: value}`` holding ints or
Fractions; zero entries are never stored.
"""

from __future__ import annotations

from fractions import Fraction


def _int_if_integral(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _scaled(v, factor):
    return {k: _int_if_integral(x * factor) for k, x in v.items()}


def _axpy(v, a, w):
    """Return ``v + a*w`` without zero entries."""
    out = dict(v)
    for k, x in w.items():
        y = out.get(k, 0) + a * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def _normalize_pivot(v, c):
    p = v[c]
    if p == 1:
        return v
    if p == -1:
        return {k: -x for k, x in v.items()}
    return _scaled(v, Fraction(1) / p)


class EchelonBasis:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Each stored vector has a distinct leading (minimal) index normalised to 1.
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v):
        v = {k: x for k, x in v.items() if x}
        while v:
            c = min(v)
            row = self.pivots.get(c)
            if row is None:
                return v
            v = _axpy(v, -v[c], row)
        return v

    def add(self, v) -> bool:
        """Insert ``v``; returns True when it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        c = min(v)
        self.pivots[c] = _normalize_pivot(v, c)
        return True


def rank(rows) -> int:
    """Rank of the matrix whose rows are the given sparse vectors."""
    basis = EchelonBasis()
    for v in sorted(rows, key=len):
        basis.add(v)
    return len(basis)


def transpose(rows: dict) -> dict:
    """``{r: {c: x}}`` -> ``{c: {r: x}}``."""
    out: dict = {}
    for r, row in rows.items():
        for c, x in row.items():
            out.setdefault(c, {})[r] = x
    return out


def kernel(columns: dict, domain) -> list[dict]:
    """Basis of the kernel of a linear map.

    ``columns`` maps each domain index to its image (a sparse vector);
    indices of ``domain`` without an entry map to zero.  Domain vectors are
    processed in the given order and each returned vector has coefficient 1
    on its last supported domain index, which is distinct across the basis.
    Returned vectors are sparse dicts over ``domain``.
    """
    pivots: dict = {}  # leading image index -> (image row, domain combination)
    basis = []
    for c in domain:
        v = {k: x for k, x in columns.get(c, {}).items() if x}
        combo = {c: 1}
        while v:
            lead = min(v)
            hit = pivots.get(lead)
            if hit is None:
                break
            row, rc = hit
            f = -v[lead]
            v = _axpy(v, f, row)
            combo = _axpy(combo, f, rc)
        if v:
            lead = min(v)
            inv = _int_if_integral(Fraction(1) / v[lead])
            pivots[lead] = (_scaled(v, inv), _scaled(combo, inv))
        else:
            basis.append(combo)
    return basis


def symmetric_signature(matrix) -> int:
    """Signature (positive minus negative eigenvalue count) of a symmetric
    rational matrix, by congruence diagonalisation."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for row in a:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    idx = list(range(n))
    sig = 0
    while idx:
        piv = next((i for i in idx if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j; a[i][i] becomes 2 a[i][j] != 0
            for k in idx:
                a[i][k] += a[j][k]
            for k in idx:
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        sig += 1 if p > 0 else -1
        rest = [i for i in idx if i != piv]
        for i in rest:
            f = a[i][piv] / p
            if f:
                for k in rest:
                    a[i][k] -= f * a[piv][k]
        idx = rest
    return sig
