"""Verification suites: computed invariants against the published statements.

Each suite returns a :class:`SuiteResult` whose checks carry the expected
and the computed payloads.  A failing check is a report entry, not an
exception.  :func:`write_report` stores a result as JSON, CSV and figures.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from . import scanning
from .diagram import mirror, pretzel_columns, pretzel_diagram, slice_bennequin_bounds, stats, torus2_diagram
from .formulas import kh_formula_pq0, kh_formula_pqr
from .khovanov import BigradedDims, graded_euler_characteristic, jones_kauffman, khovanov_homology, poincare_polynomial
from .lee import is_h_thin, s_invariant
from .turner import E1Page, TurnerData, build_sequence, constants, diagonal_support_check, e1_euler_check

SUITES = ("thm1.1", "thm1.2", "thm1.3", "lemma5.1", "bounds", "turner", "euler")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    expected: object
    actual: object
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "actual": self.actual,
            "expected": self.expected,
            "name": self.name,
            "note": self.note,
            "passed": self.passed,
            "suite": self.suite,
        }


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    # (file stem, object, title) with object a BigradedDims or an E1Page
    figures: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "failed": self.failed,
            "passed": self.passed,
            "suite": self.suite,
        }


def _map(fn, items, threads: int):
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _odd(lo: int, hi: int):
    return range(lo | 1, hi + 1, 2)


def _even(lo: int, hi: int):
    return range(lo + (lo % 2), hi + 1, 2)


def _label(t) -> str:
    return "P(" + ",".join(str(x) for x in t) + ")"


# ---------------------------------------------------------------------------
# closed forms


def suite_thm11(ps=(9,), rs=(0, 2), threads: int = 1) -> SuiteResult:
    """Closed forms for P(p, -(p-2), -r) against direct computation."""
    res = SuiteResult("thm1.1")
    cases = [(p, r) for p in ps for r in rs]
    dims = _map(_kh_of_triple, [(p, -(p - 2), -r) for p, r in cases], threads)
    for (p, r), kh in zip(cases, dims):
        label = _label((p, -(p - 2), -r))
        direct = poincare_polynomial(kh)
        formula = kh_formula_pq0(p) if r == 0 else kh_formula_pqr(p, r)
        res.checks.append(_poly_check("thm1.1", label, formula, direct))
        if r == 2:
            general = kh_formula_pqr(p, 2, branch="general")
            res.checks.append(_poly_check("thm1.1", label + " r>=4 branch at r=2", general, direct))
        res.figures.append((f"kh_{label}", kh, label))
    return res


def _poly_check(suite, name, formula, direct) -> Check:
    diff = {}
    for key in set(formula.terms) | set(direct.terms):
        a, b = formula.terms.get(key, 0), direct.terms.get(key, 0)
        if a != b:
            diff[f"q^{key[0]}*t^{key[1]}"] = {"formula": a, "direct": b}
    note = "" if not diff else "differing terms: " + json.dumps(diff, sort_keys=True)
    return Check(suite, name, not diff, str(formula), str(direct), note)


def _kh_of_triple(t) -> BigradedDims:
    return khovanov_homology(pretzel_diagram(*t))


def _s_of_triple(t) -> int:
    return s_invariant(pretzel_diagram(*t)).s


# ---------------------------------------------------------------------------
# s-invariant theorems


def suite_thm12(pmax: int = 7, rmax: int = 4, threads: int = 1) -> SuiteResult:
    """s(P(p, -q, -r)) = p - q for odd p, q >= 3 and even r >= 2."""
    res = SuiteResult("thm1.2")
    cases = [(p, -q, -r) for p in _odd(3, pmax) for q in _odd(3, pmax) for r in _even(2, rmax)]
    for t, s in zip(cases, _map(_s_of_triple, cases, threads)):
        p, q = t[0], -t[1]
        lo, _ = slice_bennequin_bounds(pretzel_diagram(*t))
        _, sharp = slice_bennequin_bounds(mirror(pretzel_diagram(*t)))
        note = f"slice-Bennequin window [{lo}, {-sharp}]"
        res.checks.append(Check("thm1.2", _label(t), s == p - q, p - q, s, note))
    return res


def suite_thm13(vmax: int = 7, threads: int = 1) -> SuiteResult:
    """s(P(p, -q, -r)) for odd p, q, r >= 3: 0 if p > min(q, r), 2 if p < min(q, r)."""
    res = SuiteResult("thm1.3")
    cases = [(p, -q, -r) for p, q, r in product(_odd(3, vmax), repeat=3) if p != min(q, r)]
    for t, s in zip(cases, _map(_s_of_triple, cases, threads)):
        p, m = t[0], min(-t[1], -t[2])
        want = 0 if p > m else 2
        res.checks.append(Check("thm1.3", _label(t), s == want, want, s))
    return res


def suite_lemma51(vmax: int = 7, threads: int = 1) -> SuiteResult:
    """KH(P(p, -q, 0)) = KH(T(2,p) # T(2,-q)) is thin with offset p - q."""
    res = SuiteResult("lemma5.1")
    cases = [(p, -q, 0) for p in _odd(3, vmax) for q in _odd(3, vmax)]
    for t, kh in zip(cases, _map(_kh_of_triple, cases, threads)):
        c = is_h_thin(kh)
        want = t[0] + t[1]
        res.checks.append(Check("lemma5.1", _label(t), c == want, want, c))
        res.figures.append((f"kh_{_label(t)}", kh, _label(t)))
    return res


def bounds_report(p: int, r: int) -> dict:
    """Diagram statistics and slice-Bennequin bounds of P(p, -(p-2), -r) and
    its mirror, with the computed s."""
    d = pretzel_diagram(p, -(p - 2), -r)
    st, mst = stats(d), stats(mirror(d))
    plain, sharp = slice_bennequin_bounds(d)
    mplain, msharp = slice_bennequin_bounds(mirror(d))
    return {
        "w": st.writhe,
        "O": st.seifert_circle_count,
        "O_lt": st.strongly_negative_count,
        "O_ge": st.non_negative_count,
        "mirror_w": mst.writhe,
        "mirror_O_lt": mst.strongly_negative_count,
        "mirror_O_ge": mst.non_negative_count,
        "lower_plain": plain,
        "lower_sharper": sharp,
        "mirror_lower_plain": mplain,
        "mirror_lower_sharper": msharp,
        "interval": [sharp, -msharp],
        "s": s_invariant(d).s,
    }


def suite_bounds(p: int = 9, rs=(2, 4), threads: int = 1) -> SuiteResult:
    res = SuiteResult("bounds")
    for r in rs:
        got = bounds_report(p, r)
        want = {
            "w": r + 2,
            "O": r + 1,
            "O_lt": 0,
            "O_ge": r + 1,
            "mirror_O_lt": r - 1,
            "mirror_O_ge": 2,
            "lower_plain": 2,
            "lower_sharper": 2,
            "mirror_lower_plain": -2 * r - 2,
            "mirror_lower_sharper": -4,
            "interval": [2, 4],
        }
        label = _label((p, -(p - 2), -r))
        sub = {k: got[k] for k in want}
        res.checks.append(Check("bounds", label + " statistics", sub == want, want, sub))
        lo, hi = got["interval"]
        res.checks.append(Check("bounds", label + " s in interval", lo <= got["s"] <= hi, [lo, hi], got["s"]))
    return res


# ---------------------------------------------------------------------------
# Turner pages


def reference_e1_pages(i0: int) -> dict:
    """E1 pages of P(p, -(p-2), -2) at j = 1..9 as published, ``j -> {(s, t): rank}``."""
    return {
        9: {(1, 2): 1, (2, 2): i0 + 4, (2, 1): i0 + 3},
        7: {(0, 2): 1, (1, 2): 1, (2, 1): i0 + 3, (2, 0): i0 + 4},
        5: {(0, 2): 1, (1, 0): 1, (2, 0): i0 + 4, (2, -1): i0 + 2},
        3: {(0, 0): 1, (1, 0): 1, (2, -1): i0 + 3, (2, -2): i0 + 3},
        1: {(0, 0): 1, (2, -2): i0 + 2, (2, -3): i0 + 1},
    }


def pq0_sequence(p: int):
    """Resolve the first q - 1 crossings of the -q column of P(p, -q, 0)."""
    q = p - 2
    d = pretzel_diagram(p, -q, 0)
    return build_sequence(d, pretzel_columns(p, -q, 0)[1][: q - 1])


def pqr_sequence(p: int, r: int):
    """Resolve the -r column of P(p, -(p-2), -r) top-down."""
    d = pretzel_diagram(p, -(p - 2), -r)
    return build_sequence(d, pretzel_columns(p, -(p - 2), -r)[2])


def suite_turner(p: int = 9, threads: int = 1) -> SuiteResult:
    res = SuiteResult("turner")
    q = p - 2
    c = constants(pq0_sequence(p))
    want = {
        "a_tilde": [q - s + 1 for s in range(1, q)],
        "b_tilde": [3 * q - 3 * s + 2 for s in range(1, q)],
        "A": [0] * (q - 1),
        "B": list(range(1, q)),
    }
    got = {"a_tilde": list(c.a_tilde[1:]), "b_tilde": list(c.b_tilde[1:]), "A": list(c.A[1:]), "B": list(c.B[1:])}
    res.checks.append(Check("turner", f"constants {_label((p, -q, 0))}", got == want, want, got))

    seq = pqr_sequence(p, 2)
    c = constants(seq)
    want = {"A": [-3, -2], "B": [-8, -4]}
    got = {"A": list(c.A[1:]), "B": list(c.B[1:])}
    label = _label((p, -q, -2))
    res.checks.append(Check("turner", f"constants {label}", got == want, want, got))

    data = TurnerData(seq, threads=threads)
    base = khovanov_homology(seq.base)
    table = reference_e1_pages((p - 9) // 2)
    for j in sorted(table, reverse=True):
        page = data.page(j)
        got = {f"{s},{t}": r for (s, t), r in sorted(page.ranks.items())}
        want = {f"{s},{t}": r for (s, t), r in sorted(table[j].items())}
        res.checks.append(Check("turner", f"E1 page {label} j={j}", got == want, want, got))
        res.checks.append(Check("turner", f"E1 Euler {label} j={j}", e1_euler_check(page, base, j), True, e1_euler_check(page, base, j)))
        ok = diagonal_support_check(page, j, 2)
        res.checks.append(Check("turner", f"E1 diagonals {label} j={j} c=2", ok, True, ok))
        res.figures.append((f"e1_{label}_j{j}", page, f"E1 page of {label}, j = {j}"))
    return res


# ---------------------------------------------------------------------------
# corpus properties


def corpus(max_entry: int = 5, max_crossings: int = 12, torus_max: int = 7) -> list:
    """Small diagrams: pretzel triples with entries bounded by ``max_entry``
    and at most ``max_crossings`` crossings, and T(2, n) for |n| <= torus_max.
    Entries are ``("pretzel", (p, q, r))`` or ``("torus", n)``."""
    out = []
    rng = range(-max_entry, max_entry + 1)
    for t in product(rng, repeat=3):
        if sum(abs(x) for x in t) <= max_crossings:
            out.append(("pretzel", t))
    for n in range(-torus_max, torus_max + 1):
        out.append(("torus", n))
    return out


def build(entry):
    kind, arg = entry
    return pretzel_diagram(*arg) if kind == "pretzel" else torus2_diagram(arg)


def entry_label(entry) -> str:
    kind, arg = entry
    return _label(arg) if kind == "pretzel" else f"T(2,{arg})"


@dataclass(frozen=True)
class CorpusRecord:
    """Invariants of one corpus diagram."""

    entry: tuple
    components: int
    dims: BigradedDims
    euler: dict
    jones: dict
    d_squared_zero: bool
    s: int | None


def corpus_record(entry) -> CorpusRecord:
    d = build(entry)
    try:
        red = scanning.reduce_diagram(d.pd, d.signs, d.free_loops, check=True)
        dd_zero = red.d_squared_is_zero()
    except AssertionError:
        red = scanning.reduce_diagram(d.pd, d.signs, d.free_loops)
        dd_zero = False
    dims = BigradedDims(red.ranks())
    s = s_invariant(d).s if d.component_count == 1 else None
    return CorpusRecord(
        entry,
        d.component_count,
        dims,
        graded_euler_characteristic(dims).coeffs,
        jones_kauffman(d).coeffs,
        dd_zero,
        s,
    )


def corpus_records(entries, threads: int = 1) -> list:
    return _map(corpus_record, entries, threads)


def suite_euler(max_entry: int = 5, max_crossings: int = 12, torus_max: int = 7, threads: int = 1) -> SuiteResult:
    """Graded Euler characteristic against the Kauffman state sum, and d o d = 0."""
    res = SuiteResult("euler")
    for rec in corpus_records(corpus(max_entry, max_crossings, torus_max), threads):
        name = entry_label(rec.entry)
        ok = rec.euler == rec.jones
        res.checks.append(Check("euler", name, ok and rec.d_squared_zero, _laurent_json(rec.jones), _laurent_json(rec.euler), "" if rec.d_squared_zero else "d o d != 0"))
    return res


def _laurent_json(coeffs: dict) -> dict:
    return {str(k): v for k, v in sorted(coeffs.items())}


def mirror_dims(dims: BigradedDims) -> BigradedDims:
    """Rational KH of the mirror: ``(i, j) -> (-i, -j)``."""
    return BigradedDims({(-i, -j): r for (i, j), r in dims.items()})


def run_suite(name: str, threads: int = 1, **params) -> SuiteResult:
    table = {
        "thm1.1": suite_thm11,
        "thm1.2": suite_thm12,
        "thm1.3": suite_thm13,
        "lemma5.1": suite_lemma51,
        "bounds": suite_bounds,
        "turner": suite_turner,
        "euler": suite_euler,
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}")
    return table[name](threads=threads, **params)


# ---------------------------------------------------------------------------
# reports


def write_report(result: SuiteResult, directory, figures: bool = True) -> list[Path]:
    """Write ``<suite>.json``, ``<suite>.csv`` and one PNG per figure."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    stem = result.suite.replace(".", "_")
    written = []
    path = out / f"{stem}.json"
    path.write_text(json.dumps(result.to_dict(), sort_keys=True, indent=2) + "\n")
    written.append(path)
    path = out / f"{stem}.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "name", "passed", "expected", "actual", "note"])
        for c in result.checks:
            w.writerow([c.suite, c.name, c.passed, json.dumps(c.expected, sort_keys=True), json.dumps(c.actual, sort_keys=True), c.note])
    written.append(path)
    if figures:
        from . import plotting

        for fig_stem, obj, title in result.figures:
            if isinstance(obj, E1Page):
                fig = plotting.e1_page_figure(obj, title)
            else:
                fig = plotting.kh_grid_figure(obj, title)
            written.append(plotting.save_figure(fig, out / f"{_safe_name(fig_stem)}.png"))
    return written


def _safe_name(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_=" else "_" for ch in text).strip("_")
