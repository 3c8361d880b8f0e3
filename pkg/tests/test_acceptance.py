"""Acceptance criteria 1-12.

Each test records one PASS/FAIL line that is printed in the terminal
summary.  Criteria 3 and 12 fail for two knots of the grid; the recorded
lines say which, and companion tests pin the exact disagreement.
"""

import os
from itertools import permutations, product

import pytest

from pretzelkh.diagram import mirror, pretzel_columns, pretzel_diagram, signature, slice_bennequin_bounds
from pretzelkh.formulas import kh_formula_pq0, kh_formula_pqr, predict_s
from pretzelkh.khovanov import khovanov_homology, poincare_polynomial
from pretzelkh.lee import is_h_thin, lee_homology_rank, s_invariant
from pretzelkh.turner import constants, diagonal_support_check, e1_euler_check, TurnerData
from pretzelkh.verify import (
    bounds_report,
    build,
    corpus,
    corpus_records,
    entry_label,
    mirror_dims,
    pq0_sequence,
    pqr_sequence,
    reference_e1_pages,
)

ODD = (3, 5, 7)
EVEN_GRID = [(p, -q, -r) for p in ODD for q in ODD for r in (2, 4)]
ODD_GRID = [(p, -q, -r) for p, q, r in product(ODD, repeat=3) if p != min(q, r)]
# the two knots of the criterion 3 grid with s = p - q + 2
EVEN_EXCEPTIONS = {(3, -5, -4), (3, -7, -4)}


def _name(t):
    return "P({},{},{})".format(*t)


def _s(t):
    return s_invariant(pretzel_diagram(*t)).s


@pytest.fixture(scope="module")
def even_s():
    return {t: _s(t) for t in EVEN_GRID}


@pytest.fixture(scope="module")
def odd_s():
    return {t: _s(t) for t in ODD_GRID}


def _diff(formula, direct):
    keys = set(formula.terms) | set(direct.terms)
    return {k: (formula.terms.get(k, 0), direct.terms.get(k, 0)) for k in keys if formula.terms.get(k, 0) != direct.terms.get(k, 0)}


def test_c01_formula_pq0(criterion):
    direct = poincare_polynomial(khovanov_homology(pretzel_diagram(9, -7, 0)))
    diff = _diff(kh_formula_pq0(9), direct)
    criterion(1, not diff, f"KH(P(9,-7,0)) vs closed form: {len(direct.terms)} terms, {len(diff)} differ")
    assert not diff


def test_c02_formula_pqr(criterion):
    direct = poincare_polynomial(khovanov_homology(pretzel_diagram(9, -7, -2)))
    diff = _diff(kh_formula_pqr(9, 2), direct)
    criterion(2, not diff, f"KH(P(9,-7,-2)) vs closed form: {len(direct.terms)} terms, {len(diff)} differ")
    assert not diff


@pytest.mark.xfail(strict=True, reason="s = p-q+2 for P(3,-5,-4) and P(3,-7,-4)")
def test_c03_s_even_grid(criterion, even_s):
    bad = {t: s for t, s in even_s.items() if s != t[0] + t[1]}
    detail = f"s = p-q on {len(EVEN_GRID) - len(bad)}/{len(EVEN_GRID)}"
    if bad:
        detail += "; differs at " + ", ".join(f"{_name(t)} s={s} (p-q={t[0] + t[1]})" for t, s in sorted(bad.items()))
    criterion(3, not bad, detail)
    assert not bad


def test_c03_disagreement_is_exact(even_s):
    bad = {t for t, s in even_s.items() if s != t[0] + t[1]}
    assert bad == EVEN_EXCEPTIONS
    for t in bad:
        p, q = t[0], -t[1]
        assert even_s[t] == p - q + 2
        # s is pinned by the slice-Bennequin window [p-q, p-q+2]
        d = pretzel_diagram(*t)
        lo = slice_bennequin_bounds(d)[1]
        hi = -slice_bennequin_bounds(mirror(d))[1]
        assert (lo, hi) == (p - q, p - q + 2)
        # independent route: mirror and the t = -1 deformation agree
        assert s_invariant(mirror(d)).s == -even_s[t]
        assert s_invariant(d, t=-1).s == even_s[t]


def test_c03_computed_rule(even_s):
    # observed on the grid: s = p - q + 2 exactly when p < q and r > p
    for (p, mq, mr), s in even_s.items():
        q, r = -mq, -mr
        assert s == p - q + (2 if p < q and r > p else 0)


def test_c04_s_odd_grid(criterion, odd_s):
    bad = {}
    for t, s in odd_s.items():
        want = 0 if t[0] > min(-t[1], -t[2]) else 2
        if s != want:
            bad[t] = (want, s)
    criterion(4, not bad, f"{len(ODD_GRID) - len(bad)}/{len(ODD_GRID)} knots match")
    assert not bad


def test_c05_example(criterion):
    s = _s((9, -5, -2))
    criterion(5, s == 4, f"s(P(9,-5,-2)) = {s}")
    assert s == 4


def test_c06_lee_rank(criterion):
    knots = EVEN_GRID + ODD_GRID + [(9, -5, -2)]
    bad = {t: r for t in knots if (r := lee_homology_rank(pretzel_diagram(*t))) != {0: 2}}
    criterion(6, not bad, f"Lee rank {{0: 2}} for {len(knots) - len(bad)}/{len(knots)} knots")
    assert not bad


def test_c07_thin(criterion):
    cases = [(p, -q, 0) for p in ODD for q in ODD]
    bad = {t: c for t in cases if (c := is_h_thin(khovanov_homology(pretzel_diagram(*t)))) != t[0] + t[1]}
    criterion(7, not bad, f"is_h_thin gives p-q for {len(cases) - len(bad)}/{len(cases)}")
    assert not bad


def test_c08_bounds(criterion):
    ok, parts = True, []
    for r in (2, 4):
        b = bounds_report(9, r)
        good = (
            (b["w"], b["O"], b["O_lt"], b["O_ge"]) == (r + 2, r + 1, 0, r + 1)
            and (b["mirror_O_lt"], b["mirror_O_ge"]) == (r - 1, 2)
            and b["interval"] == [2, 4]
            and b["s"] == 2
        )
        ok &= good
        parts.append(f"r={r}: w={b['w']} O={b['O']} O<={b['O_lt']} O>={b['O_ge']} mirror O<={b['mirror_O_lt']} O>={b['mirror_O_ge']} interval {b['interval']} s={b['s']}")
    criterion(8, ok, "; ".join(parts))
    assert ok


def test_c09_turner_constants(criterion):
    q = 7
    c1 = constants(pq0_sequence(9))
    want1 = (
        [q - s + 1 for s in range(1, q)],
        [3 * q - 3 * s + 2 for s in range(1, q)],
        [0] * (q - 1),
        list(range(1, q)),
    )
    got1 = (list(c1.a_tilde[1:]), list(c1.b_tilde[1:]), list(c1.A[1:]), list(c1.B[1:]))
    c2 = constants(pqr_sequence(9, 2))
    got2 = (list(c2.A[1:]), list(c2.B[1:]))
    ok = got1 == want1 and got2 == ([-3, -2], [-8, -4])
    criterion(9, ok, f"P(9,-7,0): A={got1[2]} B={got1[3]}; P(9,-7,-2): A={got2[0]} B={got2[1]}")
    assert ok


def test_c10_e1_pages(criterion):
    seq = pqr_sequence(9, 2)
    data = TurnerData(seq)
    base = khovanov_homology(seq.base)
    table = reference_e1_pages(0)
    bad = []
    for j in sorted(table):
        page = data.page(j)
        if page.ranks != table[j]:
            bad.append(f"j={j} page")
        if not e1_euler_check(page, base, j):
            bad.append(f"j={j} Euler")
        if not diagonal_support_check(page, j, 2):
            bad.append(f"j={j} diagonals")
    criterion(10, not bad, "pages, Euler and diagonals at j=1,3,5,7,9" + ("; failed: " + ", ".join(bad) if bad else ""))
    assert not bad


@pytest.fixture(scope="module")
def corpus_by_entry():
    entries = corpus(max_entry=5, max_crossings=12, torus_max=7)
    return {rec.entry: rec for rec in corpus_records(entries, threads=os.cpu_count() or 1)}


def _ladder_failures(recs):
    """s(K+) - s(K-) in {0, 2} when one column crossing of a knot changes."""
    bad = []
    for (kind, t), rec in recs.items():
        if kind != "pretzel" or rec.s is None:
            continue
        for k in range(3):
            lo = list(t)
            lo[k] -= 2
            lo = tuple(lo)
            other = recs.get(("pretzel", lo))
            if other is None:
                continue
            # the diagram that carries the crossing being changed
            src = t if t[k] > 0 else lo
            d = pretzel_diagram(*src)
            sign = d.signs[pretzel_columns(*src)[k][0]]
            changed = other if src == t else rec
            s_plus, s_minus = (recs[("pretzel", src)].s, changed.s) if sign > 0 else (changed.s, recs[("pretzel", src)].s)
            if s_plus - s_minus not in (0, 2):
                bad.append((t, lo))
    return bad


@pytest.mark.slow
def test_c11_corpus(criterion, corpus_by_entry):
    recs = corpus_by_entry
    failures = {}
    failures["d o d = 0"] = [e for e, r in recs.items() if not r.d_squared_zero]
    failures["Euler = Jones"] = [e for e, r in recs.items() if r.euler != r.jones]
    mirror_bad, smirror_bad, perm_bad = [], [], []
    for (kind, arg), rec in recs.items():
        m = ("pretzel", tuple(-x for x in arg)) if kind == "pretzel" else ("torus", -arg)
        other = recs[m]
        # for links the default orientation of P(-p,-q,-r) need not be the
        # mirror of the one chosen for P(p,q,r), so mirror the diagram itself
        mdims = other.dims if rec.s is not None else khovanov_homology(mirror(build((kind, arg))))
        if mdims != mirror_dims(rec.dims):
            mirror_bad.append((kind, arg))
        if rec.s is not None and other.s != -rec.s:
            smirror_bad.append((kind, arg))
        if kind == "pretzel":
            for perm in set(permutations(arg)):
                if recs[("pretzel", perm)].dims != rec.dims:
                    perm_bad.append((arg, perm))
    failures["mirror duality"] = mirror_bad
    failures["s(mirror) = -s"] = smirror_bad
    failures["permutation invariance"] = perm_bad
    failures["crossing-change ladder"] = _ladder_failures(recs)
    knots = sum(1 for r in recs.values() if r.s is not None)
    failed = {k: v for k, v in failures.items() if v}
    detail = f"{len(recs)} diagrams ({knots} knots); " + ", ".join(f"{k}: {'ok' if not v else f'{len(v)} failures'}" for k, v in failures.items())
    criterion(11, not failed, detail)
    assert not failed, {k: [entry_label(e) if isinstance(e[0], str) else e for e in v[:5]] for k, v in failed.items()}


def _table_failures(even_s, odd_s):
    bad, covered, alternating = [], 0, 0
    for t, s in {**even_s, **odd_s}.items():
        pred = predict_s(*t)
        if pred is None:
            continue
        covered += 1
        if not pred.contains(s):
            bad.append((t, pred.interval, s))
        if pred.alternating:
            alternating += 1
            if s != -signature(pretzel_diagram(*t)):
                bad.append((t, "s != -sigma", s))
    return bad, covered, alternating


@pytest.mark.xfail(strict=True, reason="s of P(3,-5,-4) and P(3,-7,-4) lies above the row interval [p-q-2, p-q]")
def test_c12_table_consistency(criterion, even_s, odd_s):
    bad, covered, alternating = _table_failures(even_s, odd_s)
    detail = f"{covered - len(bad)}/{covered} covered knots inside their row ({alternating} alternating)"
    if bad:
        detail += "; outside: " + ", ".join(f"{_name(t)} s={s} row {list(iv)}" for t, iv, s in bad)
    criterion(12, not bad, detail)
    assert not bad


def test_c12_disagreement_is_exact(even_s, odd_s):
    bad, _, _ = _table_failures(even_s, odd_s)
    assert {t for t, _, _ in bad} == EVEN_EXCEPTIONS
    for t, (lo, hi), s in bad:
        assert s == hi + 2
