import pytest

from pretzelkh.diagram import DiagramError, pretzel_columns, pretzel_diagram, torus2_diagram
from pretzelkh.khovanov import khovanov_homology
from pretzelkh.turner import (
    E1Page,
    TurnerData,
    build_sequence,
    constants,
    diagonal_support_check,
    e1_euler_check,
    e1_page,
)
from pretzelkh.verify import pq0_sequence, pqr_sequence, reference_e1_pages


def test_empty_sequence():
    d = torus2_diagram(3)
    seq = build_sequence(d, [])
    assert seq.m == 0 and seq.resolved == (d,) and seq.tilde == (d,)
    c = constants(seq)
    assert c.A == (0,) and c.B == (0,)
    page = e1_page(seq, 5)
    assert page.ranks == {(0, 2): 1}
    assert e1_euler_check(page, khovanov_homology(d), 5)


def test_bad_sequences():
    d = torus2_diagram(3)
    with pytest.raises(DiagramError):
        build_sequence(d, [0, 0])
    with pytest.raises(DiagramError):
        build_sequence(d, [7])
    with pytest.raises(DiagramError):
        build_sequence(d, [0, 1], [(None, None)])


def test_sequence_shapes():
    seq = pq0_sequence(9)
    assert seq.m == 6
    for k in range(seq.m + 1):
        assert seq.resolved[k].n_crossings == seq.base.n_crossings - k
    # every 0-resolved leaf of P(p,-q,0) is a T(2,p) diagram
    t29 = khovanov_homology(torus2_diagram(9))
    lo = min(t29.support())
    for k in range(1, seq.m + 1):
        dims = khovanov_homology(seq.tilde[k])
        first = min(dims.support())
        assert dims == t29.shifted(first[0] - lo[0], first[1] - lo[1])


def test_constant_identities():
    for seq in (pq0_sequence(9), pqr_sequence(9, 2), pqr_sequence(9, 4)):
        c = constants(seq)
        assert c.A[0] == c.B[0] == 0
        for k in range(1, seq.m + 1):
            assert c.a[k] == c.n_minus[k - 1] - c.n_minus[k] - 1
            assert c.b[k] == 3 * c.a[k] + 1
            assert c.b_tilde[k] == 3 * c.a_tilde[k] - 1
            assert c.A[k] == c.A[k - 1] + c.a[k]
            assert c.B[k] == 3 * c.A[k] + k


def test_published_constants():
    c = constants(pq0_sequence(9))
    q = 7
    assert list(c.a_tilde[1:]) == [q - s + 1 for s in range(1, q)]
    assert list(c.b_tilde[1:]) == [3 * q - 3 * s + 2 for s in range(1, q)]
    assert list(c.A[1:]) == [0] * (q - 1)
    assert list(c.B[1:]) == list(range(1, q))
    c = constants(pqr_sequence(9, 2))
    assert c.a_tilde[1:] == (0, 0) and c.b_tilde[1:] == (-1, -1)
    assert c.A[1:] == (-3, -2) and c.B[1:] == (-8, -4)


def test_provenance_is_recorded():
    seq = pqr_sequence(9, 2)
    assert seq.provenance[0] == ("given", "given")
    assert all(len(p) == 2 for p in seq.provenance)
    seq2 = build_sequence(seq.base, seq.crossing_order, [(None, "max_positive")] * 2)
    assert seq2.provenance[1][1] == "max_positive"


@pytest.fixture(scope="module")
def p9r2():
    return TurnerData(pqr_sequence(9, 2)), khovanov_homology(pretzel_diagram(9, -7, -2))


@pytest.mark.parametrize("j", [1, 3, 5, 7, 9])
def test_published_pages(p9r2, j):
    data, base = p9r2
    page = data.page(j)
    assert page.ranks == reference_e1_pages(0)[j]
    assert e1_euler_check(page, base, j)
    assert diagonal_support_check(page, j, 2)


def test_nonempty_pages_and_dominance(p9r2):
    data, base = p9r2
    for j in data.nonempty_j():
        page = data.page(j)
        total = sum(r for (i, q), r in base.items() if q == j)
        assert sum(page.ranks.values()) >= total
        assert e1_euler_check(page, base, j)
        assert diagonal_support_check(page, j, 2)


def test_corrupted_page_fails_euler(p9r2):
    data, base = p9r2
    page = data.page(5)
    (s, t), cell = next(iter(page.cells.items()))
    page.cells[(s, t)] = type(cell)(s, t, cell.rank + 1, cell.leaf, cell.leaf_bigrading)
    assert not e1_euler_check(page, base, 5)


def test_even_j_pages_of_pq0_are_empty():
    data = TurnerData(pq0_sequence(9))
    for j in (-4, 0, 2, 6):
        assert data.page(j).ranks == {}


def test_page_json_and_latex(p9r2):
    data, _ = p9r2
    page = data.page(9)
    again = E1Page.from_json(page.to_json(), m=page.m)
    assert again.to_json() == page.to_json()
    assert again.ranks == page.ranks
    tex = page.to_latex()
    assert tex.startswith("% j=9") and "\\end{tabular}" in tex


def test_diagonal_check_trivial_cases():
    assert diagonal_support_check(E1Page(3, 2), 3, 2)


def test_parallel_leaves_match_serial():
    seq = pqr_sequence(9, 2)
    a, b = TurnerData(seq, threads=2), TurnerData(seq)
    assert a.tilde_homology == b.tilde_homology and a.final_homology == b.final_homology


def test_e1_columns_of_resolved_third_column():
    d = pretzel_diagram(5, -3, -2)
    seq = build_sequence(d, pretzel_columns(5, -3, -2)[2])
    data = TurnerData(seq)
    base = khovanov_homology(d)
    for j in data.nonempty_j():
        assert e1_euler_check(data.page(j), base, j)
