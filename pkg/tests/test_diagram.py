import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pretzelkh.diagram import (
    DiagramError,
    LinkDiagram,
    count_smoothing_circles,
    mirror,
    omega,
    pretzel_columns,
    pretzel_diagram,
    resolve,
    resolve_all,
    reorient,
    signature,
    slice_bennequin_bounds,
    stats,
    torus2_diagram,
    unknot,
)

small = st.integers(-4, 4)


def test_pretzel_shapes():
    d = pretzel_diagram(3, -3, -2)
    assert (d.n_crossings, d.component_count) == (8, 1)
    assert pretzel_diagram(3, 3, 3).component_count == 1
    assert pretzel_diagram(3, 3, 3).n_crossings == 9


def test_zero_pretzel_is_crossingless():
    d = pretzel_diagram(0, 0, 0)
    assert d.n_crossings == 0
    # three empty columns leave three closed strands (see the decisions ledger)
    assert d.component_count == 3


def test_torus_shapes():
    assert (torus2_diagram(3).n_crossings, torus2_diagram(3).component_count) == (3, 1)
    assert (torus2_diagram(2).n_crossings, torus2_diagram(2).component_count) == (2, 2)
    assert (torus2_diagram(0).n_crossings, torus2_diagram(0).component_count) == (0, 2)


@given(small, small, small)
@settings(max_examples=60, deadline=None)
def test_component_parity_rule(p, q, r):
    evens = sum(1 for x in (p, q, r) if x % 2 == 0)
    d = pretzel_diagram(p, q, r)
    assert d.n_crossings == abs(p) + abs(q) + abs(r)
    assert (d.component_count == 1) == (evens <= 1)


@given(small, small, small)
@settings(max_examples=40, deadline=None)
def test_permutations_keep_counts(p, q, r):
    base = pretzel_diagram(p, q, r)
    for t in itertools.permutations((p, q, r)):
        d = pretzel_diagram(*t)
        assert d.n_crossings == base.n_crossings
        assert d.component_count == base.component_count


def test_edges_appear_twice_and_are_labelled_along_orientation():
    d = pretzel_diagram(3, -5, 2)
    labels = sorted(e for x in d.pd for e in x)
    assert labels == sorted(list(range(1, 2 * d.n_crossings + 1)) * 2)


def test_bad_pd_rejected():
    with pytest.raises(DiagramError):
        LinkDiagram(((1, 2, 3, 4),), (1,), 0)


def test_json_round_trip():
    d = pretzel_diagram(3, -5, -4)
    assert LinkDiagram.from_json(d.to_json()) == d
    assert d.to_json() == LinkDiagram.from_json(d.to_json()).to_json()


def test_json_orientation_must_match():
    d = torus2_diagram(2)
    text = d.to_json().replace('"orientation": [[', '"orientation": [[99, ')
    with pytest.raises(DiagramError):
        LinkDiagram.from_json(text)


def test_mirror():
    assert mirror(torus2_diagram(3)).writhe == -3
    d = pretzel_diagram(3, -5, 2)
    assert mirror(mirror(d)) == d
    m = mirror(pretzel_diagram(3, -5, -4))
    assert sorted(m.signs) == sorted(pretzel_diagram(-3, 5, 4).signs)


def test_resolve_torus():
    d = torus2_diagram(3)
    r = resolve(d, 0, 0)
    assert r.n_crossings == 2
    assert r.component_count == 2
    # the oriented smoothing keeps the remaining signs
    assert r.signs == (1, 1)


def test_resolve_all_gives_circles():
    d = pretzel_diagram(3, -2, 2)
    for bits in itertools.product((0, 1), repeat=d.n_crossings):
        r = resolve_all(d, bits)
        assert r.n_crossings == 0
        assert r.free_loops == count_smoothing_circles(d, bits)


def test_resolve_bad_index():
    with pytest.raises(DiagramError):
        resolve(torus2_diagram(3), 5, 0)


def test_reorient_changes_signs_between_components():
    d = torus2_diagram(2)
    flipped = reorient(d, (False, True))
    assert flipped.writhe == -d.writhe


def test_stats_examples():
    st3 = stats(torus2_diagram(3))
    assert (st3.writhe, st3.seifert_circle_count, st3.strongly_negative_count) == (3, 2, 0)
    for r in (2, 4):
        s = stats(pretzel_diagram(9, -7, -r))
        assert (s.writhe, s.seifert_circle_count, s.strongly_negative_count, s.non_negative_count) == (r + 2, r + 1, 0, r + 1)
        m = stats(mirror(pretzel_diagram(9, -7, -r)))
        assert (m.writhe, m.strongly_negative_count, m.non_negative_count) == (-r - 2, r - 1, 2)


@given(small, small, small)
@settings(max_examples=40, deadline=None)
def test_stats_invariants(p, q, r):
    d = pretzel_diagram(p, q, r)
    s = stats(d)
    assert s.seifert_circle_count == s.strongly_negative_count + s.non_negative_count
    assert s.writhe == s.n_plus - s.n_minus
    assert s.n_plus + s.n_minus == d.n_crossings
    m = stats(mirror(d))
    assert m.writhe == -s.writhe
    assert m.seifert_circle_count == s.seifert_circle_count


def test_bounds_examples():
    assert slice_bennequin_bounds(torus2_diagram(3))[0] == 2
    for r in (2, 4):
        d = pretzel_diagram(9, -7, -r)
        assert slice_bennequin_bounds(d) == (2, 2)
        assert slice_bennequin_bounds(mirror(d)) == (-2 * r - 2, -4)


def test_bounds_need_knot():
    with pytest.raises(DiagramError):
        slice_bennequin_bounds(torus2_diagram(2))


def test_omega():
    # pq + qr + rp = -9 + 6 - 6
    assert omega(3, -3, -2) == -9
    assert omega(1, 1, 1) == 3


def test_signature_examples():
    assert signature(torus2_diagram(3)) == -2
    assert signature(pretzel_diagram(3, 3, 3)) == 2
    # P(p, q, -r) with omega < 0 has signature -p-q
    assert omega(3, 3, -2) < 0
    assert signature(pretzel_diagram(3, 3, -2)) == -6
    assert signature(unknot()) == 0


@given(st.sampled_from([-3, 3, -5, 5]), st.sampled_from([-3, 3, 5]), st.sampled_from([-2, 2, 3, -4]))
@settings(max_examples=30, deadline=None)
def test_signature_mirror(p, q, r):
    d = pretzel_diagram(p, q, r)
    if d.component_count == 1:
        assert signature(mirror(d)) == -signature(d)


def test_signature_independent_of_colouring():
    from pretzelkh.diagram import _goeritz_signature

    for t in [(3, -5, -4), (5, 3, -2), (3, 5, 7), (-3, 5, 2)]:
        d = pretzel_diagram(*t)
        assert _goeritz_signature(d, 0) == _goeritz_signature(d, 1)


def test_unknot_with_kinks():
    d = unknot(2, -1)
    assert d.n_crossings == 2 and d.component_count == 1 and d.writhe == -2


def test_columns():
    assert pretzel_columns(2, -3, 0) == [[0, 1], [2, 3, 4], []]
