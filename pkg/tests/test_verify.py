from pretzelkh.verify import (
    corpus,
    corpus_record,
    mirror_dims,
    run_suite,
    suite_bounds,
    suite_lemma51,
    suite_thm12,
    write_report,
)

import pytest


def test_corpus_shape():
    entries = corpus(max_entry=2, max_crossings=4, torus_max=2)
    assert ("pretzel", (0, 0, 0)) in entries and ("torus", -2) in entries
    assert all(sum(abs(x) for x in t) <= 4 for kind, t in entries if kind == "pretzel")


def test_corpus_record():
    rec = corpus_record(("pretzel", (3, -3, -2)))
    assert rec.d_squared_zero and rec.euler == rec.jones and rec.s == 0 and rec.components == 1
    link = corpus_record(("torus", 2))
    assert link.s is None and link.components == 2


def test_mirror_dims():
    rec = corpus_record(("torus", 3))
    assert mirror_dims(rec.dims) == corpus_record(("torus", -3)).dims


def test_suites_small():
    assert suite_lemma51(vmax=5).failed == 0
    assert suite_bounds(rs=(2,)).failed == 0
    res = suite_thm12(pmax=5, rmax=2)
    assert res.failed == 0 and len(res.checks) == 4


def test_euler_suite_small():
    res = run_suite("euler", max_entry=2, max_crossings=5, torus_max=3)
    assert res.failed == 0 and res.passed == len(res.checks) > 0


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")


def test_write_report(tmp_path):
    res = suite_lemma51(vmax=3)
    paths = write_report(res, tmp_path)
    names = sorted(p.name for p in paths)
    assert names[0] == "kh_P_3_-3_0.png" and "lemma5_1.csv" in names and "lemma5_1.json" in names
    assert write_report(res, tmp_path / "nofig", figures=False)[-1].suffix == ".csv"
