from pretzelkh import plotting
from pretzelkh.khovanov import BigradedDims, khovanov_homology
from pretzelkh.diagram import pretzel_diagram
from pretzelkh.turner import E1Page, TurnerData
from pretzelkh.verify import pqr_sequence


def test_kh_grid(tmp_path):
    dims = khovanov_homology(pretzel_diagram(3, -5, -4))
    fig = plotting.kh_grid_figure(dims, "P(3,-5,-4)")
    ax = fig.axes[0]
    assert ax.get_title() == "P(3,-5,-4)"
    assert len(ax.patches) == len(dims.support()) == 10
    assert {t.get_text() for t in ax.texts} == {"1"}
    path = plotting.save_figure(fig, tmp_path / "sub" / "kh.png")
    assert path.read_bytes()[:4] == b"\x89PNG"


def test_empty_grid():
    fig = plotting.kh_grid_figure(BigradedDims())
    assert not fig.axes[0].patches


def test_e1_figure(tmp_path):
    page = TurnerData(pqr_sequence(9, 2)).page(9)
    fig = plotting.e1_page_figure(page)
    ax = fig.axes[0]
    assert ax.get_title() == "E1 page, j = 9"
    assert sorted(t.get_text() for t in ax.texts) == ["1", "3", "4"]
    assert plotting.save_figure(fig, tmp_path / "e1.png").exists()
    assert not plotting.e1_page_figure(E1Page(0, 1)).axes[0].patches
