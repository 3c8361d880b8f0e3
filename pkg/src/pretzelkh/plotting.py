"""Figures for Khovanov tables and E1 pages.

Figures are built on :class:`matplotlib.figure.Figure` directly, so no
pyplot state or interactive backend is involved and the functions are safe
to call from worker processes.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from .khovanov import BigradedDims
from .turner import E1Page


def _rank_grid(ax, cells: dict, xs: list, ys: list, xlabel: str, ylabel: str):
    """Draw ``cells[(x, y)] = rank`` as annotated squares."""
    for (x, y), r in cells.items():
        if not r:
            continue
        ax.add_patch(_square(x, y, 0.9))
        ax.text(x, y, str(r), ha="center", va="center", fontsize=9)
    ax.set_xticks(xs)
    ax.set_yticks(ys)
    if xs:
        ax.set_xlim(min(xs) - 0.6, max(xs) + 0.6)
    if ys:
        step = ys[1] - ys[0] if len(ys) > 1 else 1
        ax.set_ylim(min(ys) - 0.6 * step, max(ys) + 0.6 * step)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, color="0.9", linewidth=0.6)
    ax.set_axisbelow(True)


def _square(x, y, size):
    return Rectangle((x - size / 2, y - size / 2), size, size, facecolor="#dbe7f3", edgecolor="#4a6f96", linewidth=0.8)


def kh_grid_figure(dims: BigradedDims, title: str = "") -> Figure:
    """Rank table of KH with homological degree across and quantum degree up.

    Quantum degrees of a diagram share a parity, so rows are two apart; the
    squares are drawn with the same aspect as the columns.
    """
    support = dims.support()
    xs = sorted({i for i, _ in support})
    ys = sorted({j for _, j in support})
    if xs:
        xs = list(range(xs[0], xs[-1] + 1))
    if ys:
        ys = list(range(ys[0], ys[-1] + 1, 2))
    # rows are two quantum degrees apart: plot j / 2 and relabel
    cells = {(i, j / 2): r for (i, j), r in dims.items()}
    fig = Figure(figsize=(max(3.0, 0.5 * len(xs) + 1.5), max(2.5, 0.4 * len(ys) + 1.5)))
    ax = fig.add_subplot()
    _rank_grid(ax, cells, xs, [y / 2 for y in ys], "homological degree i", "quantum degree j")
    ax.set_yticks([y / 2 for y in ys], [str(y) for y in ys])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def e1_page_figure(page: E1Page, title: str = "") -> Figure:
    """E1 page with columns s = 0..m and rows t."""
    xs = list(range(page.m + 1))
    ts = sorted({t for _, t in page.cells})
    ys = list(range(ts[0], ts[-1] + 1)) if ts else []
    fig = Figure(figsize=(max(3.0, 0.5 * len(xs) + 1.5), max(2.5, 0.4 * len(ys) + 1.5)))
    ax = fig.add_subplot()
    _rank_grid(ax, page.ranks, xs, ys, "s", "t")
    ax.set_title(title or f"E1 page, j = {page.j}")
    fig.tight_layout()
    return fig


def save_figure(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    return path
