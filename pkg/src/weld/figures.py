"""Render a criteria matrix as a figure file (PNG/SVG/PDF by extension)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .evalharness import CELL_TEXT, CRITERIA, CRITERION_LABELS, CriteriaMatrix  # noqa: E402
from .mechanisms import DISPLAY_NAMES, MECHANISM_ORDER, Mechanism  # noqa: E402

_CELL_COLORS = {"+": "#a8d5a2", "(+)": "#ffe49c", "-": "#f0a8a0"}


def render_matrix_figure(matrix: CriteriaMatrix, out_path: str | Path,
                         mechanisms: tuple[Mechanism, ...] = MECHANISM_ORDER) -> None:
    rows = list(CRITERIA)
    cols = list(mechanisms)
    fig_width = 1.8 + 1.15 * len(cols)
    fig_height = 1.2 + 0.5 * len(rows)
    fig, ax = plt.subplots(figsize=(fig_width, fig_height))
    ax.set_xlim(0, len(cols))
    ax.set_ylim(0, len(rows))
    ax.invert_yaxis()
    ax.set_xticks([i + 0.5 for i in range(len(cols))])
    ax.set_xticklabels([DISPLAY_NAMES[m] for m in cols], rotation=30,
                       ha="left", fontsize=8)
    ax.xaxis.tick_top()
    ax.set_yticks([i + 0.5 for i in range(len(rows))])
    ax.set_yticklabels([CRITERION_LABELS[c] for c in rows], fontsize=8)
    for spine in ax.spines.values():
        spine.set_visible(False)
    ax.tick_params(length=0)
    for y, crit in enumerate(rows):
        for x, mech in enumerate(cols):
            cell = CELL_TEXT[matrix.cells[(mech, crit)].verdict]
            ax.add_patch(plt.Rectangle((x, y), 1, 1,
                                       facecolor=_CELL_COLORS[cell],
                                       edgecolor="white", linewidth=1.5))
            ax.text(x + 0.5, y + 0.5, cell, ha="center", va="center",
                    fontsize=11)
    ax.set_title("Integration mechanisms vs. criteria", fontsize=10, pad=28)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
