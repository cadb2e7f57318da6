"""Matplotlib figures written next to the delimited reports."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..geometry import GeometryError, parse_wkt  # noqa: E402
from ..rdf import Graph, Literal  # noqa: E402
from ..vocab import DEFAULT_SPATIAL_DATATYPES, QB4O_MEMBER_OF, QB_OBSERVATION, RDF_TYPE  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 120,
}
MAP_LIMIT = 5000


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # no version stamp, so the bytes do not depend on the matplotlib release
    fig.savefig(path, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def relation_bars(phase_counts: Mapping[str, Mapping[str, int]], path: Path, title: str = "") -> Path:
    """Grouped bars: one group per phase, one bar per relation kind."""
    phases = list(phase_counts)
    kinds = sorted({k for counts in phase_counts.values() for k in counts})
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(7, 3.6))
        width = 0.8 / max(1, len(kinds))
        for k_idx, kind in enumerate(kinds):
            xs = [i + (k_idx - (len(kinds) - 1) / 2) * width for i in range(len(phases))]
            ys = [phase_counts[p].get(kind, 0) for p in phases]
            ax.bar(xs, ys, width=width, label=kind)
        ax.set_xticks(range(len(phases)))
        ax.set_xticklabels([p.replace("_", "\n") for p in phases])
        ax.set_ylabel("relations")
        if title:
            ax.set_title(title)
        if kinds:
            ax.legend(frameon=False, ncol=len(kinds))
        return _save(fig, path)


def diff_bars(rows: Sequence[dict], path: Path) -> Path:
    """Expected vs found counts per relation kind."""
    kinds = [r["relation"] for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        xs = range(len(kinds))
        ax.bar([x - 0.2 for x in xs], [r["expected"] for r in rows], width=0.4, label="expected")
        ax.bar([x + 0.2 for x in xs], [r["found"] for r in rows], width=0.4, label="found")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(kinds)
        ax.set_ylabel("relations")
        ax.legend(frameon=False)
        return _save(fig, path)


def member_map(instance: Graph, path: Path, datatypes=DEFAULT_SPATIAL_DATATYPES):
    """Outline every level-member geometry, coloured by level, with facts as dots.

    Returns None when the cube is too large to draw usefully.
    """
    spatial = [
        t for t in instance if isinstance(t.object, Literal) and t.object.datatype in datatypes
    ]
    if not spatial or len(spatial) > MAP_LIMIT:
        return None
    level_of = {t.subject: t.object for t in instance.match(None, QB4O_MEMBER_OF, None)}
    facts = set(instance.subjects(RDF_TYPE, QB_OBSERVATION))
    levels = sorted({v.value for v in level_of.values()})
    cmap = plt.get_cmap("tab10")
    colour = {lvl: cmap(i % 10) for i, lvl in enumerate(levels)}
    # batch coordinates per level, NaN-separated, so one plot call draws a level
    paths: dict[str, tuple[list, list, bool]] = {}
    fx, fy = [], []
    for t in sorted(spatial, key=lambda t: t.n3()):
        try:
            g = parse_wkt(t.object.lexical)
        except GeometryError:
            continue
        xs = [c[0] for c in g.coords]
        ys = [c[1] for c in g.coords]
        if t.subject in facts:
            fx += xs
            fy += ys
            continue
        lvl = level_of.get(t.subject)
        name = lvl.value if lvl is not None else "other"
        px, py, _ = paths.setdefault(name, ([], [], bool(g.kind.dim)))
        px += xs + [float("nan")]
        py += ys + [float("nan")]
    with plt.rc_context({**STYLE, "axes.grid": False}):
        fig, ax = plt.subplots(figsize=(6, 6))
        for name, (px, py, drawn) in sorted(paths.items()):
            label = name.rsplit("/", 1)[-1].rsplit("#", 1)[-1]
            ax.plot(px, py, "-" if drawn else "o", color=colour.get(name, "grey"),
                    linewidth=0.8, markersize=3, label=label)
        if fx:
            ax.plot(fx, fy, ".", color="black", markersize=2, label="facts")
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(frameon=False, fontsize=7, loc="upper left", bbox_to_anchor=(1, 1))
        return _save(fig, path)
