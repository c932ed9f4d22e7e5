"""Faceted line charts of outcome curves, written as self-contained SVG.

Rows are the number of items, columns the sample size.  Independent-error
curves are coloured on a viridis ramp (purple = low error, yellow = high);
dependency profiles use fixed blue / green / orange for small / medium /
large.
"""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .report import CurveReport  # noqa: E402

logger = logging.getLogger(__name__)

PROFILE_COLORS = {"small": "tab:blue", "medium": "tab:green", "large": "tab:orange"}
EXTRA_COLORS = ["tab:red", "tab:purple", "tab:brown", "tab:pink", "tab:gray", "tab:olive", "tab:cyan"]

AXIS_LABELS = {
    "spearman": "Spearman correlation with true score",
    "slope_se": "SE of standardized slope",
    "bias": "Bias of standardized slope",
}

# fixed ids, no timestamp: identical tables give identical bytes
RC = {
    "svg.hashsalt": "grmsim",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
}


def _line_colors(line_by: str, lines) -> dict:
    if line_by == "profile":
        colors, extra = {}, iter(EXTRA_COLORS * 10)
        for name in lines:
            colors[name] = PROFILE_COLORS.get(name) or next(extra)
        return colors
    lines = sorted(lines)
    cmap = mpl.colormaps["viridis"]
    if len(lines) == 1:
        return {lines[0]: cmap(0.0)}
    lo, hi = lines[0], lines[-1]
    return {s: cmap((s - lo) / (hi - lo)) for s in lines}


def _legend_label(line_by: str, value) -> str:
    return f"sigma={value:g}" if line_by == "sigma" else str(value)


def facet_chart(frame, x: str, y: str, line_by: str, title: str, ylabel: str, zero_line: bool = False) -> Figure:
    """Grid of panels (items x n), one line per ``line_by`` value."""
    items = sorted(frame["items"].unique())
    sizes = sorted(frame["n"].unique())
    lines = list(dict.fromkeys(frame[line_by]))
    colors = _line_colors(line_by, lines)

    fig = Figure(figsize=(3.0 * len(sizes) + 1.6, 2.4 * len(items) + 0.6))
    axes = fig.subplots(len(items), len(sizes), squeeze=False, sharex=True, sharey=True)
    for r, j in enumerate(items):
        for c, n in enumerate(sizes):
            ax = axes[r][c]
            panel = frame[(frame["items"] == j) & (frame["n"] == n)]
            for line in lines:
                part = panel[panel[line_by] == line]
                if part.empty:
                    continue
                ax.plot(part[x], part[y], color=colors[line], label=_legend_label(line_by, line))
            if zero_line:
                ax.axhline(0.0, color="0.6", linewidth=0.6, linestyle=":")
            ax.xaxis.set_major_locator(MaxNLocator(integer=True))
            ax.set_title(f"{j} item{'s' if j != 1 else ''}, N = {n}")
            if r == len(items) - 1:
                ax.set_xlabel("Number of response options")
            if c == 0:
                ax.set_ylabel(ylabel)
    handles, labels = axes[0][0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="center right", frameon=False)
    fig.suptitle(title)
    fig.tight_layout(rect=(0, 0, 0.86, 1))
    return fig


def _as_tables(tables) -> dict:
    out = {}
    for metric, entry in tables.items():
        if isinstance(entry, CurveReport):
            entry = {"curves": entry.curves, "deltas": entry.deltas}
        out[metric] = entry
    return out


def render_charts(tables, output_dir) -> list[Path]:
    """Write one SVG per (metric, mode) plus a delta chart per metric.

    ``tables`` maps metric name to a :class:`CurveReport` or to a dict with
    ``"curves"`` and optional ``"deltas"`` frames.
    """
    tables = _as_tables(tables)
    if not tables or all(entry["curves"].empty for entry in tables.values()):
        logger.warning("no curve tables given; no charts written")
        return []
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    with mpl.rc_context(RC):
        for metric, entry in sorted(tables.items()):
            curves = entry["curves"]
            if curves.empty:
                continue
            line_by = "sigma" if "sigma" in curves.columns else "profile"
            mode = "independent" if line_by == "sigma" else "dependency"
            ylabel = AXIS_LABELS.get(metric, metric)
            fig = facet_chart(curves, "k", metric, line_by, f"{ylabel} ({mode} error)", ylabel)
            paths.append(_save(fig, out / f"{metric}_{mode}.svg"))
            deltas = entry.get("deltas")
            if deltas is not None and not deltas.empty:
                fig = facet_chart(
                    deltas, "k_to", "delta", line_by, f"Delta: {ylabel} ({mode} error)",
                    f"Change in {metric}", zero_line=True,
                )
                paths.append(_save(fig, out / f"delta_{metric}_{mode}.svg"))
    return paths


def _save(fig: Figure, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path
