"""Tabular outputs: per-cell summaries, metric-vs-K curves, deltas and optima."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from .engine import CellSummary, ConditionCell, profile_for_cell
from .errors import InvalidArgumentError
from .stats import delta_series

logger = logging.getLogger(__name__)

SUMMARY_FILE = "cell_summaries.csv"
REPLICATION_FILE = "replications.csv"
SUMMARY_HEADER = (
    "k,sigma,items,n,replications,mean_spearman,sd_spearman,mean_slope,sd_slope,"
    "mean_slope_se,sd_slope_se,mean_bias,sd_bias,discards"
)
STAT_FIELDS = SUMMARY_HEADER.split(",")[5:13]
FLOAT_FORMAT = "%.9g"

# metric -> (CellSummary attribute, "max" or "min" is best)
METRICS = {
    "spearman": ("mean_spearman", "max"),
    "slope_se": ("mean_slope_se", "min"),
    "bias": ("mean_bias", "max"),
}


def fmt(value: float) -> str:
    """Nine significant digits; Python formatting ignores the process locale."""
    return format(float(value), ".9g")


def _sort_key(summary: CellSummary):
    c = summary.cell
    return (c.num_categories, c.sigma, c.num_items, c.sample_size)


def write_summaries(summaries, output_dir) -> Path:
    summaries = sorted(summaries, key=_sort_key)
    if not summaries:
        raise InvalidArgumentError("no summaries to write")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / SUMMARY_FILE
    lines = [SUMMARY_HEADER]
    for s in summaries:
        c = s.cell
        row = [str(c.num_categories), fmt(c.sigma), str(c.num_items), str(c.sample_size), str(s.replications)]
        row += [fmt(getattr(s, name)) for name in STAT_FIELDS]
        row.append(str(s.discards))
        lines.append(",".join(row))
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_summaries(path) -> list[CellSummary]:
    """Parse a ``cell_summaries.csv``; cell seeds are not stored and come back as ``None``."""
    path = Path(path)
    if path.is_dir():
        path = path / SUMMARY_FILE
    with open(path, newline="", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != SUMMARY_HEADER:
            raise InvalidArgumentError(f"{path}: unexpected header {header!r}")
        rows = list(csv.reader(fh))
    out = []
    for row in rows:
        if not row:
            continue
        k, sigma, items, n, reps = row[:5]
        cell = ConditionCell(int(k), float(sigma), int(items), int(n), int(reps))
        stats = {name: float(v) for name, v in zip(STAT_FIELDS, row[5:13])}
        out.append(CellSummary(cell=cell, replications=int(reps), discards=int(row[13]), **stats))
    return out


def write_replications(summaries, output_dir) -> Path:
    path = Path(output_dir) / REPLICATION_FILE
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("k,sigma,items,n,rep,spearman,slope,slope_se,bias,discards\n")
        for s in sorted(summaries, key=_sort_key):
            c = s.cell
            for i, r in enumerate(s.records):
                fh.write(
                    f"{c.num_categories},{fmt(c.sigma)},{c.num_items},{c.sample_size},{i},"
                    f"{fmt(r.spearman_true_obs)},{fmt(r.slope)},{fmt(r.slope_se)},"
                    f"{fmt(r.slope_bias)},{r.discarded_regenerations}\n"
                )
    return path


@dataclass
class CurveReport:
    """Curves of one metric against K, one per (line, items, n) group.

    ``line_by`` is ``"sigma"`` (independent error) or ``"profile"``
    (error depends on K); the same name is used as the line column.
    """

    metric: str
    line_by: str
    curves: pd.DataFrame
    deltas: pd.DataFrame
    optima: pd.DataFrame
    warnings: list[str] = field(default_factory=list)


def summarize_curves(summaries, metric: str = "spearman", line_by: str = "sigma", profiles=None) -> CurveReport:
    """Metric-vs-K series, their consecutive differences and the best K per group.

    For ``line_by="profile"`` each summary is assigned to the profile in
    ``profiles`` that produces its sigma at its K; summaries matching no
    profile are skipped.  Groups covering a single K are dropped with a
    warning.
    """
    if metric not in METRICS:
        raise InvalidArgumentError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}")
    if line_by not in ("sigma", "profile"):
        raise InvalidArgumentError("line_by must be 'sigma' or 'profile'")
    if line_by == "profile" and not profiles:
        raise InvalidArgumentError("grouping by profile needs the profile definitions")
    attr, best = METRICS[metric]

    records = []
    for s in summaries:
        if line_by == "profile":
            profile = profile_for_cell(s.cell, profiles)
            if profile is None:
                continue
            line = profile.label
        else:
            line = s.cell.sigma
        records.append((line, s.cell.num_items, s.cell.sample_size, s.cell.num_categories, getattr(s, attr)))
    if not records:
        raise InvalidArgumentError("no summaries to build curves from")

    table = pd.DataFrame(records, columns=[line_by, "items", "n", "k", metric])
    if line_by == "profile":
        order = {p.label: i for i, p in enumerate(profiles)}
        table["_order"] = table["profile"].map(order)
        keys = ["_order", "items", "n", "k"]
    else:
        keys = ["sigma", "items", "n", "k"]
    table = table.sort_values(keys, kind="mergesort").drop(columns="_order", errors="ignore")

    curve_parts, delta_rows, optima_rows, warnings = [], [], [], []
    for (line, items, n), group in table.groupby([line_by, "items", "n"], sort=False):
        if len(group) < 2:
            msg = f"{line_by}={line} items={items} n={n}: single K value, group skipped"
            logger.warning(msg)
            warnings.append(msg)
            continue
        curve_parts.append(group)
        ks = group["k"].to_numpy()
        vals = group[metric].to_numpy()
        for k0, k1, d in zip(ks[:-1], ks[1:], delta_series(vals)):
            delta_rows.append((line, items, n, k0, k1, d))
        pos = int(vals.argmax() if best == "max" else vals.argmin())
        optima_rows.append((line, items, n, int(ks[pos]), float(vals[pos]), best))

    curves = pd.concat(curve_parts, ignore_index=True) if curve_parts else table.iloc[0:0]
    deltas = pd.DataFrame(delta_rows, columns=[line_by, "items", "n", "k_from", "k_to", "delta"])
    optima = pd.DataFrame(optima_rows, columns=[line_by, "items", "n", "best_k", "best_value", "criterion"])
    return CurveReport(metric, line_by, curves.reset_index(drop=True), deltas, optima, warnings)


def write_curves(report: CurveReport, output_dir) -> list[Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for prefix, frame in (("curves", report.curves), ("deltas", report.deltas), ("optima", report.optima)):
        path = out / f"{prefix}_{report.metric}.csv"
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        paths.append(path)
    if report.warnings:
        path = out / f"warnings_{report.metric}.txt"
        path.write_text("\n".join(report.warnings) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def read_curve_tables(directory) -> dict[str, dict[str, pd.DataFrame]]:
    """Load every ``curves_*``/``deltas_*`` pair found in ``directory``."""
    directory = Path(directory)
    tables = {}
    for path in sorted(directory.glob("curves_*.csv")):
        metric = path.stem[len("curves_"):]
        entry = {"curves": pd.read_csv(path)}
        delta_path = directory / f"deltas_{metric}.csv"
        if delta_path.exists():
            entry["deltas"] = pd.read_csv(delta_path)
        tables[metric] = entry
    return tables

