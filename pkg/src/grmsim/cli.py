"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 degenerate
statistics.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import RESOLVED_CONFIG_NAME, RunConfig, load_config, parse_config, write_resolved_config
from .engine import expand_grid, run_grid
from .errors import ConfigError, DegenerateInputError, InvalidArgumentError
from .report import (
    METRICS,
    read_curve_tables,
    read_summaries,
    summarize_curves,
    write_curves,
    write_replications,
    write_summaries,
)

logger = logging.getLogger("grmsim")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmsim",
        description="Simulate ordinal items under the ogive graded response model "
        "and study how the number of response options affects recovery.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", type=Path, help="YAML run configuration")
        p.add_argument("--seed", type=_u64, help="master seed (overrides the file)")
        p.add_argument("--replications", type=_positive_int, help="replications per cell")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--quick", action="store_true", help="use 50 replications per cell")

    run = sub.add_parser("run", help="execute the condition grid")
    add_config_flags(run)
    run.add_argument("--workers", type=_positive_int, default=1, help="worker processes")
    run.add_argument("--no-charts", action="store_true", help="skip SVG chart rendering")

    val = sub.add_parser("validate", help="check a configuration without running it")
    add_config_flags(val)

    curves = sub.add_parser("curves", help="summaries -> curve, delta and optimum tables")
    curves.add_argument("run_dir", type=Path, help=f"directory holding cell_summaries.csv and {RESOLVED_CONFIG_NAME}")
    curves.add_argument("--config", type=Path, help="configuration to group by (default: the run's resolved config)")
    curves.add_argument("--out", type=Path, help="output directory (default: run_dir)")
    curves.add_argument("--metric", choices=sorted(METRICS), action="append", help="metric(s) to tabulate")

    chart = sub.add_parser("chart", help="curve tables -> SVG charts")
    chart.add_argument("tables_dir", type=Path, help="directory holding curves_*.csv tables")
    chart.add_argument("--out", type=Path, help="output directory (default: tables_dir)")
    return parser


def build_curve_reports(summaries, config: RunConfig | None, metrics=None) -> dict:
    if config is not None and config.mode == "dependency":
        kwargs = {"line_by": "profile", "profiles": config.profiles}
    else:
        kwargs = {"line_by": "sigma"}
    return {m: summarize_curves(summaries, m, **kwargs) for m in (metrics or METRICS)}


def _print_optima(report) -> None:
    opt = report.optima
    if opt.empty:
        return
    print(f"best K by {report.metric} ({opt['criterion'].iloc[0]}):")
    print(opt.drop(columns="criterion").to_string(index=False, float_format=lambda v: f"{v:.6g}"))


def cmd_validate(args) -> int:
    config = parse_config(args.config, seed=args.seed, replications=args.replications, out=args.out, quick=args.quick)
    cells = expand_grid(config)
    print(f"config OK: mode={config.mode}, {len(cells)} cells x {config.replications} replications")
    return EXIT_OK


def cmd_run(args) -> int:
    config = parse_config(args.config, seed=args.seed, replications=args.replications, out=args.out, quick=args.quick)
    cells = expand_grid(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(config, out)
    summaries = run_grid(
        cells, config.predictor, config.master_seed, workers=args.workers, keep_records=config.save_replications
    )
    path = write_summaries(summaries, out)
    print(f"wrote {path} ({len(summaries)} cells)")
    if config.save_replications:
        write_replications(summaries, out)
    reports = build_curve_reports(summaries, config)
    for report in reports.values():
        write_curves(report, out)
    if not args.no_charts:
        from .plotting import render_charts

        for p in render_charts(reports, out):
            logger.info("wrote %s", p)
    _print_optima(reports["spearman"])
    return EXIT_OK


def cmd_curves(args) -> int:
    summaries = read_summaries(args.run_dir)
    config_path = args.config or args.run_dir / RESOLVED_CONFIG_NAME
    config = load_config(config_path) if config_path.exists() else None
    if config is None:
        logger.warning("no configuration found; grouping curves by sigma")
    reports = build_curve_reports(summaries, config, args.metric)
    out = args.out or args.run_dir
    for report in reports.values():
        for p in write_curves(report, out):
            print(f"wrote {p}")
    if "spearman" in reports:
        _print_optima(reports["spearman"])
    return EXIT_OK


def cmd_chart(args) -> int:
    from .plotting import render_charts

    tables = read_curve_tables(args.tables_dir)
    paths = render_charts(tables, args.out or args.tables_dir)
    if not paths:
        print("no curve tables found; nothing to draw")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "validate": cmd_validate, "curves": cmd_curves, "chart": cmd_chart}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateInputError as exc:
        print(f"degenerate statistics: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvalidArgumentError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
