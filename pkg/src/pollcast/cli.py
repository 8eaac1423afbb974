"""Command-line entry point.

Subcommands::

    pollcast pool       pooled sample for a date
    pollcast poe        probabilities of events (one date or --series)
    pollcast densities  KDE grids of the statistic behind each event

Exit codes: 0 success, 1 usage or parse error, 2 no poll data,
3 estimation failure.
"""

from __future__ import annotations

import argparse
import datetime as dt
import logging
import sys
from pathlib import Path

from . import report
from .config import ElectionConfig
from .errors import (
    ConfigurationError,
    EstimationError,
    EventParseError,
    NoPollsError,
    PollParseError,
)
from .events import density_summary, parse_event
from .nowcast import nowcast
from .polls import publication_dates, read_polls
from .posterior import SimulationConfig

log = logging.getLogger("pollcast")

EXIT_OK, EXIT_USAGE, EXIT_NO_DATA, EXIT_ESTIMATION = 0, 1, 2, 3
FORMATS = ("json", "csv", "draws")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _formats(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return items


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="election configuration (JSON)")
    common.add_argument("--polls", required=True, type=Path, help="poll file (CSV or JSON)")
    common.add_argument("--as-of", type=_date, help="evaluation date (default: latest poll)")
    common.add_argument("--window-days", type=int, help="override pooling window")
    common.add_argument("--rho", type=float, help="override inter-agency correlation")
    common.add_argument("--out-dir", type=Path, help="write files here instead of stdout")

    sims = argparse.ArgumentParser(add_help=False)
    sims.add_argument("--event", action="append", required=True, dest="events",
                      help="event expression, repeatable (e.g. majority:union+fdp)")
    sims.add_argument("--series", action="store_true",
                      help="evaluate at every distinct poll publication date")
    sims.add_argument("--n-sim", type=int, default=10_000)
    sims.add_argument("--seed", type=int, default=0)
    sims.add_argument("--workers", type=int, default=1, help="threads used for simulation")
    sims.add_argument("--format", type=_formats, default=None,
                      help="comma list of json,csv,draws")

    parser = _Parser(prog="pollcast", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("pool", parents=[common], help="show the pooled sample")
    sub.add_parser("poe", parents=[common, sims], help="estimate event probabilities")
    sub.add_parser("densities", parents=[common, sims], help="export density grids")
    return parser


def _slug(event) -> str:
    return str(event).replace(":", "_").replace("+", "-")


def _emit(args, name: str, text: str) -> None:
    if args.out_dir is None:
        sys.stdout.write(text)
        return
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / name).write_text(text, encoding="utf-8")
    log.info("wrote %s", args.out_dir / name)


def _load(args):
    config = ElectionConfig.load(args.config)
    overrides = {}
    if args.window_days is not None:
        overrides["window_days"] = args.window_days
    if args.rho is not None:
        overrides["rho"] = args.rho
    if overrides:
        config = config.with_pooling(**overrides)
    polls = read_polls(args.polls, config)
    if not polls:
        raise NoPollsError(f"{args.polls}: no polls")
    return config, polls


def _dates(args, polls):
    if getattr(args, "series", False):
        dates = publication_dates(polls)
        if args.as_of is not None:
            dates = [d for d in dates if d <= args.as_of]
        return dates
    return [args.as_of or max(p.published for p in polls)]


def cmd_pool(args) -> int:
    from .polls import pool_polls

    config, polls = _load(args)
    pooled = pool_polls(polls, args.as_of, config.pooling)
    _emit(args, f"pool_{pooled.as_of.isoformat()}.json", report.dumps(report.pooled_to_dict(pooled)))
    return EXIT_OK


def _sim_config(args) -> SimulationConfig:
    try:
        return SimulationConfig(args.n_sim, args.seed, args.workers)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None


def cmd_poe(args) -> int:
    config, polls = _load(args)
    events = [parse_event(e, config.party_ids) for e in args.events]
    sim = _sim_config(args)
    formats = args.format or (["csv"] if args.series else ["json"])
    series_rows = []
    stdout_reports = []
    for day in _dates(args, polls):
        cast = nowcast(polls, config, events, day, sim)
        tag = day.isoformat()
        series_rows.extend(cast.series_rows(config))
        if "json" in formats:
            for result in cast.results:
                doc = report.poe_report(result, cast.pooled)
                if args.out_dir is None:
                    stdout_reports.append(doc)
                else:
                    _emit(args, f"poe_{_slug(result.event)}_{tag}.json", report.dumps(doc))
        if "draws" in formats:
            _emit(args, f"draws_{tag}.csv", report.draws_csv(cast.run.shares, cast.run.party_ids))
    if stdout_reports:
        payload = stdout_reports[0] if len(stdout_reports) == 1 else stdout_reports
        sys.stdout.write(report.dumps(payload))
    if "csv" in formats:
        name = "series.csv" if args.series else f"poe_{series_rows[0]['as_of']}.csv"
        _emit(args, name, report.series_csv(series_rows))
    return EXIT_OK


def cmd_densities(args) -> int:
    config, polls = _load(args)
    events = [parse_event(e, config.party_ids) for e in args.events]
    sim = _sim_config(args)
    for day in _dates(args, polls):
        cast = nowcast(polls, config, events, day, sim)
        for event in events:
            summary = density_summary(event, cast.run)
            _emit(args, f"density_{_slug(event)}_{day.isoformat()}.csv", report.density_csv(summary))
    return EXIT_OK


COMMANDS = {"pool": cmd_pool, "poe": cmd_poe, "densities": cmd_densities}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NoPollsError as exc:
        print(f"pollcast: no data: {exc}", file=sys.stderr)
        return EXIT_NO_DATA
    except EstimationError as exc:
        print(f"pollcast: estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except (ConfigurationError, PollParseError, EventParseError, ValueError, OSError) as exc:
        print(f"pollcast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
