"""Command-line entry point.

Subcommands: simulate (scenario -> record log + manifest), ingest (validate
a log), report (attendance for a date), registry (add/list/remove), link
(read-range table over a parameter grid).  Exit codes: 0 success, 1
validation or parse failure, 2 usage error.  Diagnostics go to stderr only.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, FramingError, RecordParseError
from .identity import Employee, EmployeeRegistry, attendance_report, load_registry, save_registry
from .records import encode_record, format_date, load_log, parse_date
from .rflink import LinkParams, Medium, MediumKind, read_range
from .scenario import load_scenario
from .simulation import run as run_simulation
from .singulation import DEFAULT_TAG_WIDTH, TagId


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    config = load_scenario(args.scenario)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    if args.dedup_window is not None:
        config = dataclasses.replace(config, dedup_window=args.dedup_window)
    records, manifest = run_simulation(config)
    _write_text(args.out, "".join(encode_record(r) + "\n" for r in records))
    manifest_path = args.manifest if args.manifest else args.out + ".manifest"
    _write_text(manifest_path, manifest.render())
    print(
        f"wrote {len(records)} record(s) to {args.out}; manifest in {manifest_path}",
        file=sys.stderr,
    )
    return 0


def cmd_ingest(args) -> int:
    records = load_log(args.log)
    tags = sorted({r.tag.value for r in records})
    dates = sorted({r.date for r in records})
    lines = [
        f"records: {len(records)}",
        f"distinct tags: {len(tags)}",
    ]
    if records:
        lines.append(f"tags: {' '.join(str(t) for t in tags)}")
        lines.append(f"dates: {' '.join(format_date(d) for d in dates)}")
        for access in ("pass", "deny"):
            n = sum(1 for r in records if r.access.value == access)
            lines.append(f"{access}: {n}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_report(args) -> int:
    date = parse_date(args.date)
    if date is None:
        raise ConfigurationError(f"invalid date {args.date!r} (expected D/M/YYYY)")
    records = load_log(args.log)
    registry = load_registry(args.registry)
    report = attendance_report(date, records, registry)
    text = report.render_csv() if args.format == "csv" else report.render_text()
    _emit(args, text)
    return 0


def cmd_registry(args) -> int:
    path = Path(args.registry)
    if args.action == "add":
        registry = load_registry(path) if path.exists() else EmployeeRegistry()
        registry.add(Employee(TagId(args.tag, DEFAULT_TAG_WIDTH), args.name, args.building))
        save_registry(path, registry)
        print(f"added tag {args.tag}", file=sys.stderr)
    elif args.action == "remove":
        registry = load_registry(path)
        removed = registry.remove(args.tag)
        save_registry(path, registry)
        print(f"removed tag {removed.tag.value} ({removed.name})", file=sys.stderr)
    else:  # list
        registry = load_registry(path)
        for employee in registry:
            print(f"{employee.tag.value} {employee.name} {employee.building}")
    return 0


def _floats(raw: str):
    return [float(p) for p in raw.split(",") if p.strip()]


def cmd_link(args) -> int:
    media = []
    for name in args.medium.split(","):
        kind = MediumKind(name.strip())
        media.append(Medium.of(kind, None if args.attenuation is None else args.attenuation))
    rows = []
    for tx_power in _floats(args.tx_power):
        for gain in _floats(args.gain):
            for medium in media:
                params = LinkParams(
                    tx_power=tx_power,
                    antenna_gain=gain,
                    tag_power_threshold=args.tag_threshold,
                    backscatter_detect_threshold=args.detect_threshold,
                )
                rows.append((tx_power, gain, medium, read_range(params, medium)))
    header = ("tx_power", "gain", "medium", "attenuation", "range_m")
    if args.format == "csv":
        lines = [",".join(header)]
        for tx_power, gain, medium, rng in rows:
            lines.append(
                f"{tx_power!r},{gain!r},{medium.kind.value},"
                f"{medium.attenuation_factor!r},{rng:.6f}"
            )
    else:
        lines = [f"{header[0]:>10} {header[1]:>8} {header[2]:>16} {header[3]:>12} {header[4]:>12}"]
        for tx_power, gain, medium, rng in rows:
            lines.append(
                f"{tx_power!r:>10} {gain!r:>8} {medium.kind.value:>16} "
                f"{medium.attenuation_factor!r:>12} {rng:>12.6f}"
            )
    _emit(args, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfidsim",
        description="RFID access-control simulation, log validation and attendance reporting",
    )
    parser.add_argument("--version", action="version", version=f"rfidsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario file into a record log + manifest")
    p.add_argument("scenario", help="scenario file path")
    p.add_argument("--out", required=True, help="record log output path")
    p.add_argument("--manifest", help="manifest output path (default: <out>.manifest)")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--dedup-window", type=float, help="override the dedup window (seconds)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ingest", help="validate a record log and print a summary")
    p.add_argument("log", help="record log path")
    p.add_argument("--out", help="write the summary to a file instead of stdout")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("report", help="attendance report for one date")
    p.add_argument("log", help="record log path")
    p.add_argument("registry", help="registry csv path")
    p.add_argument("date", help="date as D/M/YYYY, e.g. 9/2/2012")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="write the report to a file instead of stdout")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("registry", help="manage the employee registry file")
    reg_sub = p.add_subparsers(dest="action", required=True)
    pa = reg_sub.add_parser("add", help="add one employee (creates the file if missing)")
    pa.add_argument("registry")
    pa.add_argument("tag", type=int)
    pa.add_argument("name")
    pa.add_argument("building")
    pl = reg_sub.add_parser("list", help="list employees, ascending tag")
    pl.add_argument("registry")
    pr = reg_sub.add_parser("remove", help="remove one employee by tag")
    pr.add_argument("registry")
    pr.add_argument("tag", type=int)
    p.set_defaults(func=cmd_registry)

    p = sub.add_parser("link", help="read-range table over a parameter grid")
    p.add_argument("--tx-power", default="0.5,1.0,2.0", help="comma-separated watts")
    p.add_argument("--gain", default="1.0,4.0", help="comma-separated antenna gains")
    p.add_argument("--medium", default="free_space,water_adjacent,metal_adjacent")
    p.add_argument("--attenuation", type=float, help="override the medium attenuation factor")
    p.add_argument("--tag-threshold", type=float, default=0.05)
    p.add_argument("--detect-threshold", type=float, default=0.0025)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="write the table to a file instead of stdout")
    p.set_defaults(func=cmd_link)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, RecordParseError, FramingError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def run_cli() -> None:
    sys.exit(main())
