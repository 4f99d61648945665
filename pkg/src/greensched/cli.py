"""Operator CLI. Offline subcommands reuse the exact service code paths
(AppCore) so CLI and API answers are identical.

Exit codes: 0 ok, 1 usage, 2 integrity failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .config import load_config
from .core import AppCore, compare_scenarios
from .errors import GreenschedError, IntegrityError
from .ledger import Member, verify_ledger_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, doc: dict, human: str):
    if args.json:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


def cmd_serve(args):
    import uvicorn

    from .service import create_app
    cfg = load_config(args.config)
    uvicorn.run(create_app(cfg), host="127.0.0.1", port=cfg.listen_port)
    return EXIT_OK


def cmd_ingest(args):
    core = AppCore(load_config(args.config))
    with open(args.csv, "rb") as fh:
        days = core.ingest_forecast(fh.read())
    doc = {"days": [{"date": d, "digest": g} for d, g in days]}
    human = "\n".join(f"{d}  {g}" for d, g in days)
    _emit(args, doc, human)
    return EXIT_OK


def cmd_schedule(args):
    core = AppCore(load_config(args.config))
    schedule, extras = core.create_schedule(args.building, args.date,
                                            args.temp, include_baseline=True)
    increase = extras.get("re_share_increase", 0.0)
    doc = {"building_id": schedule.building_id, "date": args.date,
           "slots": schedule.slot_string(), "ehp_hours": schedule.ehp_hours,
           "re_share_increase": increase,
           "forecast_digest": schedule.forecast_digest}
    human = (f"{schedule.slot_string()}\n"
             f"ehp_hours: {schedule.ehp_hours}\n"
             f"predicted increase: {increase * 100:.2f}%")
    _emit(args, doc, human)
    return EXIT_OK


def cmd_verify_ledger(args):
    cfg = load_config(args.config)
    member = Member(cfg.member_id, cfg.member_key.encode())
    report = verify_ledger_file(cfg.ledger_path, [member])
    doc = report.to_doc()
    if report.intact:
        _emit(args, doc, f"intact (state root {report.replay_root})")
        return EXIT_OK
    _emit(args, doc, f"CORRUPTED at height {report.height}: {report.detail}")
    return EXIT_INTEGRITY


def cmd_compare(args):
    cfg = load_config(args.config)
    paths = sorted(glob.glob(os.path.join(args.scenarios, "*.csv")))
    if not paths:
        print(f"error: no .csv fixtures in {args.scenarios}", file=sys.stderr)
        return EXIT_USAGE
    rows = compare_scenarios(paths, cfg.scheduler, args.temp, args.blc)
    if args.json:
        print(json.dumps({"rows": rows}, sort_keys=True,
                         separators=(",", ":")))
        return EXIT_OK
    header = (f"{'scenario':<24} {'date':<12} {'k':>2} "
              f"{'baseline':>10} {'scheduled':>10} {'increase':>9}")
    print(header)
    print("-" * len(header))
    for r in rows:
        print(f"{r['scenario']:<24} {r['date']:<12} {r['ehp_hours']:>2} "
              f"{r['baseline_share']:>10.6f} {r['scheduled_share']:>10.6f} "
              f"{r['increase'] * 100:>8.2f}%")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="greensched")
    parser.add_argument("--config", default=None,
                        help="key=value config file (GLS_* env overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("serve", cmd_serve, help="run the HTTP service")

    p = add("ingest", cmd_ingest, help="ingest a forecast CSV")
    p.add_argument("csv")

    p = add("schedule", cmd_schedule, help="compute and record a schedule")
    p.add_argument("--building", required=True)
    p.add_argument("--date", required=True)
    p.add_argument("--temp", type=float, required=True,
                   help="current outdoor temperature, degC")

    add("verify-ledger", cmd_verify_ledger, help="check ledger integrity")

    p = add("compare", cmd_compare,
            help="baseline vs scheduled share per scenario fixture")
    p.add_argument("--scenarios", required=True,
                   help="directory of forecast CSV fixtures")
    p.add_argument("--temp", type=float, default=10.0)
    p.add_argument("--blc", type=float, default=0.6)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except GreenschedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
