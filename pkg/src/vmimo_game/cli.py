"""Command line entry point.

    vmimo-game run <spec>... [--out DIR] [--set key=value ...] [--seed N] [--jobs N]
    vmimo-game validate <spec>...
    vmimo-game oracle <spec>... [--set key=value ...]
    vmimo-game montecarlo [--seed N] [--pairs N] [--frames N]
    vmimo-game list

``<spec>`` is a YAML spec path, a JSON sidecar written by ``run``, the name
of a bundled spec, or ``all`` for every bundled spec.

Exit codes: 0 success, 1 configuration error, 2 domain error or failed check.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import parse_override
from .errors import ConfigError, DomainError
from .experiments import builtin_specs, load_spec, run_experiment, write_table

log = logging.getLogger("vmimo_game")


def _specs(names, overrides):
    expanded = []
    for n in names:
        expanded.extend(builtin_specs() if n == "all" else [n])
    return [load_spec(n, overrides) for n in expanded]


def _overrides(args):
    return [parse_override(s) for s in args.set or []]


def cmd_run(args):
    out = Path(args.out)
    for spec in _specs(args.spec, _overrides(args)):
        table = run_experiment(spec, jobs=args.jobs)
        if args.seed is not None:
            table.metadata["seed"] = args.seed
        path = write_table(table, out / spec.output, timestamp=not args.no_timestamp)
        print(f"{spec.name}: {len(table)} rows -> {path}")
    return 0


def cmd_validate(args):
    for spec in _specs(args.spec, _overrides(args)):
        labels = ", ".join(spec.configs)
        sweep = spec.sweep.as_dict() if spec.sweep else "-"
        print(f"{spec.name}: ok (kind={spec.kind}, configs=[{labels}], sweep={sweep})")
    return 0


def _report(checks):
    failed = 0
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
        failed += not c.passed
    return failed


def cmd_oracle(args):
    from .oracle import run_checks

    failed = 0
    for spec in _specs(args.spec, _overrides(args)):
        print(f"[{spec.name}]")
        failed += _report(run_checks(spec, run_experiment(spec)))
    return 2 if failed else 0


def cmd_montecarlo(args):
    from .oracle import frame_success_montecarlo

    seed = 0 if args.seed is None else args.seed
    failed = _report(frame_success_montecarlo(args.pairs, args.frames, seed))
    return 2 if failed else 0


def cmd_list(args):
    for name in builtin_specs():
        print(name)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="vmimo-game", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_specs(sp):
        sp.add_argument("spec", nargs="+")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config or spec value (dotted path)")

    sp = sub.add_parser("run", help="run experiments and write CSV files")
    with_specs(sp)
    sp.add_argument("--out", default="results")
    sp.add_argument("--seed", type=int, default=None,
                    help="recorded in metadata; only the Monte Carlo check draws randoms")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--no-timestamp", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("validate", help="check specs without running them")
    with_specs(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("oracle", help="run independent cross-checks")
    with_specs(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("montecarlo", help="simulate frame success against closed form")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--pairs", type=int, default=20)
    sp.add_argument("--frames", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("list", help="list bundled experiment specs")
    sp.set_defaults(func=cmd_list)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
