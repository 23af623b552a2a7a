"""Command line front end: ``zeckauto run|describe|export|enumerate|paperbench``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import automata as au
from .relations import DEFAULT_BOUND
from .script import ScriptError, Session, bundled_script, run_script


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"zeckauto: {name} must be an integer, got {raw!r}")


def _out_dir(args):
    out = args.out or os.environ.get("ZECKAUTO_OUT") or "zeckauto-out"
    return Path(out)


def _session(args) -> Session:
    """Session saved by a previous ``run`` (or the bundled scripts when ``--script`` names one)."""
    kw = {"adder_bound": args.adder_bound, "enum_cap": args.enum_cap}
    if getattr(args, "script", None):
        path = Path(args.script)
        if path.exists():
            return run_script(path, **kw)
        s = Session(**kw)
        s.run(bundled_script(args.script))
        return s
    out = _out_dir(args)
    if not (out / "manifest.json").exists():
        raise ScriptError(f"no manifest in {out}; run a script first or pass --script")
    return Session.load(out, **kw)


def cmd_run(args):
    out = _out_dir(args)
    path = Path(args.script)
    if path.exists():
        s = run_script(path, out_dir=out, adder_bound=args.adder_bound, enum_cap=args.enum_cap)
    else:
        s = Session(adder_bound=args.adder_bound, enum_cap=args.enum_cap, out_dir=out)
        try:
            text = bundled_script(args.script)
        except FileNotFoundError:
            raise ScriptError(f"cannot read script {args.script}: no such file")
        s.run(text)
    for name in s.names():
        print(f"{name}: {s.describe(name)}")
    print(f"wrote {len(s.names())} entries to {out}")
    return 0


def cmd_describe(args):
    s = _session(args)
    names = args.names or s.names()
    for name in names:
        print(f"{name}: {s.describe(name)}")
    return 0


def cmd_export(args):
    s = _session(args)
    if args.name in s.counters:
        print(s.counters[args.name].to_json())
        return 0
    a = s.automaton(args.name)
    print(a.to_dot(args.name) if args.dot else a.to_json())
    return 0


def cmd_enumerate(args):
    s = _session(args)
    a = s.automaton(args.name)
    if a.k != 1:
        raise ScriptError(f"{args.name!r} has {a.k} tracks; enumerate needs a set (one track)")
    vals = au.enumerate_values(a, args.limit)
    if args.complement:
        have = set(vals)
        vals = [n for n in range(args.limit + 1) if n not in have]
    print(" ".join(map(str, vals)))
    return 0


def cmd_paperbench(args):
    from . import bench

    only = set(args.only) if args.only else None
    report = bench.run(adder_bound=args.adder_bound, only=only)
    print(json.dumps(report, indent=1) if args.json else bench.format_report(report))
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeckauto", description="Automata for Fibonacci/Tribonacci additive number theory.")
    p.add_argument("--out", help="output directory (default $ZECKAUTO_OUT or ./zeckauto-out)")
    p.add_argument("--adder-bound", type=int, default=_env_int("ZECKAUTO_ADDER_BOUND", DEFAULT_BOUND),
                   help="carry bound for the adder construction (default $ZECKAUTO_ADDER_BOUND or %(default)s)")
    p.add_argument("--enum-cap", type=int, default=_env_int("ZECKAUTO_ENUM_CAP", 10_000),
                   help="search cap used when describing sets")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a command script (a path, or 'wythoff' / 'tribonacci')")
    r.add_argument("script")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("describe", help="describe saved automata and counters")
    d.add_argument("names", nargs="*")
    d.add_argument("--script", help="run this script instead of loading --out")
    d.set_defaults(func=cmd_describe)

    e = sub.add_parser("export", help="print an automaton as DOT or JSON")
    e.add_argument("name")
    fmt = e.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true", help="(default)")
    e.add_argument("--script")
    e.set_defaults(func=cmd_export)

    n = sub.add_parser("enumerate", help="list the members of a set up to a limit")
    n.add_argument("name")
    n.add_argument("--limit", type=int, default=100)
    n.add_argument("--complement", action="store_true", help="list the non-members instead")
    n.add_argument("--script")
    n.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("paperbench", help="check every reproduced result against its oracle")
    b.add_argument("--json", action="store_true")
    b.add_argument("--only", type=int, nargs="+", metavar="ID")
    b.set_defaults(func=cmd_paperbench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ScriptError as e:
        print(f"zeckauto: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
