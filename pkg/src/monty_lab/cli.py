"""Command-line front end.

Exit codes: 0 success, 2 verification failure, 3 golden mismatch,
4 protocol violation, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, signaling
from .analysis import SCHEMA, format_fraction
from .game_core import AtOnce, DomainError, ProtocolViolation
from .randomized import (CONIE_POLICIES, MONTE_POLICIES, exact_prob_sequential, simulate,
                         slm_exact)
from .strategy import enumerate_conie, enumerate_monte

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_GOLDEN = 3
EXIT_PROTOCOL = 4
EXIT_USAGE = 64

PUBLISHED_MONTE_COUNT_3 = 6
MONTE_COUNT_NOTE = (
    "direct enumeration of offer tables with y(p) != p gives 8 strategies for 3 doors; "
    "the published count of 6 is not reproduced"
)

SCENARIOS = {
    "slm": ("slm", "uniform"),
    "hold": ("hold", "uniform"),
    "cooperative": ("decode", "f"),
    "decode-random": ("decode", "uniform"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _doors_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated doors, got {text!r}")


def _x_arg(text: str) -> int | None:
    if text == "random":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a door or 'random', got {text!r}")


def _load_signal(path) -> signaling.SignalFunction:
    return signaling.ROTATION_F if path is None else signaling.SignalFunction.load(path)


# -- enumerate -------------------------------------------------------------

def cmd_enumerate(args) -> int:
    if args.design == "sequential":
        raise UsageError("enumeration is only available for at-once designs")
    if args.doors > analysis.MATRIX_MAX_DOORS:
        raise UsageError(f"--doors is limited to {analysis.MATRIX_MAX_DOORS}")
    design = AtOnce(args.doors)
    items = enumerate_conie(design) if args.side == "conie" else enumerate_monte(design)
    labels = [str(s) for s in items]
    discrepancy = args.side == "monte" and design.n == 3

    if args.format == "json":
        obj = {"schema": SCHEMA, "kind": "enumeration", "design": design.name,
               "side": args.side, "count": len(labels), "labels": labels}
        if discrepancy:
            obj["published_count"] = PUBLISHED_MONTE_COUNT_3
            obj["note"] = MONTE_COUNT_NOTE
        _emit_json(obj)
    elif args.format == "csv":
        sys.stdout.write("label\n" + "".join(f"{s}\n" for s in labels))
        if discrepancy:
            print(f"note: {MONTE_COUNT_NOTE}", file=sys.stderr)
    else:
        print(f"{args.side} strategies, {design.name}: count = {len(labels)}")
        for s in labels:
            print(f"  {s}")
        if discrepancy:
            print(f"published count = {PUBLISHED_MONTE_COUNT_3}")
            print(f"note: {MONTE_COUNT_NOTE}")
    return EXIT_OK


# -- matrix ----------------------------------------------------------------

def _matrix_table(m: analysis.WinMatrix) -> str:
    width = max(m.design.n, len(str(m.cols[0])))
    lines = [" " * (m.design.n + 1) + " ".join(f"{str(ms):>{width}}" for ms in m.cols)]
    for i, cs in enumerate(m.rows):
        cells = " ".join(f"{m.cell(i, j).bitstring():>{width}}" for j in range(len(m.cols)))
        lines.append(f"{str(cs):<{m.design.n + 1}}{cells}")
    return "\n".join(lines) + "\n"


def cmd_matrix(args) -> int:
    if args.doors > analysis.MATRIX_MAX_DOORS:
        raise UsageError(f"--doors is limited to {analysis.MATRIX_MAX_DOORS}")
    m = analysis.win_matrix(AtOnce(args.doors))
    if args.format == "csv":
        text = m.to_csv()
    elif args.format == "json":
        text = json.dumps(m.to_json_obj(), indent=2) + "\n"
    else:
        text = _matrix_table(m)
    if args.check_golden:
        with open(args.check_golden, "rb") as fh:
            golden = fh.read()
        if golden != text.encode():
            print(f"golden mismatch: {args.check_golden}", file=sys.stderr)
            return EXIT_GOLDEN
        print(f"golden match: {args.check_golden}", file=sys.stderr)
        return EXIT_OK
    sys.stdout.write(text)
    return EXIT_OK


# -- verify ----------------------------------------------------------------

def signaling_suite(f: signaling.SignalFunction) -> list[analysis.Check]:
    doors = signaling.DOORS
    is_default = f.table == signaling.ROTATION_F.table
    checks = []

    if is_default:
        table = {p: f.encode(p, 1) for p in doors}
        expected = {1: (2, 3), 2: (3, 4), 3: (4, 2), 4: (3, 2)}
        checks.append(analysis.Check(
            "base table", table == expected, "x=1: 1->23, 2->34, 3->42, 4->32",
            [] if table == expected else [str(table)]))

    report = signaling.verify_bijective(f)
    checks.append(analysis.Check("bijective", report.ok,
                                 "reveals avoid p and x, ordered pairs distinct per x",
                                 report.violations))
    if not report.ok:
        return checks

    bad = [f"(p={p}, x={x})" for p in doors for x in doors
           if f.decode(x, *f.encode(p, x)) != p]
    checks.append(analysis.Check("round trip", not bad, "decode(encode(p, x)) = p on 16 pairs", bad))

    lost = []
    for key in signaling.ALL_KEYS:
        g = signaling.family_member(key, f)
        if not signaling.verify_bijective(g):
            lost.append(f"key {key.perm}: not bijective")
            continue
        lost += [f"key {key.perm} (p={p}, x={x})" for p in doors for x in doors
                 if not signaling.cooperative_play(p, x, g).win]
    checks.append(analysis.Check("cooperative play", not lost,
                                 "sure win on 16 pairs for all 24 family members (384 cases)", lost))

    ok = signaling.no_universally_unlucky_door_check(f)
    checks.append(analysis.Check("no unlucky door", ok,
                                 "decoding wins at every prize door for every first guess",
                                 [] if ok else ["some door is lost"]))

    if is_default:
        collisions = signaling.unordered_collisions(f, 1)
        injective = all(signaling.ordered_injective(f, x) for x in doors)
        ok = injective and (1, 4) in collisions
        checks.append(analysis.Check(
            "order carries information", ok,
            f"x=1 unordered collisions {collisions}, ordered pairs injective: {injective}",
            [] if ok else ["expected p=1 and p=4 to share an unordered reveal set"]))

        q = slm_exact(1)
        checks.append(analysis.Check("switch at last minute", q == Fraction(3, 4),
                                     f"exact win probability = {format_fraction(q)}",
                                     [] if q == Fraction(3, 4) else [format_fraction(q)]))
    coop = exact_prob_sequential(signaling.Decoder(f, fallback=None), signaling.FPlayer(f), None)
    checks.append(analysis.Check("cooperative exact", coop == 1,
                                 f"exact win probability = {format_fraction(coop)}",
                                 [] if coop == 1 else [format_fraction(coop)]))
    return checks


def cmd_verify(args) -> int:
    if args.all:
        ns = list(range(3, analysis.MATRIX_MAX_DOORS + 1))
    else:
        if args.doors > analysis.MATRIX_MAX_DOORS:
            raise UsageError(f"--doors is limited to {analysis.MATRIX_MAX_DOORS}")
        ns = [args.doors]
    reports = [analysis.verify_theorem_suite(AtOnce(n)) for n in ns]
    sig = signaling_suite(_load_signal(args.signal_file))
    passed = all(r.passed for r in reports) and all(c.passed for c in sig)

    if args.format == "json":
        _emit_json({"schema": SCHEMA, "kind": "verification", "passed": passed,
                    "at_once": [r.to_dict() for r in reports],
                    "signaling": [c.to_dict() for c in sig]})
    else:
        for r in reports:
            print("\n".join(r.lines()))
        print(f"sequential-4 signaling: {'PASS' if all(c.passed for c in sig) else 'FAIL'}")
        for c in sig:
            print(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
            for e in c.counterexamples:
                print(f"      counterexample: {e}")
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_VERIFY


# -- signal ----------------------------------------------------------------

def cmd_signal(args) -> int:
    f = _load_signal(args.signal_file)
    if args.action == "encode":
        r1, r2 = f.encode(args.p, args.x)
        if args.format == "json":
            _emit_json({"schema": SCHEMA, "kind": "signal-encode", "p": args.p, "x": args.x,
                        "reveals": [r1, r2]})
        else:
            print(f"{r1} {r2}")
    elif args.action == "decode":
        if len(args.r) != 2:
            raise UsageError("--r takes exactly two doors")
        p = f.decode(args.x, *args.r)
        if args.format == "json":
            _emit_json({"schema": SCHEMA, "kind": "signal-decode", "x": args.x,
                        "reveals": args.r, "p": p})
        else:
            print(p)
    elif args.action == "verify":
        report = signaling.verify_bijective(f)
        if args.format == "json":
            _emit_json({"schema": SCHEMA, "kind": "signal-verify", "bijective": report.ok,
                        "violations": report.violations})
        else:
            print("bijective" if report.ok else "NOT bijective")
            for v in report.violations:
                print(f"  {v}")
        return EXIT_OK if report.ok else EXIT_VERIFY
    else:
        if args.key is not None:
            key = signaling.RoundKey(tuple(args.key))
        else:
            key = signaling.round_key(args.round)
        g = signaling.family_member(key, f)
        if args.format == "json":
            _emit_json({"schema": SCHEMA, "kind": "signal-family", "key": list(key.perm),
                        "table": g.to_json_obj()})
        else:
            print(f"key {' '.join(map(str, key.perm))}")
            for x in signaling.DOORS:
                row = "  ".join(f"{p}->{''.join(map(str, g.encode(p, x)))}" for p in signaling.DOORS)
                print(f"x={x}: {row}")
    return EXIT_OK


# -- simulate --------------------------------------------------------------

def cmd_simulate(args) -> int:
    conie_name, monte_name = SCENARIOS[args.scenario]
    if args.conie:
        conie_name = args.conie
    if args.monte:
        monte_name = args.monte
    f = _load_signal(args.signal_file)

    def build(name, table):
        cls = table[name]
        if name in ("decode", "f"):
            return cls(f, rotating=args.rotating)
        return cls()

    conie = build(conie_name, CONIE_POLICIES)
    monte = build(monte_name, MONTE_POLICIES)
    res = simulate(conie, monte, x=args.x, trials=args.trials, seed=args.seed,
                   shards=args.shards, workers=args.workers)
    obj = res.to_json_obj()
    if args.format == "json":
        _emit_json(obj)
    elif args.format == "csv":
        keys = [k for k in obj if k != "schema"]
        sys.stdout.write(",".join(keys) + "\n")
        sys.stdout.write(",".join("" if obj[k] is None else str(obj[k]) for k in keys) + "\n")
    else:
        for k, v in obj.items():
            if k != "schema":
                print(f"{k:>15}: {v}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monty-lab", description="Exhaustive analysis of door games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p, choices=("table", "json", "csv")):
        p.add_argument("--format", choices=choices, default="table")

    p = sub.add_parser("enumerate", help="list every pure strategy of one player")
    p.add_argument("--doors", type=int, default=3)
    p.add_argument("--side", choices=("conie", "monte"), default="conie")
    p.add_argument("--design", choices=("at-once", "sequential"), default="at-once")
    fmt(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("matrix", help="win-set matrix over both strategy spaces")
    p.add_argument("--doors", type=int, default=3)
    p.add_argument("--check-golden", metavar="PATH")
    fmt(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="exhaustive theorem and signaling checks")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--doors", type=int, default=3)
    group.add_argument("--all", action="store_true")
    p.add_argument("--signal-file", metavar="PATH")
    fmt(p, ("table", "json"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("signal", help="four-door sequential signal function")
    p.add_argument("action", choices=("encode", "decode", "verify", "family"))
    p.add_argument("--p", type=int)
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--r", type=_doors_list, help="reveal order, e.g. 3,2")
    p.add_argument("--key", type=_doors_list, help="relabelling permutation, e.g. 2,1,3,4")
    p.add_argument("--round", type=int, default=0)
    p.add_argument("--signal-file", metavar="PATH")
    fmt(p, ("table", "json"))
    p.set_defaults(func=cmd_signal)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run of a sequential scenario")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    p.add_argument("--conie", choices=sorted(CONIE_POLICIES))
    p.add_argument("--monte", choices=sorted(MONTE_POLICIES))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x", type=_x_arg, default=1, help="first guess, or 'random'")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--rotating", action="store_true",
                   help="vary the signal function by round")
    p.add_argument("--signal-file", metavar="PATH")
    fmt(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "signal":
        need = {"encode": ("p",), "decode": ("r",)}.get(args.action, ())
        missing = [f"--{n}" for n in need if getattr(args, n) is None]
        if missing:
            parser.error(f"signal {args.action} requires {', '.join(missing)}")
    try:
        return args.func(args)
    except ProtocolViolation as e:
        print(f"protocol violation: {e}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (UsageError, DomainError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
