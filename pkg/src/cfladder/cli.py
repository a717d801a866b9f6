"""Command-line interface.

Exit codes: 0 success, 1 verification failure or empty sample, 2 usage/input error.
Big integers are written as decimal strings in JSON; indices stay numeric.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import islice

from . import __version__
from .cf_engine import Surd, expand, iter_partial_quotients
from .errors import CubeError, EmptyHistogram
from .ladder import build_ladder, consecutive_pairs, exchange_check, noncrossing_check
from .stats import DEFAULT_CUTOFF, histogram, kuzmin_distance, kuzmin_expected, kuzmin_tail
from .verify import run_verification

EXPAND_COLUMNS = ["n", "b", "p_prev", "q_prev"]
LADDER_COLUMNS = ["n", "k", "r", "s", "t", "b_n", "B_k", "rb_minus_sB"]
VERIFY_COLUMNS = ["check", "scope", "status", "checked", "failures", "detail"]
STATS_COLUMNS = ["k", "count", "empirical", "expected", "deviation"]
FIGURE_RUNG_COLUMNS = ["record", "side", "index", "quotient", "n", "k", "r", "s"]
FIGURE3_COLUMNS = ["ordinal", "n", "k", "n_minus_k"]

# values that are never big integers and stay native numbers in JSON
_NATIVE = {"n", "k", "index", "ordinal", "n_minus_k", "checked", "failures",
           "empirical", "expected", "deviation"}

FIGURE_MODULUS = {1: 2, 2: 6, 3: 2}
FIGURE_DEFAULT_LENGTH = {1: 20, 2: 20, 3: 1000}

EPILOG = f"""\
CSV column order (header row always written):
  expand : {",".join(EXPAND_COLUMNS)}
  ladder : {",".join(LADDER_COLUMNS)}
  verify : {",".join(VERIFY_COLUMNS)}
  stats  : {",".join(STATS_COLUMNS)}  (last row k=">K" is the tail)
  figure : 1,2 -> {",".join(FIGURE_RUNG_COLUMNS)}
           3   -> {",".join(FIGURE3_COLUMNS)}
"""


def _jsonable(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if value is None or key in _NATIVE or isinstance(value, (str, float, bool)):
            out[key] = value
        else:
            out[key] = str(value)
    return out


def emit(rows: list[dict], columns: list[str], fmt: str, meta: dict, out) -> None:
    if fmt == "json":
        doc = {"meta": {**meta, "version": __version__}, "rows": [_jsonable(r) for r in rows]}
        out.write(json.dumps(doc, indent=2))
        out.write("\n")
        return
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="raise")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})


def _fail(message: str, code: int = 2):
    print(f"error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_expand(args, out) -> int:
    exp = expand(Surd(args.m, args.power), args.length)
    rows = [{"n": tr.n, "b": tr.b, "p_prev": tr.p_prev, "q_prev": tr.q_prev}
            for tr in exp.triplets]
    emit(rows, EXPAND_COLUMNS, args.format, _meta(args, power=args.power), out)
    return 0


def _ladder_rows(ladder) -> list[dict]:
    return [{"n": c.n, "k": c.k, "r": c.r, "s": c.s, "t": c.t, "b_n": c.b_n,
             "B_k": c.B_k, "rb_minus_sB": c.bound_value} for c in ladder.connections]


def cmd_ladder(args, out) -> int:
    ladder = build_ladder(args.m, args.length)
    pairs = consecutive_pairs(ladder)
    exchange_ok = sum(exchange_check(a, b) for a, b in pairs)
    meta = _meta(args, connections=len(ladder), consecutive_pairs=len(pairs),
                 exchange_checks_passed=exchange_ok)
    emit(_ladder_rows(ladder), LADDER_COLUMNS, args.format, meta, out)
    print(f"connections: {len(ladder)}", file=sys.stderr)
    print(f"exchange checks passed: {exchange_ok}/{len(pairs)}", file=sys.stderr)
    return 0


def cmd_verify(args, out) -> int:
    report = run_verification(args.m, args.length)
    rows = [{"check": r.name, "scope": r.scope, "status": "pass" if r.passed else "fail",
             "checked": r.checked, "failures": len(r.failures),
             "detail": "; ".join(r.failures[:20])} for r in report.results]
    emit(rows, VERIFY_COLUMNS, args.format, _meta(args, passed=report.passed), out)
    for r in report.failures:
        print(f"FAIL {r.name} [{r.scope}]: {'; '.join(r.failures[:5])}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_stats(args, out) -> int:
    quotients = islice(iter_partial_quotients(Surd(args.m, args.power)), 1, args.length + 1)
    hist = histogram(quotients, args.cutoff)
    try:
        comparison = kuzmin_distance(hist)
    except EmptyHistogram:
        return _fail("empty sample", 1)
    total = hist.total
    rows = []
    for k in range(1, args.cutoff + 1):
        count = hist.counts.get(k, 0)
        rows.append({"k": k, "count": count, "empirical": count / total,
                     "expected": kuzmin_expected(k), "deviation": comparison.deviations[k]})
    rows.append({"k": f">{args.cutoff}", "count": hist.tail, "empirical": hist.tail / total,
                 "expected": kuzmin_tail(args.cutoff), "deviation": comparison.tail_deviation})
    meta = _meta(args, power=args.power, cutoff=args.cutoff, total=total,
                 max_deviation=comparison.max_deviation, tv_distance=comparison.tv_distance)
    emit(rows, STATS_COLUMNS, args.format, meta, out)
    print(f"sample size: {total}", file=sys.stderr)
    print(f"max deviation: {comparison.max_deviation:.6f}", file=sys.stderr)
    print(f"total variation distance: {comparison.tv_distance:.6f}", file=sys.stderr)
    return 0


def figure_rows(which: int, length: int) -> list[dict]:
    ladder = build_ladder(FIGURE_MODULUS[which], length)
    if which == 3:
        ordered = sorted(ladder.connections, key=lambda c: c.n)
        if not noncrossing_check(ladder):
            raise AssertionError("ladder connections cross")
        return [{"ordinal": i, "n": c.n, "k": c.k, "n_minus_k": c.n - c.k}
                for i, c in enumerate(ordered, start=1)]
    rows = []
    for side, exp in (("xi", ladder.xi_exp), ("eta", ladder.eta_exp)):
        rows.extend({"record": "rung", "side": side, "index": tr.n, "quotient": tr.b}
                    for tr in exp.triplets)
    rows.extend({"record": "connection", "n": c.n, "k": c.k, "r": c.r, "s": c.s}
                for c in ladder.connections)
    return rows


def cmd_figure(args, out) -> int:
    length = args.length if args.length is not None else FIGURE_DEFAULT_LENGTH[args.which]
    rows = figure_rows(args.which, length)
    columns = FIGURE3_COLUMNS if args.which == 3 else FIGURE_RUNG_COLUMNS
    meta = {"figure": args.which, "m": FIGURE_MODULUS[args.which], "length": length}
    emit(rows, columns, args.format, meta, out)
    return 0


def _meta(args, **extra) -> dict:
    return {"m": args.m, "length": args.length, **extra}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfladder",
        description="Continued-fraction ladders of (cbrt(m), cbrt(m^2)) in exact arithmetic.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, m=True, length_default=None, length_required=True):
        if m:
            p.add_argument("--m", type=int, required=True, help="noncube integer >= 2")
        p.add_argument("--length", type=_nonneg, required=length_required and length_default is None,
                       default=length_default, help="last triplet index N")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("expand", help="dump triplets (n, b_n, p_{n-1}, q_{n-1})", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.add_argument("--power", type=int, choices=[1, 2], default=1)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("ladder", help="list connections between the two expansions",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("verify", help="run every identity and ladder check", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="compare partial quotients with the Kuzmin law",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.add_argument("--power", type=int, choices=[1, 2], default=1)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("figure", help="export the data behind figures 1-3", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p, m=False, length_required=False)
    p.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cutoff", 1) < 1:
        parser.error("--cutoff must be >= 1")
    buffer = io.StringIO()
    try:
        code = args.func(args, buffer)
    except CubeError as exc:
        return _fail(str(exc))
    if code == 0 or args.command == "verify":
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buffer.getvalue())
        else:
            sys.stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
