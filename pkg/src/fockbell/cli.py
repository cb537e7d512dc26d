"""Command-line tool: tables and run records for every figure and headline number.

    fockbell ghom dist    --na 4 --nb 4 --t 0.5
    fockbell ghom parity  --na 10 --nb 10 --tmin 0 --tmax 1 --steps 200
    fockbell bell surface --n 20 --steps 101
    fockbell chsh         --n 2 --settings 0.57,0.43,0.06,0.94
    fockbell qcurve       --nmin 2 --nmax 100 --step 2 --emit-c
    fockbell oracle check --max-n 6

Exit codes: 0 success, 1 consistency or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import bell, ghom
from .crosscheck import oracle_suite
from .errors import BudgetError, ConsistencyError, DomainError
from .fock import FockPair, Splitter
from .records import EPOCH, RunRecord, now_timestamp, table_payload


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return x


def _plain(x):
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


class Output:
    """Collects one command's result and renders it as CSV or a RunRecord."""

    def __init__(self, args, command: str, parameters: dict):
        self.args = args
        self.command = command
        self.parameters = {k: _plain(v) for k, v in parameters.items()}

    def record(self, outputs: dict) -> RunRecord:
        stamp = now_timestamp() if self.args.timestamp == "now" else self.args.timestamp
        return RunRecord(self.command, self.parameters, outputs, timestamp=stamp)

    def table(self, columns, rows) -> str:
        rows = [[_plain(v) for v in r] for r in rows]
        if self.args.format == "json":
            return self.record(table_payload(columns, rows)).to_json()
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        writer.writerows([_fmt(v) for v in r] for r in rows)
        return buf.getvalue()


def _common(p: argparse.ArgumentParser, default_format: str = "csv"):
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", default="-", help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--timestamp",
        default=EPOCH,
        help="RunRecord timestamp; 'now' for wall-clock time (breaks byte-identical reruns)",
    )


def _settings(text: str):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad settings {text!r}")
    if len(values) != 4:
        raise argparse.ArgumentTypeError("--settings needs four comma-separated values")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fockbell", description=__doc__.splitlines()[0])
    nouns = parser.add_subparsers(dest="noun", required=True)

    g = nouns.add_parser("ghom", help="generalized Hong-Ou-Mandel")
    gv = g.add_subparsers(dest="verb", required=True)
    p = gv.add_parser("dist", help="outcome distribution P(m1, m2)")
    p.add_argument("--na", type=int, required=True)
    p.add_argument("--nb", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    _common(p)
    p = gv.add_parser("parity", help="parity average versus T")
    p.add_argument("--na", type=int, required=True)
    p.add_argument("--nb", type=int, required=True)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=200)
    _common(p)

    b = nouns.add_parser("bell", help="Bell interferometer")
    bv = b.add_subparsers(dest="verb", required=True)
    p = bv.add_parser("surface", help="<AB> over a (T1, T2) grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, default=101)
    _common(p)

    p = nouns.add_parser("chsh", help="CHSH quantity at fixed or optimized settings")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--settings", type=_settings, help="T1,T2,T1',T2'")
    mode.add_argument("--optimize", action="store_true", help="maximize Q (the default without --settings)")
    p.add_argument("--budget", type=int, default=bell.DEFAULT_BUDGET)
    _common(p, default_format="json")

    p = nouns.add_parser("qcurve", help="optimized Q versus N")
    p.add_argument("--nmin", type=int, default=2)
    p.add_argument("--nmax", type=int, default=100)
    p.add_argument("--step", type=int, default=2)
    p.add_argument("--budget", type=int, default=bell.DEFAULT_BUDGET)
    p.add_argument("--emit-c", action="store_true", help="add canonical c1, c2 columns")
    _common(p)

    o = nouns.add_parser("oracle", help="brute-force verification")
    ov = o.add_subparsers(dest="verb", required=True)
    p = ov.add_parser("check", help="oracle-equivalence suite")
    p.add_argument("--max-n", type=int, default=6)
    _common(p, default_format="json")
    return parser


def _ghom_dist(args, out: Output):
    dist = ghom.outcome_distribution(FockPair(args.na, args.nb), Splitter(args.t))
    return out.table(["m1", "m2", "probability"], [(k[0], k[1], p) for k, p in dist.items()]), 0


def _ghom_parity(args, out: Output):
    if not 0.0 <= args.tmin <= args.tmax <= 1.0 or args.steps < 1:
        raise DomainError("need 0 <= tmin <= tmax <= 1 and steps >= 1")
    count = args.steps + 1 if args.tmax > args.tmin else 1
    table = ghom.parity_scan(FockPair(args.na, args.nb), np.linspace(args.tmin, args.tmax, count))
    return out.table(["T", "parity"], table.tolist()), 0


def _bell_surface(args, out: Output):
    if args.steps < 1:
        raise DomainError("steps must be >= 1")
    bell.parity_correlator(args.n, 0.5, 0.5)  # validates N
    grid = np.linspace(0.0, 1.0, args.steps)
    t1, t2 = np.meshgrid(grid, grid, indexing="ij")
    values = bell.correlator_array(args.n, t1, t2)
    rows = [(a, b, v) for a, b, v in zip(t1.ravel(), t2.ravel(), values.ravel())]
    return out.table(["T1", "T2", "AB"], rows), 0


def _chsh(args, out: Output):
    if args.settings is not None:
        result = bell.chsh_q(args.n, args.settings)
    else:
        result = bell.optimize_chsh(args.n, budget=args.budget, seed=args.seed, threads=args.threads)
    payload = result.to_dict()
    if args.format == "json":
        return out.record(payload).to_json(), 0
    cols = ["N", "Q", "T1", "T2", "T1p", "T2p", "AB", "ABp", "ApB", "ApBp", "evaluations"]
    row = [result.n_total, result.q, *result.settings.as_tuple(), *result.correlators, result.evaluations]
    return out.table(cols, [row]), 0


def _qcurve(args, out: Output):
    if args.nmin > args.nmax or args.step < 2 or args.step % 2 or args.nmin % 2 or args.nmax % 2:
        raise DomainError("need even nmin <= nmax and an even step")
    results = bell.q_vs_n_curve(
        range(args.nmin, args.nmax + 1, args.step), budget=args.budget, seed=args.seed, threads=args.threads
    )
    cols = ["N", "Q", "T1", "T2", "T1p", "T2p"] + (["c1", "c2"] if args.emit_c else [])
    rows = []
    for r in results:
        row = [r.n_total, r.q, *r.settings.as_tuple()]
        if args.emit_c:
            red = r.settings.reduced()
            row += [red.c1, red.c2]
        rows.append(row)
    return out.table(cols, rows), 0


def _oracle_check(args, out: Output):
    report = oracle_suite(args.max_n)
    code = 0 if report["passed"] else 1
    if args.format == "json":
        return out.record(report).to_json(), code
    rows = [
        (name, c["cases"], c["max_residual"], c["threshold"], c["passed"])
        for name, c in report["classes"].items()
    ]
    return out.table(["class", "cases", "max_residual", "threshold", "passed"], rows), code


HANDLERS = {
    ("ghom", "dist"): _ghom_dist,
    ("ghom", "parity"): _ghom_parity,
    ("bell", "surface"): _bell_surface,
    ("chsh", None): _chsh,
    ("qcurve", None): _qcurve,
    ("oracle", "check"): _oracle_check,
}

_SKIP = {"noun", "verb", "format", "out", "timestamp"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verb = getattr(args, "verb", None)
    command = " ".join(x for x in (args.noun, verb) if x)
    params = {k: v for k, v in vars(args).items() if k not in _SKIP}
    out = Output(args, command, params)
    try:
        text, code = HANDLERS[(args.noun, verb)](args, out)
    except (DomainError, BudgetError) as exc:
        parser.error(str(exc))
    except ConsistencyError as exc:
        print(f"fockbell: consistency failure: {exc}", file=sys.stderr)
        return 1
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
