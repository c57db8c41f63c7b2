"""
trace / dn / zeta / count 命令
"""

import argparse

from ...cli import app, option
from ..cohomology import presentation
from ..dsl_parser import parse_endo, pretty_print
from ..dynamics import d_sequence, graded_trace, lefschetz_point_count, trace_point_count, zeta_series
from ..errors import OracleUnavailable
from ..oracle import oracle_point_count
from ..report import Report, num, table
from .cohomology import EXPR, parse_valid

ENDO = option("--endo", default="scalar 1",
              help='Endomorphism, e.g. "frobenius(5)" or "block(ab.* : charpoly t^2+3t+5), scalar 2"')
N = option("--n", type=int, default=8, help="Largest iterate n for d_n")


def _action(args: argparse.Namespace):
    expr = parse_valid(args.expr)
    pres = presentation(expr)
    return expr, pres, parse_endo(args.endo, pres)


@app.command("trace", "Graded trace Σ(-1)^r tr(σ*|H^r) = ∏ det(I - M)", EXPR, ENDO)
def trace_command(args: argparse.Namespace) -> Report:
    expr, pres, act = _action(args)
    return Report(
        command="trace",
        expression=pretty_print(expr),
        values={"endo": args.endo, "trace": num(graded_trace(pres, act))},
    )


@app.command("dn", "Trace sequence d_n = tr((σ^n)*)", EXPR, ENDO, N)
def dn_command(args: argparse.Namespace) -> Report:
    expr, pres, act = _action(args)
    seq = d_sequence(pres, act, args.n)
    return Report(
        command="dn",
        expression=pretty_print(expr),
        values={"endo": args.endo, "n": str(args.n)},
        tables=[table("trace sequence", ["n", "d_n"], [(n, seq[n]) for n in range(1, len(seq) + 1)])],
    )


@app.command(
    "zeta", "Truncated zeta series exp(Σ d_n t^n / n)", EXPR, ENDO, N,
    option("--order", type=int, help="Truncation order (defaults to --n)"),
)
def zeta_command(args: argparse.Namespace) -> Report:
    expr, pres, act = _action(args)
    order = args.order or args.n
    seq = d_sequence(pres, act, max(args.n, order))
    series = zeta_series(seq, order)
    return Report(
        command="zeta",
        expression=pretty_print(expr),
        values={"endo": args.endo, "order": str(order)},
        tables=[table("zeta coefficients", ["k", "z_k"], enumerate(series.coeffs))],
    )


@app.command(
    "count", "#G(F_q) from the Lefschetz formula", EXPR,
    option("--q", type=int, required=True, help="Prime field size"),
    option("--check-oracle", action="store_true", help="Compare against brute-force enumeration"),
)
def count_command(args: argparse.Namespace) -> Report:
    expr = parse_valid(args.expr)
    lefschetz = lefschetz_point_count(expr, args.q)
    via_trace = trace_point_count(expr, args.q)
    values = {"q": str(args.q), "lefschetz": num(lefschetz), "trace_formula": num(via_trace)}
    witness = None
    agree = lefschetz == via_trace
    if args.check_oracle:
        try:
            brute = oracle_point_count(expr, args.q)
            values["oracle"] = num(brute)
            agree = agree and brute == lefschetz
        except OracleUnavailable as exc:
            values["oracle"] = f"unavailable ({exc.message})"
    if not agree:
        witness = dict(values)
    return Report(
        command="count",
        expression=pretty_print(expr),
        status="ok" if agree else "failed",
        values=values,
        witness=witness,
    )
