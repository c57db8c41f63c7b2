"""
cohomology / poincare 命令

提供:
- cohomology EXPR: 生成元表 (标签、次数、Frobenius 权)、Poincaré 多项式、h^1、上同调维数
- poincare EXPR: Betti 数表
"""

import argparse

from ...cli import app, option
from ..cohomology import (
    AbelianSlot,
    Generator,
    LinearWeight,
    cohomological_dimension,
    euler_characteristic,
    h1,
    poincare,
    presentation,
)
from ..core_model import dim, ensure_valid
from ..dsl_parser import parse_expr, pretty_print
from ..report import Report, nums, table

EXPR = option("expr", metavar="EXPR", help='Group expression, e.g. "GL(3)" or "ext(torus(2), abelian(1))"')


def _weight(g: Generator) -> str:
    if isinstance(g.frobenius, LinearWeight):
        return "q" if g.frobenius.d == 1 else f"q^{g.frobenius.d}"
    if isinstance(g.frobenius, AbelianSlot):
        return f"weil({g.frobenius.node})"
    return "-"


def parse_valid(text: str):
    return ensure_valid(parse_expr(text))


@app.command("cohomology", "Exterior-algebra presentation of H*(G)", EXPR)
def cohomology_command(args: argparse.Namespace) -> Report:
    expr = parse_valid(args.expr)
    pres = presentation(expr)
    poly = poincare(pres)
    return Report(
        command="cohomology",
        expression=pretty_print(expr),
        values={
            "dim": str(dim(expr)),
            "generators": str(len(pres)),
            "poincare": str(poly),
            "poincare_coefficients": " ".join(nums(poly.coeffs)),
            "h1": str(h1(pres)),
            "cohomological_dimension": str(cohomological_dimension(pres)),
            "euler_characteristic": str(euler_characteristic(pres)),
        },
        tables=[table(
            "generators", ["label", "degree", "weight"],
            [[g.label, g.degree, _weight(g)] for g in pres.generators],
        )],
    )


@app.command("poincare", "Betti numbers of H*(G)", EXPR)
def poincare_command(args: argparse.Namespace) -> Report:
    expr = parse_valid(args.expr)
    poly = poincare(presentation(expr))
    return Report(
        command="poincare",
        expression=pretty_print(expr),
        values={"poincare": str(poly), "poincare_coefficients": " ".join(nums(poly.coeffs))},
        tables=[table("betti numbers", ["r", "dim H^r"], enumerate(poly.coeffs))],
    )
