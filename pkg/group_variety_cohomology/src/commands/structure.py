"""structure 命令: 线性部分 / 阿贝尔部分以及线性部分的幂幺根、环面根与半单部分"""

import argparse

from ...cli import app
from ..cohomology import poincare, presentation
from ..core_model import dim, is_abelian_variety, is_linear, is_reductive, is_semisimple, structure_layers
from ..dsl_parser import pretty_print
from ..report import Report, num, table
from .cohomology import EXPR, parse_valid


@app.command("structure", "Structural layers of G up to isogeny", EXPR)
def structure_command(args: argparse.Namespace) -> Report:
    expr = parse_valid(args.expr)
    layers = structure_layers(expr)
    rows = [
        [name, pretty_print(layer), dim(layer), str(poincare(presentation(layer)))]
        for name, layer in layers.as_dict().items()
    ]
    return Report(
        command="structure",
        expression=pretty_print(expr),
        values={
            "dim": num(dim(expr)),
            "linear": num(is_linear(expr)),
            "reductive": num(is_reductive(expr)),
            "semisimple": num(is_semisimple(expr)),
            "abelian_variety": num(is_abelian_variety(expr)),
        },
        tables=[table("layers", ["layer", "expression", "dim", "poincare"], rows)],
    )
