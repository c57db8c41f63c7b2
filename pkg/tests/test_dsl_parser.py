from fractions import Fraction

import pytest

from group_variety_cohomology.src.cohomology import presentation
from group_variety_cohomology.src.commands.verify import random_tree
from group_variety_cohomology.src.core_model import (
    GL,
    AbelianVariety,
    DynkinType,
    Extension,
    Isogenous,
    Product,
    SimplyConnectedSimple,
    Torus,
    Trivial,
    Unipotent,
    normalize,
    validate,
)
from group_variety_cohomology.src.dsl_parser import (
    format_intpoly,
    match_labels,
    parse_endo,
    parse_expr,
    parse_intpoly,
    pretty_print,
)
from group_variety_cohomology.src.dynamics import IntCharPoly, graded_trace
from group_variety_cohomology.src.errors import DslSyntaxError, ShapeMismatch, UnknownLabel


class TestParseExpr:
    def test_extension_with_charpoly(self):
        expr = parse_expr("ext(torus(2), abelian(1; t^2+3t+5))")
        assert expr == Extension(Torus(2), AbelianVariety(1, (1, 3, 5)))

    def test_builtins_expand(self):
        assert parse_expr("GL(3)") == GL(3)
        assert parse_expr("PGL(2)") == Isogenous(SimplyConnectedSimple(DynkinType("A", 1)))
        assert parse_expr("SL(1)") == Trivial()

    def test_all_constructors(self):
        expr = parse_expr("prod(trivial, Ga(2), isog(simple(E8)), torus(0))")
        assert expr == Product((
            Trivial(), Unipotent(2), Isogenous(SimplyConnectedSimple(DynkinType.of("E8"))), Torus(0),
        ))

    def test_whitespace_insensitive(self):
        assert parse_expr(" ext (\n  torus( 2 ) ,\n\tGa(1) ) ") == Extension(Torus(2), Unipotent(1))
        assert parse_expr("simple(A 2)") == SimplyConnectedSimple(DynkinType("A", 2))
        assert parse_expr("ext(simple(B 3), torus(1))") == Extension(SimplyConnectedSimple(DynkinType("B", 3)), Torus(1))

    def test_c2_parses_then_fails_validation(self):
        expr = parse_expr("simple(C2)")
        assert expr == SimplyConnectedSimple(DynkinType("C", 2))
        issue = validate(expr)[0]
        assert issue.code == "RankOutOfRange"
        assert "B2" in issue.hint


class TestSyntaxErrors:
    def test_missing_comma_location(self):
        with pytest.raises(DslSyntaxError) as excinfo:
            parse_expr("ext(torus(2) abelian(1))")
        err = excinfo.value
        assert (err.line, err.column) == (1, 14)
        assert err.expected == ["','"]
        assert err.qualified_code == "dsl_cli.SyntaxError"

    def test_unknown_constructor_on_later_line(self):
        with pytest.raises(DslSyntaxError) as excinfo:
            parse_expr("ext(\n  torus(2),\n  foo(1))")
        assert (excinfo.value.line, excinfo.value.column) == (3, 3)
        assert "torus" in excinfo.value.expected

    @pytest.mark.parametrize("text", [
        "simple(X5)", "GL(0)", "torus(1) x", "ext(torus(1))", "abelian(1; )", "torus(-1)", "",
    ])
    def test_rejected(self, text):
        with pytest.raises(DslSyntaxError):
            parse_expr(text)

    def test_input_limit(self):
        with pytest.raises(DslSyntaxError):
            parse_expr("trivial" + " " * (64 * 1024))


class TestIntPoly:
    @pytest.mark.parametrize("text, coeffs", [
        ("t^2+3t+5", (1, 3, 5)),
        ("t^4-1", (1, 0, 0, 0, -1)),
        ("-t + 2", (-1, 2)),
        ("5", (5,)),
        ("t^2 - 2*t + 3", (1, -2, 3)),
    ])
    def test_parse(self, text, coeffs):
        assert parse_intpoly(text) == coeffs

    def test_cancelled_leading_terms_dropped(self):
        assert parse_intpoly("t^2 - t^2 + 5") == (5,)
        issue = validate(parse_expr("abelian(1; t^2-t^2+5)"))[0]
        assert issue.code == "BadCharPolyDegree"
        assert "degree 0" in issue.message

    def test_zero_polynomial_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse_intpoly("t - t")

    def test_format(self):
        assert format_intpoly((1, 3, 5)) == "t^2+3t+5"
        assert format_intpoly((1, 0, -1)) == "t^2-1"
        assert format_intpoly((-1, 2)) == "-t+2"


class TestPrettyPrint:
    def test_round_trip_fixed_expressions(self):
        for expr in (
            GL(3),
            Extension(Torus(2), AbelianVariety(1, (1, -2, 3))),
            Product((Unipotent(1), Trivial(), AbelianVariety(2))),
            Isogenous(SimplyConnectedSimple(DynkinType.of("G2"))),
        ):
            assert parse_expr(pretty_print(expr)) == expr

    def test_round_trip_random_normalized(self, rng):
        for _ in range(100):
            expr = normalize(random_tree(rng))
            assert parse_expr(pretty_print(expr)) == expr

    def test_rendering(self):
        assert pretty_print(GL(2)) == "ext(simple(A1), torus(1))"


class TestParseEndo:
    def test_frobenius(self, gl2):
        pres = presentation(gl2)
        act = parse_endo("frobenius(5)", pres)
        scalars = {block.labels[0]: block.action.matrix[0, 0] for block in act.blocks}
        assert scalars == {"ext.q.torus.g1": 5, "ext.n.ss.A1.g1": 25}

    def test_scalar_one_is_identity(self, gl2):
        pres = presentation(gl2)
        assert graded_trace(pres, parse_endo("scalar 1", pres)) == 0

    def test_rational_scalar(self, gl2):
        pres = presentation(gl2)
        assert graded_trace(pres, parse_endo("scalar -1/2", pres)) == Fraction(9, 4)

    def test_charpoly_block(self):
        pres = presentation(AbelianVariety(1))
        act = parse_endo("block(ab.* : charpoly t^2+3t+5)", pres)
        (block,) = act.blocks
        assert block.labels == ("ab.g1", "ab.g2")
        assert block.action == IntCharPoly((1, 3, 5))

    def test_block_overrides_frobenius(self):
        pres = presentation(Extension(Torus(1), AbelianVariety(1)))
        act = parse_endo("frobenius(5), block(ab.* : charpoly t^2+3t+5)", pres)
        assert graded_trace(pres, act) == (1 - 5) * 9

    def test_matrix_block(self):
        pres = presentation(AbelianVariety(1))
        act = parse_endo("block(ab.* : matrix[[1, 2], [3, 4]])", pres)
        assert graded_trace(pres, act) == -6

    def test_scalar_glob_splits(self, gl3):
        pres = presentation(gl3)
        act = parse_endo("scalar 1, block(ss.* : scalar 2)", pres)
        assert len(act.blocks) == 3
        assert graded_trace(pres, act) == 0

    def test_glob_matches_suffixes(self, gl3):
        pres = presentation(gl3)
        assert match_labels(pres, "ss.A2.*") == ["ext.n.ss.A2.g1", "ext.n.ss.A2.g2"]
        assert match_labels(pres, "ext.q.*") == ["ext.q.torus.g1"]

    def test_unknown_label(self, gl2):
        with pytest.raises(UnknownLabel):
            parse_endo("block(zz.* : scalar 2)", presentation(gl2))

    def test_shape_mismatch(self):
        pres = presentation(AbelianVariety(1))
        with pytest.raises(ShapeMismatch):
            parse_endo("block(ab.* : matrix[[1]])", pres)
        with pytest.raises(ShapeMismatch):
            parse_endo("block(ab.* : charpoly t+1)", pres)

    def test_two_base_actions(self, gl2):
        with pytest.raises(DslSyntaxError):
            parse_endo("scalar 1, frobenius(3)", presentation(gl2))
