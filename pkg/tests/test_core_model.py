import pytest

from group_variety_cohomology.src.commands.verify import random_tree
from group_variety_cohomology.src.core_model import (
    GL,
    PGL,
    SL,
    AbelianVariety,
    DynkinType,
    Extension,
    Isogenous,
    Product,
    SimplyConnectedSimple,
    Torus,
    Trivial,
    Unipotent,
    abelian_dim,
    builtin,
    dim,
    ensure_valid,
    is_abelian_variety,
    is_linear,
    is_reductive,
    is_semisimple,
    iter_leaves,
    linear_dim,
    normalize,
    structure_layers,
    unipotent_dim,
    validate,
)
from group_variety_cohomology.src.errors import BadCharPolyDegree, RankOutOfRange, ValidationFailed


def simple(name):
    return SimplyConnectedSimple(DynkinType.of(name))


class TestDynkinType:
    def test_parse_names(self):
        assert DynkinType.of("A2") == DynkinType("A", 2)
        assert DynkinType.of("E8") == DynkinType("E8", 8)
        assert DynkinType.of("D12").rank == 12
        with pytest.raises(ValueError):
            DynkinType.of("X3")
        with pytest.raises(ValueError):
            DynkinType.of("B")

    @pytest.mark.parametrize("name, degrees", [
        ("A1", [2]),
        ("A3", [2, 3, 4]),
        ("B3", [2, 4, 6]),
        ("C4", [2, 4, 6, 8]),
        ("D4", [2, 4, 4, 6]),
        ("D5", [2, 4, 5, 6, 8]),
        ("G2", [2, 6]),
        ("F4", [2, 6, 8, 12]),
        ("E6", [2, 5, 6, 8, 9, 12]),
        ("E7", [2, 6, 8, 10, 12, 14, 18]),
        ("E8", [2, 8, 12, 14, 18, 20, 24, 30]),
    ])
    def test_degrees(self, name, degrees):
        assert DynkinType.of(name).degrees() == degrees

    @pytest.mark.parametrize("name, dimension", [
        ("A1", 3), ("A2", 8), ("B2", 10), ("D4", 28), ("G2", 14), ("F4", 52), ("E6", 78), ("E7", 133), ("E8", 248),
    ])
    def test_dimension(self, name, dimension):
        assert DynkinType.of(name).dimension == dimension

    def test_positive_roots(self):
        assert DynkinType.of("E8").positive_root_count == 120
        assert DynkinType.of("A2").positive_root_count == 3


class TestValidate:
    def test_valid_expression_has_no_issues(self, gl3, torus_by_curve):
        assert validate(gl3) == []
        assert validate(torus_by_curve) == []

    def test_c2_points_at_b2(self):
        issues = validate(simple("C2"))
        assert [issue.code for issue in issues] == ["RankOutOfRange"]
        assert issues[0].path == "root"
        assert "B2" in issues[0].hint

    @pytest.mark.parametrize("name", ["A0", "B1", "C2", "D3", "D2"])
    def test_low_ranks_rejected(self, name):
        assert validate(simple(name))[0].code == "RankOutOfRange"

    def test_issue_path_points_at_node(self):
        issues = validate(Extension(Torus(1), Product((Torus(2), simple("D3")))))
        assert issues[0].path == "root.ext.q.prod.1"
        assert "A3" in issues[0].hint

    def test_negative_dimensions(self):
        assert validate(Torus(-1))[0].code == "NegativeDimension"
        assert validate(Unipotent(-2))[0].code == "NegativeDimension"

    def test_charpoly_degree(self):
        assert validate(AbelianVariety(1, (1, 3)))[0].code == "BadCharPolyDegree"
        assert validate(AbelianVariety(1, (2, 3, 5)))[0].code == "BadCharPolyDegree"

    def test_empty_product(self):
        assert validate(Product(()))[0].code == "EmptyProduct"

    def test_ensure_valid_raises_with_first_code(self):
        with pytest.raises(ValidationFailed) as excinfo:
            ensure_valid(Extension(simple("C2"), Torus(-1)))
        assert excinfo.value.code == "RankOutOfRange"
        assert excinfo.value.qualified_code == "core_model.RankOutOfRange"
        assert len(excinfo.value.issues) == 2

    def test_typed_errors_carry_hint(self):
        with pytest.raises(RankOutOfRange) as excinfo:
            ensure_valid(simple("C2"))
        assert isinstance(excinfo.value, ValidationFailed)
        assert "B2" in excinfo.value.hint
        with pytest.raises(BadCharPolyDegree) as excinfo:
            ensure_valid(AbelianVariety(1, (1, 3)))
        assert excinfo.value.code == "BadCharPolyDegree"


class TestNormalize:
    def test_isogeny_is_transparent(self):
        assert normalize(Isogenous(Isogenous(SL(3)))) == SL(3)

    def test_product_folds_left(self):
        a, b, c = Torus(1), Unipotent(2), simple("A1")
        assert normalize(Product((a, b, c))) == Extension(Extension(a, b), c)
        assert normalize(Product((a,))) == a
        assert normalize(Product(())) == Trivial()

    def test_leaves_in_tree_order(self):
        paths = [path for path, _ in iter_leaves(normalize(GL(2)))]
        assert paths == ["ext.n", "ext.q"]

    def test_idempotent_and_dimension_preserving(self, rng):
        for _ in range(100):
            expr = random_tree(rng)
            once = normalize(expr)
            assert normalize(once) == once
            assert dim(once) == dim(expr)


class TestDimensions:
    def test_dim(self, gl3, torus_by_curve):
        assert dim(gl3) == 9
        assert dim(torus_by_curve) == 2
        assert dim(PGL(2)) == 3
        assert dim(Product((Unipotent(4), Torus(2)))) == 6

    def test_split_dimensions(self):
        expr = Extension(Extension(Unipotent(2), GL(2)), AbelianVariety(3))
        assert unipotent_dim(expr) == 2
        assert abelian_dim(expr) == 3
        assert linear_dim(expr) == 2 + 4


class TestStructureLayers:
    def test_tower(self):
        expr = Extension(Extension(Unipotent(2), GL(2)), AbelianVariety(1))
        layers = structure_layers(expr)
        assert layers.unipotent_radical == Unipotent(2)
        assert layers.radical_torus == Torus(1)
        assert layers.semisimple_part == simple("A1")
        assert layers.linear_part == Extension(Extension(Unipotent(2), Torus(1)), simple("A1"))
        assert layers.abelian_part == AbelianVariety(1)
        assert dim(layers.linear_part) + dim(layers.abelian_part) == dim(expr)

    def test_empty_layers_are_trivial(self):
        layers = structure_layers(SL(3))
        assert layers.unipotent_radical == Trivial()
        assert layers.abelian_part == Trivial()

    def test_predicates(self, gl3):
        assert is_reductive(gl3)
        assert not is_semisimple(gl3)
        assert is_semisimple(SL(3))
        assert is_linear(Extension(Unipotent(1), gl3))
        assert not is_reductive(Extension(Unipotent(1), gl3))
        assert not is_linear(AbelianVariety(1))
        assert is_abelian_variety(AbelianVariety(2))
        assert not is_abelian_variety(Extension(Torus(1), AbelianVariety(1)))


class TestBuiltins:
    def test_gl_sl_pgl(self):
        assert GL(1) == Torus(1)
        assert SL(1) == Trivial()
        assert GL(3) == Extension(simple("A2"), Torus(1))
        assert PGL(2) == Isogenous(simple("A1"))
        assert builtin("SL", 4) == simple("A3")

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            GL(0)
