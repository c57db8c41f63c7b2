import networkx as nx
import pytest

from group_variety_cohomology.src.core_model import GL, SL, AbelianVariety, DynkinType, Extension, Torus, Unipotent
from group_variety_cohomology.src.dynamics import lefschetz_point_count
from group_variety_cohomology.src.errors import (
    GroupTooLarge,
    OracleError,
    OracleUnavailable,
    SingularCurve,
    TooLarge,
)
from group_variety_cohomology.src.oracle import (
    PrimeField,
    cartan_matrix,
    count_reflections,
    dynkin_diagram,
    enumerate_elliptic,
    enumerate_gl,
    enumerate_roots,
    enumerate_sl,
    enumerate_torus,
    enumerate_unipotent,
    molien_degrees,
    oracle_point_count,
    weyl_realization,
)

ALL_TYPES = ["A1", "A2", "A5", "B2", "B4", "C3", "C5", "D4", "D6", "G2", "F4", "E6", "E7", "E8"]


class TestPrimeField:
    def test_rejects_composites_and_large_primes(self):
        with pytest.raises(OracleError):
            PrimeField(4)
        with pytest.raises(OracleError):
            PrimeField(103)

    def test_legendre(self):
        field = PrimeField(7)
        assert [field.legendre(x) for x in range(7)] == [0, 1, 1, -1, 1, -1, -1]
        assert field.is_square(2)


class TestMatrixGroups:
    @pytest.mark.parametrize("n, p, expected", [(1, 5, 4), (2, 2, 6), (2, 3, 48), (2, 5, 480), (3, 2, 168)])
    def test_gl(self, n, p, expected):
        assert enumerate_gl(n, p) == expected

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_sl_matches_formula(self, p):
        assert enumerate_sl(2, p) == lefschetz_point_count(SL(2), p)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_gl2_matches_formula(self, p):
        assert enumerate_gl(2, p) == lefschetz_point_count(GL(2), p)

    def test_gl3_over_f3(self):
        assert enumerate_gl(3, 3) == lefschetz_point_count(GL(3), 3) == 11232

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [3, 5])
    def test_torus(self, k, p):
        assert enumerate_torus(k, p) == (p - 1) ** k

    def test_unipotent(self):
        assert enumerate_unipotent(3, 3) == 27

    def test_budget(self):
        with pytest.raises(TooLarge):
            enumerate_gl(3, 7)

    def test_size_limit(self):
        with pytest.raises(OracleError):
            enumerate_gl(4, 2)


class TestOraclePointCount:
    def test_structural_recognition(self, gl2):
        assert oracle_point_count(gl2, 5) == lefschetz_point_count(gl2, 5)
        assert oracle_point_count(Extension(GL(2), Torus(1)), 3) == 48 * 2
        assert oracle_point_count(Extension(Unipotent(2), SL(2)), 3) == 9 * 24

    def test_abelian_unavailable(self):
        with pytest.raises(OracleUnavailable):
            oracle_point_count(AbelianVariety(1, (1, 3, 5)), 5)


class TestElliptic:
    def test_known_curves(self):
        curve = enumerate_elliptic(1, 1, 5)
        assert (curve.count, curve.trace, curve.charpoly) == (9, -3, (1, 3, 5))
        assert enumerate_elliptic(0, 1, 5).count == 6

    def test_singular(self):
        with pytest.raises(SingularCurve):
            enumerate_elliptic(0, 0, 7)

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_lefschetz_from_enumerated_charpoly(self, p):
        found = 0
        for a in range(p):
            for b in range(1, p):
                try:
                    curve = enumerate_elliptic(a, b, p)
                except SingularCurve:
                    continue
                assert curve.trace ** 2 <= 4 * p
                assert lefschetz_point_count(AbelianVariety(1, curve.charpoly), p) == curve.count
                found += 1
        assert found >= 5


class TestRootSystems:
    def test_cartan_matrices(self):
        assert cartan_matrix(DynkinType.of("B2")) == [[2, -1], [-2, 2]]
        assert cartan_matrix(DynkinType.of("G2")) == [[2, -3], [-1, 2]]

    @pytest.mark.parametrize("name", ALL_TYPES)
    def test_dynkin_diagram_is_tree(self, name):
        graph = dynkin_diagram(DynkinType.of(name))
        assert nx.is_tree(graph)

    def test_branch_nodes(self):
        degrees = dict(dynkin_diagram(DynkinType.of("E8")).degree())
        assert sorted(degrees.values()).count(3) == 1
        assert dynkin_diagram(DynkinType.of("G2")).edges[0, 1]["bond"] == 3

    @pytest.mark.parametrize("name, roots", [("A2", 6), ("G2", 12), ("F4", 48), ("E6", 72), ("E7", 126), ("E8", 240)])
    def test_root_counts(self, name, roots):
        assert enumerate_roots(DynkinType.of(name)) == roots

    @pytest.mark.parametrize("name", ALL_TYPES)
    def test_rank_plus_roots_is_dimension(self, name):
        t = DynkinType.of(name)
        assert t.rank + enumerate_roots(t) == t.dimension


class TestWeylGroups:
    @pytest.mark.parametrize("name, order", [("A2", 6), ("B3", 48), ("D4", 192), ("G2", 12), ("F4", 1152)])
    def test_orders(self, name, order):
        assert weyl_realization(DynkinType.of(name)).order == order

    @pytest.mark.parametrize("name, reflections", [("A3", 6), ("B3", 9), ("G2", 6)])
    def test_reflection_count(self, name, reflections):
        assert count_reflections(weyl_realization(DynkinType.of(name))) == reflections

    @pytest.mark.parametrize("name", [
        "A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "G2", "F4",
    ])
    def test_molien_recovers_table(self, name):
        t = DynkinType.of(name)
        assert molien_degrees(t) == t.degrees()

    def test_order_cap(self):
        with pytest.raises(GroupTooLarge):
            weyl_realization(DynkinType.of("A3"), max_order=10)
        with pytest.raises(GroupTooLarge):
            molien_degrees(DynkinType.of("E6"))
