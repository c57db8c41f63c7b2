from fractions import Fraction

import pytest
import sympy

from group_variety_cohomology.src.commands.verify import random_extension
from group_variety_cohomology.src.core_model import GL, Extension, Torus
from group_variety_cohomology.src.dsl_parser import pretty_print
from group_variety_cohomology.src.errors import CapExceeded, HopfEngineError, NotHopfMorphism
from group_variety_cohomology.src.hopf_engine import (
    HopfMorphism,
    algebra_of,
    alternating_trace,
    check_primitive_exactness,
    exterior_hopf,
    exterior_morphism,
    extension_triple,
    hopf_tensor,
    killing_pi_star,
    koszul,
    lift_action,
    morphism_violations,
    perturbed_coproduct,
    primitives,
    split_triple,
    verify_axioms,
    verify_hopf_theorem,
)

ODD = [1, 3, 5, 7, 9]


def random_degrees(rng, most=6):
    return [rng.choice(ODD) for _ in range(rng.randint(0, most))]


class TestExteriorAlgebra:
    def test_koszul(self):
        assert koszul(1, 1) == -1
        assert koszul(1, 2) == 1
        assert koszul(3, 5) == -1

    def test_basis_and_betti(self):
        H = exterior_hopf([1, 3])
        assert H.dim == 4
        assert H.betti() == [1, 1, 0, 1, 1]
        assert H.basis.labels == ["1", "x0", "x1", "x0^x1"]

    def test_anticommuting_generators(self):
        H = exterior_hopf([1, 1])
        x, y = H.basis_vector(1), H.basis_vector(2)
        assert H.multiply(x, y) == {3: Fraction(1)}
        assert H.multiply(y, x) == {3: Fraction(-1)}
        assert H.multiply(x, x) == {}

    def test_coproduct_of_wedge(self):
        H = exterior_hopf([1, 1])
        # Δ(x∧y) = x∧y⊗1 + x⊗y - y⊗x + 1⊗x∧y
        assert H.comultiply(H.basis_vector(3)) == {
            (3, 0): Fraction(1), (1, 2): Fraction(1), (2, 1): Fraction(-1), (0, 3): Fraction(1),
        }

    def test_cap(self):
        with pytest.raises(CapExceeded):
            exterior_hopf([1] * 5, cap=16)

    def test_even_degree_rejected(self):
        with pytest.raises(HopfEngineError):
            exterior_hopf([2])

    def test_random_axioms_and_primitives(self, rng):
        for _ in range(20):
            degrees = random_degrees(rng, 5)
            H = exterior_hopf(degrees)
            assert verify_axioms(H) == []
            assert sorted(primitives(H).degrees) == sorted(degrees)


class TestStructureTheorem:
    def test_isomorphic(self, rng):
        for _ in range(10):
            report = verify_hopf_theorem(exterior_hopf(random_degrees(rng, 5)))
            assert report.isomorphic
            assert all(check.bijective for check in report.degree_checks)

    def test_perturbed_coproduct_fails_with_reason(self):
        H = exterior_hopf([1, 3])
        bad = perturbed_coproduct(H, 1, {(1, H.unit): Fraction(1)})
        report = verify_hopf_theorem(bad)
        assert not report.isomorphic
        assert report.axiom_violations
        assert report.reason

    def test_tensor_primitives_add(self):
        A, B = exterior_hopf([1, 3]), exterior_hopf([5])
        T = hopf_tensor(A, B)
        assert T.dim == A.dim * B.dim
        assert sorted(primitives(T).degrees) == [1, 3, 5]
        assert verify_hopf_theorem(T).isomorphic

    def test_tensor_of_one_generator_algebras(self):
        T = hopf_tensor(exterior_hopf([1]), exterior_hopf([3]))
        H = exterior_hopf([1, 3])
        assert T.betti() == H.betti()
        assert sorted(primitives(T).degrees) == sorted(primitives(H).degrees) == [1, 3]
        assert verify_hopf_theorem(T).isomorphic

    def test_tensor_with_trivial_algebra(self):
        A = exterior_hopf([1, 3, 3])
        T = hopf_tensor(A, exterior_hopf([]))
        assert T.dim == A.dim
        assert T.betti() == A.betti()
        assert primitives(T).count_by_degree() == primitives(A).count_by_degree() == {1: 1, 3: 2}

    def test_primitives_add_per_degree(self, rng):
        for _ in range(20):
            degrees = random_degrees(rng, 5)
            split = rng.randint(0, len(degrees))
            A, B = exterior_hopf(degrees[:split]), exterior_hopf(degrees[split:])
            expected = dict(primitives(A).count_by_degree())
            for degree, count in primitives(B).count_by_degree().items():
                expected[degree] = expected.get(degree, 0) + count
            assert primitives(hopf_tensor(A, B, verify=False)).count_by_degree() == expected


class TestMorphisms:
    def test_lifted_action_trace(self):
        H = exterior_hopf([1, 1])
        f = lift_action(H, sympy.Matrix([[2, 0], [0, 3]]))
        assert morphism_violations(f) == []
        # (1 - 2)(1 - 3)
        assert alternating_trace(f) == 2

    def test_generator_count_checked(self):
        H = exterior_hopf([1, 3])
        with pytest.raises(HopfEngineError):
            exterior_morphism(H, H, [{1: Fraction(1)}])

    def test_identity_is_hopf_morphism(self):
        H = exterior_hopf([1, 3, 3])
        f = lift_action(H, sympy.eye(3))
        assert morphism_violations(f) == []


class TestPrimitiveExactness:
    @pytest.mark.parametrize("normal, quotient", [([1], [3]), ([3, 5], [1]), ([], [1, 1]), ([1, 3], [])])
    def test_split_triples(self, normal, quotient):
        triple = split_triple(normal, quotient)
        report = check_primitive_exactness(triple.iota_star, triple.pi_star)
        assert report.exact
        assert report.iso_verified
        assert report.section_verified
        assert report.primitive_dims == {"N": len(normal), "G": len(normal) + len(quotient), "Q": len(quotient)}

    def test_killed_pi_star_is_not_injective(self):
        triple = split_triple([1], [3, 5])
        report = check_primitive_exactness(triple.iota_star, killing_pi_star(triple))
        assert not report.injective
        assert not report.exact
        assert report.witness

    def test_non_morphism_rejected(self):
        triple = split_triple([1], [3])
        zero = HopfMorphism(triple.total, triple.normal, {})
        with pytest.raises(NotHopfMorphism):
            check_primitive_exactness(zero, triple.pi_star)

    def test_extension_triple_of_gl2(self):
        triple = extension_triple(GL(2))
        assert triple.total.dim == 4
        report = check_primitive_exactness(triple.iota_star, triple.pi_star)
        assert report.exact and report.iso_verified

    def test_random_extension_triples(self, rng):
        for _ in range(20):
            expr = random_extension(rng, max_generators=6)
            triple = extension_triple(expr)
            report = check_primitive_exactness(triple.iota_star, triple.pi_star)
            assert report.exact, pretty_print(expr)
            assert report.iso_verified
            assert report.primitive_dims["G"] == report.primitive_dims["N"] + report.primitive_dims["Q"]

    def test_extension_triple_needs_extension(self):
        with pytest.raises(HopfEngineError):
            extension_triple(Torus(2))

    def test_algebra_of_matches_presentation(self):
        H = algebra_of(Extension(Torus(2), GL(2)))
        assert sorted(primitives(H).degrees) == [1, 1, 1, 3]
