"""
Hopf Engine - 有理数上的有限维分次 Hopf 代数

提供:
- 结构常数表示的 ExplicitHopfAlgebra (乘法 / 余乘法 / 余单位)
- 外代数 Hopf 代数 (基 = 生成元子集的 bitmask, Koszul 符号)
- Künneth 张量积 hopf_tensor
- 本原元子空间 primitives (逐次数精确消元)
- 结构定理 H = Λ*(PH) 的逐例验证
- 本原元正合性检查以及截面 s ⊗ π* 同构的构造与验证

所有系数都是 fractions.Fraction，秩与核由 sympy 精确计算，没有浮点数。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .cohomology import presentation
from .config import config
from .core_model import Extension, GroupExpr, join_path, normalize
from .errors import CapExceeded, HopfEngineError, NotHopfMorphism
from .linalg import add_into, columns_to_matrix, dense, kernel, rank, scaled, solve, to_fraction

logger = logging.getLogger(__name__)

Vector = Dict[int, Fraction]
Tensor = Dict[Tuple[int, int], Fraction]

ONE = Fraction(1)


def koszul(p: int, q: int) -> int:
    """(-1)^{pq}"""
    return -1 if (p * q) % 2 else 1


@dataclass(frozen=True)
class BasisElement:
    label: str
    degree: int


@dataclass(frozen=True)
class GradedBasis:
    elements: Tuple[BasisElement, ...]
    unit: int = 0

    def __post_init__(self):
        labels = [e.label for e in self.elements]
        if len(set(labels)) != len(labels):
            raise HopfEngineError("basis labels must be unique")
        if any(e.degree < 0 for e in self.elements):
            raise HopfEngineError("basis degrees must be nonnegative")
        degree_zero = [i for i, e in enumerate(self.elements) if e.degree == 0]
        if degree_zero != [self.unit]:
            raise HopfEngineError("exactly one degree-0 basis element, the unit, is required")

    def __len__(self) -> int:
        return len(self.elements)

    def degree(self, i: int) -> int:
        return self.elements[i].degree

    def indices_of_degree(self, r: int) -> List[int]:
        return [i for i, e in enumerate(self.elements) if e.degree == r]

    @property
    def degrees(self) -> List[int]:
        return sorted({e.degree for e in self.elements})

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.elements]


class ExplicitHopfAlgebra:
    """
    有限维分次 Hopf 代数 (antipode 不需要)

    `product[(i, j)]` 是 e_i e_j 的稀疏展开，缺省为 0；
    `coproduct[i]` 是 Δ(e_i) 在 (j, k) -> e_j ⊗ e_k 上的展开。
    `monomials[i]`，如果给出，表示 e_i = x_{k1} ∧ ... ∧ x_{km} (按此顺序)。
    """

    def __init__(
        self,
        basis: GradedBasis,
        product: Dict[Tuple[int, int], Vector],
        coproduct: Dict[int, Tensor],
        counit: Dict[int, Fraction],
        monomials: Optional[Dict[int, Tuple[int, ...]]] = None,
        generator_degrees: Sequence[int] = (),
        name: str = "",
    ):
        self.basis = basis
        self.product = product
        self.coproduct = coproduct
        self.counit = counit
        self.monomials = monomials
        self.generator_degrees = tuple(generator_degrees)
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unit(self) -> int:
        return self.basis.unit

    def degree(self, i: int) -> int:
        return self.basis.degree(i)

    def betti(self) -> List[int]:
        top = max(self.basis.degrees)
        return [len(self.basis.indices_of_degree(r)) for r in range(top + 1)]

    def generator_index(self, k: int) -> int:
        if self.monomials is None:
            raise HopfEngineError(f"{self.name or 'algebra'} has no monomial presentation")
        for i, mono in self.monomials.items():
            if mono == (k,):
                return i
        raise HopfEngineError(f"generator {k} not in basis")

    def multiply_basis(self, i: int, j: int) -> Vector:
        return self.product.get((i, j), {})

    def multiply(self, u: Vector, v: Vector) -> Vector:
        result: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                add_into(result, self.multiply_basis(i, j), a * b)
        return result

    def comultiply(self, v: Vector) -> Tensor:
        result: Tensor = {}
        for i, a in v.items():
            add_into(result, self.coproduct.get(i, {}), a)
        return result

    def tensor_multiply(self, s: Tensor, t: Tensor) -> Tensor:
        """(a⊗b)(c⊗d) = (-1)^{|b||c|} (ac)⊗(bd)"""
        result: Tensor = {}
        for (a, b), x in s.items():
            for (c, d), y in t.items():
                ac = self.multiply_basis(a, c)
                bd = self.multiply_basis(b, d)
                if not ac or not bd:
                    continue
                sign = koszul(self.degree(b), self.degree(c))
                for k, u in ac.items():
                    for l, w in bd.items():
                        add_into(result, {(k, l): u * w}, sign * x * y)
        return result

    def counit_of(self, v: Vector) -> Fraction:
        return sum((a * self.counit.get(i, Fraction(0)) for i, a in v.items()), Fraction(0))

    def unit_vector(self) -> Vector:
        return {self.unit: ONE}

    def basis_vector(self, i: int) -> Vector:
        return {i: ONE}

    def __repr__(self) -> str:
        return f"ExplicitHopfAlgebra({self.name!r}, dim={self.dim})"


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    detail: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.detail}"


def verify_axioms(H: ExplicitHopfAlgebra, limit: int = 20) -> List[AxiomViolation]:
    """
    穷举检查结构常数:
    分次、单位、分次交换、余结合、余单位、Δ 为代数同态 (Koszul 符号)、ε 为代数同态
    """
    violations: List[AxiomViolation] = []

    def report(axiom: str, detail: str) -> bool:
        violations.append(AxiomViolation(axiom, detail))
        return len(violations) >= limit

    labels = H.basis.labels
    n = H.dim
    u = H.unit

    for (i, j), vec in H.product.items():
        for k in vec:
            if H.degree(k) != H.degree(i) + H.degree(j):
                if report("grading", f"{labels[i]}*{labels[j]} has a term {labels[k]} of wrong degree"):
                    return violations
    for i, tensor in H.coproduct.items():
        for (a, b) in tensor:
            if H.degree(a) + H.degree(b) != H.degree(i):
                if report("grading", f"Δ({labels[i]}) has a term {labels[a]}⊗{labels[b]} of wrong degree"):
                    return violations

    if H.counit != {u: ONE}:
        if report("counit", "ε must be 1 on the unit and 0 in positive degrees"):
            return violations

    for i in range(n):
        e = H.basis_vector(i)
        if H.multiply_basis(u, i) != e or H.multiply_basis(i, u) != e:
            if report("unit", f"1*{labels[i]} != {labels[i]}"):
                return violations

        for j in range(i, n):
            left = H.multiply_basis(i, j)
            right = scaled(H.multiply_basis(j, i), Fraction(koszul(H.degree(i), H.degree(j))))
            if left != right:
                if report("graded-commutativity", f"{labels[i]}*{labels[j]} != ±{labels[j]}*{labels[i]}"):
                    return violations

        delta = H.coproduct.get(i, {})
        left3: Dict[Tuple[int, int, int], Fraction] = {}
        right3: Dict[Tuple[int, int, int], Fraction] = {}
        for (x, y), c in delta.items():
            for (a, b), d in H.coproduct.get(x, {}).items():
                add_into(left3, {(a, b, y): c * d})
            for (a, b), d in H.coproduct.get(y, {}).items():
                add_into(right3, {(x, a, b): c * d})
        if left3 != right3:
            if report("coassociativity", f"(Δ⊗id)Δ != (id⊗Δ)Δ on {labels[i]}"):
                return violations

        left_counit: Vector = {}
        right_counit: Vector = {}
        for (a, b), c in delta.items():
            add_into(left_counit, {b: c * H.counit.get(a, Fraction(0))})
            add_into(right_counit, {a: c * H.counit.get(b, Fraction(0))})
        if left_counit != e or right_counit != e:
            if report("counit", f"(ε⊗id)Δ or (id⊗ε)Δ differs from id on {labels[i]}"):
                return violations

    for i in range(n):
        for j in range(n):
            prod = H.multiply_basis(i, j)
            if H.counit_of(prod) != H.counit.get(i, 0) * H.counit.get(j, 0):
                if report("counit-multiplicative", f"ε({labels[i]}*{labels[j]})"):
                    return violations
            lhs = H.comultiply(prod)
            rhs = H.tensor_multiply(H.coproduct.get(i, {}), H.coproduct.get(j, {}))
            if lhs != rhs:
                if report("bialgebra", f"Δ({labels[i]}*{labels[j]}) != Δ({labels[i]})Δ({labels[j]})"):
                    return violations

    return violations


def _check_cap(size: int, cap: Optional[int]) -> None:
    cap = config.hopf_dimension_cap if cap is None else cap
    if size > cap:
        raise CapExceeded(f"explicit Hopf algebra of dimension {size} exceeds cap {cap}",
                          hint="raise --hopf-cap / GVC_HOPF_DIMENSION_CAP")


def _bits(mask: int) -> List[int]:
    return [k for k in range(mask.bit_length()) if mask >> k & 1]


def exterior_hopf(
    degrees: Sequence[int],
    names: Optional[Sequence[str]] = None,
    cap: Optional[int] = None,
) -> ExplicitHopfAlgebra:
    """
    奇数次生成元上的外代数 Hopf 代数

    Args:
        degrees: 生成元次数 (奇数, 正)
        names: 生成元名字，默认 x0, x1, ...
        cap: 基维数上限，默认 config.hopf_dimension_cap

    The basis element with bitmask S is x_{k1} ∧ ... ∧ x_{km} for the set bits
    k1 < ... < km; generators are primitive and Δ is extended multiplicatively.
    """
    degrees = list(degrees)
    if any(d <= 0 or d % 2 == 0 for d in degrees):
        raise HopfEngineError(f"exterior generators need odd positive degrees, got {degrees}")
    size = 1 << len(degrees)
    _check_cap(size, cap)
    names = list(names) if names is not None else [f"x{k}" for k in range(len(degrees))]

    def degree_of(mask: int) -> int:
        return sum(degrees[k] for k in _bits(mask))

    def wedge_sign(a: int, b: int) -> int:
        # x_a ∧ x_b = sign · x_{a|b}: move each generator of b past the larger ones of a
        sign = 1
        for i in _bits(a):
            for j in _bits(b):
                if i > j:
                    sign *= koszul(degrees[i], degrees[j])
        return sign

    elements = tuple(
        BasisElement("1" if mask == 0 else "^".join(names[k] for k in _bits(mask)), degree_of(mask))
        for mask in range(size)
    )
    product: Dict[Tuple[int, int], Vector] = {}
    coproduct: Dict[int, Tensor] = {}
    for a in range(size):
        for b in range(size):
            if a & b == 0:
                product[(a, b)] = {a | b: Fraction(wedge_sign(a, b))}
        # Δ(x_S) = Σ_{T ⊆ S} sign(T, S\T) x_T ⊗ x_{S\T}
        delta: Tensor = {}
        sub = a
        while True:
            delta[(sub, a ^ sub)] = Fraction(wedge_sign(sub, a ^ sub))
            if sub == 0:
                break
            sub = (sub - 1) & a
        coproduct[a] = delta

    return ExplicitHopfAlgebra(
        GradedBasis(elements, unit=0),
        product,
        coproduct,
        {0: ONE},
        monomials={mask: tuple(_bits(mask)) for mask in range(size)},
        generator_degrees=degrees,
        name=f"Λ{degrees}",
    )


def hopf_tensor(
    A: ExplicitHopfAlgebra,
    B: ExplicitHopfAlgebra,
    cap: Optional[int] = None,
    verify: bool = True,
) -> ExplicitHopfAlgebra:
    """
    分次张量积 A ⊗ B (Künneth)

    e_(a,b) sits at index a * dim B + b; multiplication and comultiplication
    carry the Koszul signs.
    """
    _check_cap(A.dim * B.dim, cap)
    nb = B.dim

    def index(a: int, b: int) -> int:
        return a * nb + b

    elements = tuple(
        BasisElement(f"{ea.label}|{eb.label}", ea.degree + eb.degree)
        for ea in A.basis.elements for eb in B.basis.elements
    )
    product: Dict[Tuple[int, int], Vector] = {}
    for (a, c), ac in A.product.items():
        for (b, d), bd in B.product.items():
            sign = koszul(B.degree(b), A.degree(c))
            vec: Vector = {}
            for k, x in ac.items():
                for l, y in bd.items():
                    vec[index(k, l)] = sign * x * y
            product[(index(a, b), index(c, d))] = vec

    coproduct: Dict[int, Tensor] = {}
    for a in range(A.dim):
        for b in range(nb):
            delta: Tensor = {}
            for (a1, a2), x in A.coproduct.get(a, {}).items():
                for (b1, b2), y in B.coproduct.get(b, {}).items():
                    sign = koszul(A.degree(a2), B.degree(b1))
                    add_into(delta, {(index(a1, b1), index(a2, b2)): sign * x * y})
            coproduct[index(a, b)] = delta

    counit = {
        index(a, b): x * y
        for a, x in A.counit.items() for b, y in B.counit.items() if x * y
    }

    monomials = None
    if A.monomials is not None and B.monomials is not None:
        offset = len(A.generator_degrees)
        monomials = {
            index(a, b): A.monomials[a] + tuple(offset + k for k in B.monomials[b])
            for a in range(A.dim) for b in range(nb)
        }

    T = ExplicitHopfAlgebra(
        GradedBasis(elements, unit=index(A.unit, B.unit)),
        product,
        coproduct,
        counit,
        monomials=monomials,
        generator_degrees=A.generator_degrees + B.generator_degrees,
        name=f"{A.name}⊗{B.name}",
    )
    if verify:
        violations = verify_axioms(T)
        if violations:
            raise HopfEngineError(f"tensor product violates Hopf axioms: {violations[0]}")
    return T


# Primitives

@dataclass(frozen=True)
class PrimitiveBasis:
    vectors: Tuple[Tuple[int, Tuple[Tuple[int, Fraction], ...]], ...] = ()

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def degrees(self) -> List[int]:
        return [degree for degree, _ in self.vectors]

    def vector(self, k: int) -> Vector:
        return dict(self.vectors[k][1])

    def as_vectors(self) -> List[Vector]:
        return [dict(coords) for _, coords in self.vectors]

    def count_by_degree(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for degree in self.degrees:
            counts[degree] = counts.get(degree, 0) + 1
        return counts


def primitives(H: ExplicitHopfAlgebra) -> PrimitiveBasis:
    """
    PH = ker(x -> Δ(x) - x⊗1 - 1⊗x)，逐次数精确求核
    """
    u = H.unit
    vectors = []
    for r in H.basis.degrees:
        if r == 0:
            continue
        indices = H.basis.indices_of_degree(r)
        columns = []
        for i in indices:
            column = dict(H.coproduct.get(i, {}))
            add_into(column, {(i, u): ONE}, -ONE)
            add_into(column, {(u, i): ONE}, -ONE)
            columns.append(column)
        matrix, _ = columns_to_matrix(columns)
        for coords in kernel(matrix, len(indices)):
            vectors.append((r, tuple((indices[k], c) for k, c in enumerate(coords) if c)))
    return PrimitiveBasis(tuple(vectors))


# Structure theorem

@dataclass(frozen=True)
class DegreeCheck:
    degree: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def bijective(self) -> bool:
        return self.source_dim == self.target_dim == self.rank


@dataclass(frozen=True)
class FailureWitness:
    degree: int
    kind: str
    vector: Tuple[Tuple[str, Fraction], ...]

    def __str__(self) -> str:
        terms = ", ".join(f"{label}: {value}" for label, value in self.vector)
        return f"{self.kind} in degree {self.degree}: {{{terms}}}"


@dataclass
class HopfTheoremReport:
    isomorphic: bool
    primitive_degrees: List[int]
    degree_checks: List[DegreeCheck] = field(default_factory=list)
    axiom_violations: List[AxiomViolation] = field(default_factory=list)
    witness: Optional[FailureWitness] = None
    reason: str = ""


def _ordered_product(H: ExplicitHopfAlgebra, factors: Sequence[Vector]) -> Vector:
    result = H.unit_vector()
    for factor in factors:
        result = H.multiply(result, factor)
        if not result:
            break
    return result


def monomial_images(H: ExplicitHopfAlgebra, vectors: Sequence[Vector], degrees: Sequence[int]) -> List[Tuple[int, int, Vector]]:
    """(mask, degree, p_{k1} ... p_{km}) for every subset of the given vectors."""
    images = []
    for mask in range(1 << len(vectors)):
        ks = _bits(mask)
        images.append((mask, sum(degrees[k] for k in ks), _ordered_product(H, [vectors[k] for k in ks])))
    return images


def _compare_degrees(H: ExplicitHopfAlgebra, images: List[Tuple[int, int, Vector]], source_label) -> Tuple[List[DegreeCheck], Optional[FailureWitness]]:
    checks: List[DegreeCheck] = []
    witness: Optional[FailureWitness] = None
    degrees = sorted(set(H.basis.degrees) | {degree for _, degree, _ in images})
    for r in degrees:
        targets = H.basis.indices_of_degree(r)
        target_set = set(targets)
        # off-degree terms only appear when grading already failed in verify_axioms
        sources = [
            (mask, {k: v for k, v in img.items() if k in target_set})
            for mask, degree, img in images if degree == r
        ]
        matrix, _ = columns_to_matrix([img for _, img in sources], row_keys=targets)
        rk = rank(matrix)
        check = DegreeCheck(r, len(sources), len(targets), rk)
        checks.append(check)
        if witness is not None or check.bijective:
            continue
        if rk < len(sources):
            coords = kernel(matrix, len(sources))[0]
            witness = FailureWitness(r, "kernel", tuple(
                (source_label(mask), c) for (mask, _), c in zip(sources, coords) if c
            ))
        else:
            for k in targets:
                extended = matrix.row_join(sympy.Matrix([int(t == k) for t in targets]))
                if rank(extended) > rk:
                    witness = FailureWitness(r, "cokernel", ((H.basis.labels[k], ONE),))
                    break
    return checks, witness


def verify_hopf_theorem(H: ExplicitHopfAlgebra, cap: Optional[int] = None) -> HopfTheoremReport:
    """
    逐例验证结构定理: 规范代数映射 Λ*(PH) -> H 在每个次数上都是双射

    失败不是异常，而是带有见证 (核或余核向量) 的报告。
    """
    violations = verify_axioms(H)
    prims = primitives(H)
    report = HopfTheoremReport(False, prims.degrees, axiom_violations=violations)
    if violations:
        report.reason = f"Hopf axioms fail: {violations[0]}"
    even = [d for d in prims.degrees if d % 2 == 0]
    if even:
        report.reason = report.reason or f"even-degree primitives {even} are outside the exterior-algebra setting"
        return report
    try:
        _check_cap(1 << len(prims), cap)
    except CapExceeded as exc:
        report.reason = report.reason or str(exc)
        return report

    names = [f"p{k}" for k in range(len(prims))]
    images = monomial_images(H, prims.as_vectors(), prims.degrees)
    checks, witness = _compare_degrees(
        H, images, lambda mask: "^".join(names[k] for k in _bits(mask)) or "1"
    )
    report.degree_checks = checks
    report.witness = witness
    report.isomorphic = not violations and all(c.bijective for c in checks)
    if not report.isomorphic and not report.reason:
        report.reason = f"Λ*(PH) -> H is not bijective ({witness})"
    logger.info("structure theorem on %s: %s", H.name, "iso" if report.isomorphic else report.reason)
    return report


# Morphisms

@dataclass
class HopfMorphism:
    """Linear map given by the images of the source basis elements."""
    source: ExplicitHopfAlgebra
    target: ExplicitHopfAlgebra
    images: Dict[int, Vector]

    @classmethod
    def from_matrix(cls, source: ExplicitHopfAlgebra, target: ExplicitHopfAlgebra, matrix: sympy.Matrix) -> "HopfMorphism":
        if matrix.shape != (target.dim, source.dim):
            raise HopfEngineError(f"morphism matrix must be {target.dim}x{source.dim}, got {matrix.shape}")
        images = {
            j: {i: to_fraction(matrix[i, j]) for i in range(target.dim) if matrix[i, j] != 0}
            for j in range(source.dim)
        }
        return cls(source, target, images)

    def apply(self, v: Vector) -> Vector:
        result: Vector = {}
        for i, a in v.items():
            add_into(result, self.images.get(i, {}), a)
        return result

    def apply_tensor(self, t: Tensor) -> Tensor:
        result: Tensor = {}
        for (a, b), x in t.items():
            for k, y in self.images.get(a, {}).items():
                for l, z in self.images.get(b, {}).items():
                    add_into(result, {(k, l): x * y * z})
        return result


def morphism_violations(f: HopfMorphism, limit: int = 20) -> List[AxiomViolation]:
    """Check, never assume, that f is a graded Hopf-algebra morphism."""
    S, T = f.source, f.target
    violations: List[AxiomViolation] = []
    labels = S.basis.labels

    def report(axiom: str, detail: str) -> bool:
        violations.append(AxiomViolation(axiom, detail))
        return len(violations) >= limit

    for i in range(S.dim):
        if any(T.degree(k) != S.degree(i) for k in f.images.get(i, {})):
            if report("grading", f"image of {labels[i]} is not homogeneous of degree {S.degree(i)}"):
                return violations
    if f.apply(S.unit_vector()) != T.unit_vector():
        if report("unit", "f(1) != 1"):
            return violations
    for i in range(S.dim):
        fi = f.apply(S.basis_vector(i))
        if T.comultiply(fi) != f.apply_tensor(S.coproduct.get(i, {})):
            if report("coproduct", f"Δf({labels[i]}) != (f⊗f)Δ({labels[i]})"):
                return violations
        if T.counit_of(fi) != S.counit.get(i, Fraction(0)):
            if report("counit", f"εf({labels[i]}) != ε({labels[i]})"):
                return violations
        for j in range(S.dim):
            lhs = f.apply(S.multiply_basis(i, j))
            rhs = T.multiply(fi, f.apply(S.basis_vector(j)))
            if lhs != rhs:
                if report("product", f"f({labels[i]}*{labels[j]}) != f({labels[i]})f({labels[j]})"):
                    return violations
    return violations


def exterior_morphism(
    source: ExplicitHopfAlgebra,
    target: ExplicitHopfAlgebra,
    generator_images: Sequence[Vector],
) -> HopfMorphism:
    """Extend generator images multiplicatively over the monomial basis of `source`."""
    if source.monomials is None:
        raise HopfEngineError("source algebra has no monomial basis")
    if len(generator_images) != len(source.generator_degrees):
        raise HopfEngineError("need one image per generator")
    images = {
        i: _ordered_product(target, [generator_images[k] for k in mono])
        for i, mono in source.monomials.items()
    }
    return HopfMorphism(source, target, images)


def lift_action(H: ExplicitHopfAlgebra, generator_matrix: sympy.Matrix) -> HopfMorphism:
    """
    把生成元上的线性作用提升为 H 上的代数自同态

    Column k of `generator_matrix` holds the image of generator k in the
    generator basis.
    """
    n = len(H.generator_degrees)
    if generator_matrix.shape != (n, n):
        raise HopfEngineError(f"action on {n} generators needs an {n}x{n} matrix")
    gen_index = [H.generator_index(k) for k in range(n)]
    images = [
        {gen_index[j]: to_fraction(generator_matrix[j, k]) for j in range(n) if generator_matrix[j, k] != 0}
        for k in range(n)
    ]
    return exterior_morphism(H, H, images)


def alternating_trace(f: HopfMorphism) -> Fraction:
    """Σ_r (-1)^r tr(f | H^r), summed straight off the diagonal."""
    H = f.source
    total = Fraction(0)
    for i in range(H.dim):
        total += koszul(H.degree(i), 1) * f.images.get(i, {}).get(i, Fraction(0))
    return total


# Primitive exactness

@dataclass
class ExactnessReport:
    injective: bool
    middle_exact: bool
    surjective: bool
    primitive_dims: Dict[str, int]
    per_degree: List[Dict[str, int]] = field(default_factory=list)
    iso_verified: Optional[bool] = None
    section_verified: Optional[bool] = None
    witness: str = ""

    @property
    def exact(self) -> bool:
        return self.injective and self.middle_exact and self.surjective


def _coordinates(basis_matrix: sympy.Matrix, keys: List[int], v: Vector) -> Tuple[Fraction, ...]:
    coords = solve(basis_matrix, dense(v, keys))
    if coords is None:
        raise HopfEngineError("image of a primitive element is not primitive")
    return coords


def _primitive_matrix(f: HopfMorphism, source: PrimitiveBasis, target: PrimitiveBasis) -> sympy.Matrix:
    keys = list(range(f.target.dim))
    target_matrix, _ = columns_to_matrix(target.as_vectors(), row_keys=keys)
    matrix = sympy.zeros(len(target), len(source))
    for j, v in enumerate(source.as_vectors()):
        for i, c in enumerate(_coordinates(target_matrix, keys, f.apply(v))):
            matrix[i, j] = sympy.Rational(c.numerator, c.denominator)
    return matrix


def check_primitive_exactness(iota_star: HopfMorphism, pi_star: HopfMorphism) -> ExactnessReport:
    """
    检查 0 -> PH(Q) -> PH(G) -> PH(N) -> 0 的正合性

    Args:
        iota_star: ι*: H(G) -> H(N)
        pi_star: π*: H(Q) -> H(G)

    When exact, a section s of ι* on primitives is extended multiplicatively
    and s ⊗ π*: H(N) ⊗ H(Q) -> H(G) is checked to be a bijective graded
    algebra morphism on the full basis.

    Raises:
        NotHopfMorphism: 任一映射与乘法或余乘法不交换
    """
    for name, f in (("ι*", iota_star), ("π*", pi_star)):
        violations = morphism_violations(f)
        if violations:
            raise NotHopfMorphism(f"{name} is not a Hopf-algebra morphism: {violations[0]}")
    if iota_star.source is not pi_star.target:
        raise HopfEngineError("ι* must start where π* lands")

    HG, HN, HQ = iota_star.source, iota_star.target, pi_star.source
    PG, PN, PQ = primitives(HG), primitives(HN), primitives(HQ)
    Pi = _primitive_matrix(pi_star, PQ, PG)
    Iota = _primitive_matrix(iota_star, PG, PN)

    rank_pi = rank(Pi)
    rank_iota = rank(Iota)
    composite_zero = len(PN) == 0 or len(PQ) == 0 or (Iota * Pi).is_zero_matrix
    report = ExactnessReport(
        injective=rank_pi == len(PQ),
        middle_exact=composite_zero and len(PG) - rank_iota == rank_pi,
        surjective=rank_iota == len(PN),
        primitive_dims={"N": len(PN), "G": len(PG), "Q": len(PQ)},
    )
    for r in sorted(set(PN.degrees) | set(PG.degrees) | set(PQ.degrees)):
        report.per_degree.append({
            "degree": r,
            "N": PN.count_by_degree().get(r, 0),
            "G": PG.count_by_degree().get(r, 0),
            "Q": PQ.count_by_degree().get(r, 0),
        })

    if not report.injective:
        coords = kernel(Pi, len(PQ))[0]
        report.witness = f"π* kills the primitive combination {list(map(str, coords))} of PH(Q)"
        return report
    if not report.middle_exact:
        report.witness = "ker(ι*|PH) differs from im(π*|PH)"
        return report
    if not report.surjective:
        report.witness = f"ι*|PH has rank {rank_iota} < dim PH(N) = {len(PN)}"
        return report

    report.section_verified, report.iso_verified, witness = _verify_splitting(iota_star, pi_star, PG, PN, Iota)
    if witness:
        report.witness = witness
    return report


def _verify_splitting(iota_star, pi_star, PG, PN, Iota) -> Tuple[bool, bool, str]:
    HG, HN, HQ = iota_star.source, iota_star.target, pi_star.source
    pg_vectors = PG.as_vectors()

    # s on primitives: ι*(s(n_k)) = n_k
    section: List[Vector] = []
    for k in range(len(PN)):
        coords = solve(Iota, [int(i == k) for i in range(len(PN))])
        vec: Vector = {}
        for c, g in zip(coords, pg_vectors):
            add_into(vec, g, c)
        section.append(vec)

    # Express H(N) in monomials of PN via the structure theorem, then push through s
    n_images = monomial_images(HN, PN.as_vectors(), PN.degrees)
    if len(n_images) != HN.dim:
        return False, False, "H(N) is not the exterior algebra on its primitives"
    mono_matrix, _ = columns_to_matrix([img for _, _, img in n_images], row_keys=list(range(HN.dim)))
    if rank(mono_matrix) != HN.dim:
        return False, False, "H(N) is not the exterior algebra on its primitives"
    inverse = mono_matrix.inv()
    s_monomials = [_ordered_product(HG, [section[k] for k in _bits(mask)]) for mask, _, _ in n_images]
    s_full: Dict[int, Vector] = {}
    for i in range(HN.dim):
        vec = {}
        for m in range(len(n_images)):
            c = inverse[m, i]
            if c != 0:
                add_into(vec, s_monomials[m], to_fraction(c))
        s_full[i] = vec
    s = HopfMorphism(HN, HG, s_full)

    section_ok = all(iota_star.apply(s_full[i]) == HN.basis_vector(i) for i in range(HN.dim))

    T = hopf_tensor(HN, HQ, verify=False)
    nq = HQ.dim
    phi = {
        a * nq + b: HG.multiply(s_full[a], pi_star.apply(HQ.basis_vector(b)))
        for a in range(HN.dim) for b in range(nq)
    }
    splitting = HopfMorphism(T, HG, phi)
    matrix, _ = columns_to_matrix([phi[i] for i in range(T.dim)], row_keys=list(range(HG.dim)))
    bijective = T.dim == HG.dim and rank(matrix) == HG.dim
    if not bijective:
        return section_ok, False, "s ⊗ π* is not bijective"
    for x in range(T.dim):
        for y in range(T.dim):
            if splitting.apply(T.multiply_basis(x, y)) != HG.multiply(phi[x], phi[y]):
                labels = T.basis.labels
                return section_ok, False, f"s ⊗ π* is not multiplicative on {labels[x]}, {labels[y]}"
    if any(T.degree(i) != HG.degree(k) for i, v in phi.items() for k in v):
        return section_ok, False, "s ⊗ π* does not preserve degrees"
    return section_ok, True, "" if section_ok else "s is not a section of ι*"


# Bridge to the cohomology presentation

@dataclass
class ExtensionTriple:
    normal: ExplicitHopfAlgebra
    total: ExplicitHopfAlgebra
    quotient: ExplicitHopfAlgebra
    iota_star: HopfMorphism
    pi_star: HopfMorphism


def algebra_of(expr: GroupExpr, cap: Optional[int] = None) -> ExplicitHopfAlgebra:
    pres = presentation(expr)
    return exterior_hopf(pres.degrees, names=pres.labels, cap=cap)


def extension_triple(expr: GroupExpr, cap: Optional[int] = None) -> ExtensionTriple:
    """
    由 Extension{N, Q} 构造 H(N), H(G), H(Q) 以及按生成元标签匹配的 ι*, π*
    """
    expr = normalize(expr)
    if not isinstance(expr, Extension):
        raise HopfEngineError("extension_triple needs an Extension node")
    pres_n = presentation(expr.normal)
    pres_q = presentation(expr.quotient)
    pres_g = presentation(expr)
    HN = exterior_hopf(pres_n.degrees, names=pres_n.labels, cap=cap)
    HQ = exterior_hopf(pres_q.degrees, names=pres_q.labels, cap=cap)
    HG = exterior_hopf(pres_g.degrees, names=pres_g.labels, cap=cap)

    g_position = {label: k for k, label in enumerate(pres_g.labels)}
    n_position = {label: k for k, label in enumerate(pres_n.labels)}

    pi_images = [{1 << g_position[join_path("ext.q", label)]: ONE} for label in pres_q.labels]
    iota_images: List[Vector] = []
    for label in pres_g.labels:
        if label.startswith("ext.n."):
            iota_images.append({1 << n_position[label[len("ext.n."):]]: ONE})
        else:
            iota_images.append({})

    return ExtensionTriple(
        normal=HN,
        total=HG,
        quotient=HQ,
        iota_star=exterior_morphism(HG, HN, iota_images),
        pi_star=exterior_morphism(HQ, HG, pi_images),
    )


def split_triple(
    normal_degrees: Sequence[int],
    quotient_degrees: Sequence[int],
    cap: Optional[int] = None,
) -> ExtensionTriple:
    """Canonically split triple Λ(N) <- Λ(N ⊕ Q) <- Λ(Q) on bare degree lists."""
    n = len(normal_degrees)
    HN = exterior_hopf(normal_degrees, cap=cap)
    HQ = exterior_hopf(quotient_degrees, names=[f"y{k}" for k in range(len(quotient_degrees))], cap=cap)
    HG = exterior_hopf(
        list(normal_degrees) + list(quotient_degrees),
        names=[f"x{k}" for k in range(n)] + [f"y{k}" for k in range(len(quotient_degrees))],
        cap=cap,
    )
    iota_images = [{1 << k: ONE} if k < n else {} for k in range(len(HG.generator_degrees))]
    pi_images = [{1 << (n + k): ONE} for k in range(len(quotient_degrees))]
    return ExtensionTriple(
        normal=HN,
        total=HG,
        quotient=HQ,
        iota_star=exterior_morphism(HG, HN, iota_images),
        pi_star=exterior_morphism(HQ, HG, pi_images),
    )


def killing_pi_star(triple: ExtensionTriple, generator: int = 0) -> HopfMorphism:
    """Negative control: π* with one quotient generator sent to 0 (still a Hopf morphism, no longer injective)."""
    images = [
        {} if k == generator else dict(triple.pi_star.images[1 << k])
        for k in range(len(triple.quotient.generator_degrees))
    ]
    return exterior_morphism(triple.quotient, triple.total, images)


def perturbed_coproduct(H: ExplicitHopfAlgebra, i: int, extra: Tensor) -> ExplicitHopfAlgebra:
    """Negative control: copy of H with `extra` added to Δ(e_i)."""
    coproduct = {k: dict(v) for k, v in H.coproduct.items()}
    add_into(coproduct.setdefault(i, {}), extra)
    return ExplicitHopfAlgebra(
        H.basis, H.product, coproduct, H.counit,
        monomials=H.monomials, generator_degrees=H.generator_degrees, name=f"{H.name}~",
    )
