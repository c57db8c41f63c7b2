"""
Cohomology - 群簇的 l-adic 上同调表示

H*(G) 是奇数次本原生成元上的外代数。生成元按结构分解收集:
- Trivial / Ga: 没有高次上同调
- Torus{n}: n 个 1 次生成元 (Frobenius 权 q)
- AbelianVariety{g}: 2g 个 1 次生成元 (Weil 数, 由 charpoly 描述)
- 单连通单群: 每个不变量次数 d 给出一个 2d-1 次生成元 (权 q^d)
- Extension / Product: 生成元的并；Isogenous: 透明
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import sympy

from .core_model import (
    AbelianVariety,
    GL,
    GroupExpr,
    SimplyConnectedSimple,
    Torus,
    iter_leaves,
    join_path,
    leaf_segment,
    normalize,
)

T = sympy.Symbol("t")


@dataclass(frozen=True)
class LinearWeight:
    """Standard Frobenius eigenvalue q^d on a generator of degree 2d - 1."""
    d: int


@dataclass(frozen=True)
class AbelianSlot:
    """One of the 2g degree-1 slots of an abelian variety; `node` is the tree path of that variety."""
    node: str
    index: int
    g: int
    charpoly: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class Unspecified:
    pass


FrobeniusAnnotation = Union[LinearWeight, AbelianSlot, Unspecified]


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    frobenius: FrobeniusAnnotation = Unspecified()

    def __post_init__(self):
        if self.degree <= 0 or self.degree % 2 == 0:
            raise ValueError(f"generator {self.label} must have odd positive degree, got {self.degree}")
        if isinstance(self.frobenius, LinearWeight) and self.degree != 2 * self.frobenius.d - 1:
            raise ValueError(f"generator {self.label}: weight q^{self.frobenius.d} needs degree {2 * self.frobenius.d - 1}")

    @property
    def sort_key(self) -> Tuple[int, str]:
        return self.degree, self.label


@dataclass(frozen=True)
class CohomologyPresentation:
    generators: Tuple[Generator, ...] = ()

    @classmethod
    def of(cls, generators) -> "CohomologyPresentation":
        return cls(tuple(sorted(generators, key=lambda g: g.sort_key)))

    @classmethod
    def from_degrees(cls, degrees: List[int], prefix: str = "x") -> "CohomologyPresentation":
        return cls.of(Generator(f"{prefix}{i}", d) for i, d in enumerate(degrees))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def degrees(self) -> List[int]:
        return [g.degree for g in self.generators]

    @property
    def labels(self) -> List[str]:
        return [g.label for g in self.generators]

    def by_label(self) -> Dict[str, Generator]:
        return {g.label: g for g in self.generators}

    def union(self, other: "CohomologyPresentation") -> "CohomologyPresentation":
        return CohomologyPresentation.of(self.generators + other.generators)

    def relabel(self, prefix: str) -> "CohomologyPresentation":
        return CohomologyPresentation.of(
            Generator(join_path(prefix, g.label), g.degree, g.frobenius) for g in self.generators
        )


@dataclass(frozen=True)
class PoincarePolynomial:
    """coeffs[r] = dim H^r."""
    coeffs: Tuple[int, ...] = (1,)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "PoincarePolynomial":
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)), T, domain=sympy.ZZ)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, r: int) -> int:
        if 0 <= r < len(self.coeffs):
            return self.coeffs[r]
        return 0

    def evaluate(self, x: int) -> int:
        return sum(c * x ** r for r, c in enumerate(self.coeffs))

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial.from_sympy(self.to_sympy() * other.to_sympy())

    def __str__(self) -> str:
        terms = []
        for r, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if r == 0:
                terms.append(str(c))
            else:
                power = "t" if r == 1 else f"t^{r}"
                terms.append(power if c == 1 else f"{c}{power}")
        return " + ".join(terms) if terms else "0"


def _leaf_generators(path: str, leaf: GroupExpr) -> List[Generator]:
    base = join_path(path, leaf_segment(leaf))
    if isinstance(leaf, Torus):
        return [Generator(f"{base}.g{k}", 1, LinearWeight(1)) for k in range(1, leaf.rank + 1)]
    if isinstance(leaf, AbelianVariety):
        return [
            Generator(f"{base}.g{k}", 1, AbelianSlot(base, k, leaf.g, leaf.frobenius_charpoly))
            for k in range(1, 2 * leaf.g + 1)
        ]
    if isinstance(leaf, SimplyConnectedSimple):
        return [
            Generator(f"{base}.g{k}", 2 * d - 1, LinearWeight(d))
            for k, d in enumerate(leaf.type.degrees(), start=1)
        ]
    # Trivial and unipotent groups have no higher cohomology
    return []


def presentation(expr: GroupExpr) -> CohomologyPresentation:
    """
    计算 H*(G) 的外代数生成元

    Labels follow the normalized tree, so isogenies and product bracketing
    never change the presentation.
    """
    generators: List[Generator] = []
    for path, leaf in iter_leaves(normalize(expr)):
        generators.extend(_leaf_generators(path, leaf))
    return CohomologyPresentation.of(generators)


def poincare(pres: CohomologyPresentation) -> PoincarePolynomial:
    """prod (1 + t^deg) over the generators, exact integer coefficients."""
    poly = sympy.Poly(1, T, domain=sympy.ZZ)
    for degree in pres.degrees:
        poly = poly * sympy.Poly(1 + T ** degree, T, domain=sympy.ZZ)
    return PoincarePolynomial.from_sympy(poly)


def betti(pres: CohomologyPresentation, r: int) -> int:
    if r < 0:
        raise ValueError("cohomological degree must be nonnegative")
    return poincare(pres).coefficient(r)


def h1(pres: CohomologyPresentation) -> int:
    return sum(1 for g in pres.generators if g.degree == 1)


def euler_characteristic(pres: CohomologyPresentation) -> int:
    # every factor (1 + (-1)^odd) vanishes
    return 1 if len(pres) == 0 else 0


def cohomological_dimension(pres: CohomologyPresentation) -> int:
    return sum(pres.degrees)


def subgroup_splitting_witness(n: int) -> Dict[str, object]:
    """
    GL_n 对角环面的反例: 非正规子群不给出张量分解

    dim H^1(GL_n) = 1 while dim H^1(G_m^n) = n, so H*(T) cannot be a tensor
    factor of H*(GL_n) for n >= 2.
    """
    gl = presentation(GL(n))
    torus = presentation(Torus(n))
    return {
        "n": n,
        "h1_gl": h1(gl),
        "h1_torus": h1(torus),
        "poincare_differs": poincare(gl) != poincare(presentation(Torus(n * n))),
        "fails_to_split": h1(gl) < h1(torus),
    }
