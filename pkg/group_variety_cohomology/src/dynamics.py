"""
Dynamics - 分次迹、d_n 序列、动力学 zeta 级数与 Lefschetz 点数

核心恒等式: 奇数次本原生成元上的外代数中,
    Σ_r (-1)^r tr(σ* | H^r) = det(I - σ*|PH)
因此分次迹是各块 det(I - M_block) 的乘积。迭代 σ^n 用精确的矩阵幂
(companion matrix 用任意精度整数)，从不提取特征根。
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .cohomology import AbelianSlot, CohomologyPresentation, LinearWeight, presentation
from .core_model import AbelianVariety, GroupExpr, SimplyConnectedSimple, Torus, Unipotent, ensure_valid, iter_leaves, linear_dim, normalize
from .errors import BadCharPolyConstantTerm, BlockMismatch, DynamicsError, MissingCharPoly, NotPrime
from .hopf_engine import alternating_trace, exterior_hopf, lift_action
from .linalg import to_fraction

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")
COMPONENT_SUFFIX = re.compile(r"\.g\d+$")


@dataclass(frozen=True)
class RationalMatrix:
    matrix: sympy.ImmutableMatrix

    @classmethod
    def of(cls, rows) -> "RationalMatrix":
        return cls(sympy.ImmutableMatrix([[sympy.Rational(x) for x in row] for row in rows]))

    @classmethod
    def scalar(cls, value) -> "RationalMatrix":
        return cls(sympy.ImmutableMatrix([[sympy.Rational(value)]]))

    @property
    def size(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class IntCharPoly:
    """Monic integer polynomial, coefficients leading term first; acts via its companion matrix."""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise DynamicsError(f"characteristic polynomial {self.coeffs} must be monic")

    @property
    def size(self) -> int:
        return len(self.coeffs) - 1

    def companion(self) -> sympy.Matrix:
        k = self.size
        matrix = sympy.zeros(k, k)
        for i in range(1, k):
            matrix[i, i - 1] = 1
        # last column: -c_0, -c_1, ..., -c_{k-1}
        for i in range(k):
            matrix[i, k - 1] = -self.coeffs[k - i]
        return matrix


BlockAction = Union[RationalMatrix, IntCharPoly]


@dataclass(frozen=True)
class Block:
    labels: Tuple[str, ...]
    action: BlockAction

    def matrix(self) -> sympy.Matrix:
        if isinstance(self.action, IntCharPoly):
            return self.action.companion()
        return sympy.Matrix(self.action.matrix)

    @property
    def kind(self) -> str:
        return "charpoly" if isinstance(self.action, IntCharPoly) else "matrix"


@dataclass(frozen=True)
class EndomorphismAction:
    blocks: Tuple[Block, ...] = ()

    @classmethod
    def scalar(cls, pres: CohomologyPresentation, value) -> "EndomorphismAction":
        return cls(tuple(Block((g.label,), RationalMatrix.scalar(value)) for g in pres.generators))

    @classmethod
    def identity(cls, pres: CohomologyPresentation) -> "EndomorphismAction":
        return cls.scalar(pres, 1)

    def relabel(self, prefix: str) -> "EndomorphismAction":
        return EndomorphismAction(tuple(
            Block(tuple(f"{prefix}.{label}" for label in block.labels), block.action) for block in self.blocks
        ))

    def __add__(self, other: "EndomorphismAction") -> "EndomorphismAction":
        return EndomorphismAction(self.blocks + other.blocks)


@dataclass(frozen=True)
class TraceSequence:
    values: Tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        """1-based: seq[n] = d_n"""
        return self.values[n - 1]


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def component_of(label: str) -> str:
    """Structural component of a generator; labels without a `.gN` ordinal share one unstructured component."""
    if not COMPONENT_SUFFIX.search(label):
        return ""
    return COMPONENT_SUFFIX.sub("", label)


def check_coverage(pres: CohomologyPresentation, act: EndomorphismAction) -> None:
    """
    Raises:
        BlockMismatch: blocks 不恰好划分生成元集合，或块内次数 / 结构分量不一致，或矩阵尺寸不符
    """
    generators = pres.by_label()
    seen: Dict[str, int] = {}
    for b, block in enumerate(act.blocks):
        for label in block.labels:
            if label not in generators:
                raise BlockMismatch(f"block {b} names unknown generator {label!r}")
            if label in seen:
                raise BlockMismatch(f"generator {label!r} appears in blocks {seen[label]} and {b}")
            seen[label] = b
        if block.action.size != len(block.labels):
            raise BlockMismatch(
                f"block {b} acts on {len(block.labels)} generators but its action has size {block.action.size}"
            )
        degrees = {generators[label].degree for label in block.labels}
        if len(degrees) > 1:
            raise BlockMismatch(f"block {b} mixes degrees {sorted(degrees)}")
        components = {component_of(label) for label in block.labels}
        if len(components) > 1:
            raise BlockMismatch(
                f"block {b} spans components {sorted(components)}; non-split actions are not supported"
            )
    missing = [label for label in generators if label not in seen]
    if missing:
        raise BlockMismatch(f"generators without an action: {missing}")


def _det_one_minus(matrix: sympy.Matrix) -> Fraction:
    return to_fraction((sympy.eye(matrix.rows) - matrix).det())


def graded_trace(pres: CohomologyPresentation, act: EndomorphismAction) -> Fraction:
    """tr(σ*) = Σ (-1)^r tr(σ* | H^r) = ∏_blocks det(I - M_block)"""
    check_coverage(pres, act)
    result = Fraction(1)
    for block in act.blocks:
        result *= _det_one_minus(block.matrix())
        if not result:
            break
    return result


def d_sequence(pres: CohomologyPresentation, act: EndomorphismAction, N: int) -> TraceSequence:
    """d_n = tr((σ^n)*) for n = 1..N"""
    if N < 1:
        raise DynamicsError("N must be a positive integer")
    check_coverage(pres, act)
    matrices = [block.matrix() for block in act.blocks]
    powers = [sympy.eye(m.rows) for m in matrices]
    values: List[Fraction] = []
    for _ in range(N):
        powers = [p * m for p, m in zip(powers, matrices)]
        value = Fraction(1)
        for p in powers:
            value *= _det_one_minus(p)
        values.append(value)
    return TraceSequence(tuple(values))


def zeta_series(seq: TraceSequence, order: int) -> TruncatedSeries:
    """
    exp(Σ_{n<=order} d_n t^n / n) 截断到 t^order

    Coefficients follow z_0 = 1, k z_k = Σ_{n=1..k} d_n z_{k-n}.
    """
    if order < 1 or order > len(seq):
        raise DynamicsError(f"order must lie in 1..{len(seq)}, got {order}")
    z = [Fraction(1)]
    for k in range(1, order + 1):
        z.append(sum((seq[n] * z[k - n] for n in range(1, k + 1)), Fraction(0)) / k)
    return TruncatedSeries(tuple(z))


# Frobenius

def _abelian_blocks(pres: CohomologyPresentation) -> Dict[str, List]:
    groups: Dict[str, List] = {}
    for g in pres.generators:
        if isinstance(g.frobenius, AbelianSlot):
            groups.setdefault(g.frobenius.node, []).append(g)
    return groups


def _frobenius(pres: CohomologyPresentation, linear_scalar, overridden: Collection[str] = ()) -> EndomorphismAction:
    blocks: List[Block] = []
    for g in pres.generators:
        if isinstance(g.frobenius, LinearWeight):
            blocks.append(Block((g.label,), RationalMatrix.scalar(linear_scalar(g.frobenius.d))))
        elif not isinstance(g.frobenius, AbelianSlot):
            raise BlockMismatch(f"generator {g.label} carries no Frobenius annotation")
    for node, gens in _abelian_blocks(pres).items():
        if all(g.label in overridden for g in gens):
            continue
        charpoly = gens[0].frobenius.charpoly
        if charpoly is None:
            raise MissingCharPoly(f"abelian variety at {node} has no Frobenius charpoly",
                                  hint="write abelian(g; <charpoly>)")
        labels = tuple(g.label for g in sorted(gens, key=lambda g: g.frobenius.index))
        blocks.append(Block(labels, IntCharPoly(tuple(charpoly))))
    return EndomorphismAction(tuple(blocks))


def frobenius_action(pres: CohomologyPresentation, q: int, overridden: Collection[str] = ()) -> EndomorphismAction:
    """
    Standard Frobenius of the split form: q^d on a degree 2d-1 generator, charpolys on abelian blocks.

    Abelian varieties whose generators all appear in `overridden` are left out
    instead of requiring a stored charpoly.
    """
    return _frobenius(pres, lambda d: sympy.Integer(q) ** d, overridden)


def arithmetic_frobenius_action(pres: CohomologyPresentation, q: int) -> EndomorphismAction:
    """Inverse weights q^-d on linear generators; abelian blocks unchanged."""
    return _frobenius(pres, lambda d: sympy.Rational(1, q ** d))


def check_weil_functional_equation(charpoly: Sequence[int], q: int, g: int) -> bool:
    """t^{2g} P(q/t) = q^g P(t)"""
    poly = sympy.Poly(list(charpoly), T)
    reflected = sympy.Poly(sympy.expand(T ** (2 * g) * poly.as_expr().subs(T, sympy.Rational(q) / T)), T)
    return reflected == sympy.Poly(q ** g * poly.as_expr(), T)


def _check_prime(q: int) -> None:
    if not isinstance(q, int) or not sympy.isprime(q):
        raise NotPrime(f"field size {q} must be a prime")


def _abelian_count(leaf: AbelianVariety, q: int, path: str) -> int:
    if leaf.frobenius_charpoly is None:
        raise MissingCharPoly(f"abelian variety at {path or 'root'} has no Frobenius charpoly",
                              hint="write abelian(g; <charpoly>)")
    charpoly = leaf.frobenius_charpoly
    if charpoly[-1] != q ** leaf.g:
        raise BadCharPolyConstantTerm(
            f"charpoly constant term {charpoly[-1]} at {path or 'root'} must be q^g = {q ** leaf.g}"
        )
    if not check_weil_functional_equation(charpoly, q, leaf.g):
        logger.warning("charpoly %s at %s fails the Weil functional equation for q=%s", charpoly, path or "root", q)
    return sum(charpoly)


def lefschetz_point_count(expr: GroupExpr, q: int) -> int:
    """
    #G(F_q)，沿结构树相乘

    Raises:
        MissingCharPoly / BadCharPolyConstantTerm: 阿贝尔簇节点的 charpoly 缺失或常数项不是 q^g
    """
    _check_prime(q)
    ensure_valid(expr)
    total = 1
    for path, leaf in iter_leaves(normalize(expr)):
        if isinstance(leaf, Unipotent):
            total *= q ** leaf.dim
        elif isinstance(leaf, Torus):
            total *= (q - 1) ** leaf.rank
        elif isinstance(leaf, SimplyConnectedSimple):
            # q^dim ∏ (1 - q^-d) = q^{#positive roots} ∏ (q^d - 1)
            count = q ** leaf.type.positive_root_count
            for d in leaf.type.degrees():
                count *= q ** d - 1
            total *= count
        elif isinstance(leaf, AbelianVariety):
            total *= _abelian_count(leaf, q, path)
    return total


def trace_point_count(expr: GroupExpr, q: int) -> int:
    """q^{dim G_lin} · tr(arithmetic Frobenius)，与 lefschetz_point_count 互相校验"""
    _check_prime(q)
    ensure_valid(expr)
    pres = presentation(expr)
    for path, leaf in iter_leaves(normalize(expr)):
        if isinstance(leaf, AbelianVariety):
            _abelian_count(leaf, q, path)
    value = Fraction(q) ** linear_dim(expr) * graded_trace(pres, arithmetic_frobenius_action(pres, q))
    if value.denominator != 1:
        raise DynamicsError(f"trace formula produced the non-integer {value}")
    return int(value)


# Brute-force oracle for the determinant formula

def action_matrix(pres: CohomologyPresentation, act: EndomorphismAction) -> sympy.Matrix:
    """Assemble the block action as one matrix in presentation order."""
    check_coverage(pres, act)
    position = {label: k for k, label in enumerate(pres.labels)}
    matrix = sympy.zeros(len(pres), len(pres))
    for block in act.blocks:
        m = block.matrix()
        for a, row_label in enumerate(block.labels):
            for b, col_label in enumerate(block.labels):
                matrix[position[row_label], position[col_label]] = m[a, b]
    return matrix


def brute_force_trace(pres: CohomologyPresentation, act: EndomorphismAction, power: int = 1, cap: Optional[int] = None) -> Fraction:
    """Lift σ^power to the explicit exterior algebra and sum (-1)^r tr over every degree."""
    H = exterior_hopf(pres.degrees, names=pres.labels, cap=cap)
    return alternating_trace(lift_action(H, action_matrix(pres, act) ** power))
