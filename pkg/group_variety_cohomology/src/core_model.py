"""
Core Model - 群簇的结构语法树

提供:
- DynkinType 与 Weyl 不变量次数表 (从 data/invariant_degrees.yaml 读取)
- GroupExpr 节点: Trivial / Unipotent / Torus / SimplyConnectedSimple /
  AbelianVariety / Extension / Product / Isogenous
- validate / normalize / dim
- 结构分层 (unipotent radical, radical torus, semisimple part, linear / abelian part)
- 内建语法糖 GL(n), SL(n), PGL(n)

所有节点都是不可变的 frozen dataclass，可以安全地在线程之间传递。
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple, Union

from .config import degree_table, exceptional_degrees
from .errors import ValidationFailed

CLASSICAL_FAMILIES = ("A", "B", "C", "D")
EXCEPTIONAL_RANKS = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}


@dataclass(frozen=True)
class DynkinType:
    """Simple root system type; `family` is A/B/C/D or one of E6, E7, E8, F4, G2."""
    family: str
    rank: int

    @classmethod
    def of(cls, name: str) -> "DynkinType":
        """Build from a name such as "A2" or "E8"."""
        name = name.strip()
        if name in EXCEPTIONAL_RANKS:
            return cls(name, EXCEPTIONAL_RANKS[name])
        family, digits = name[:1], name[1:]
        if family not in CLASSICAL_FAMILIES or not digits.isdigit():
            raise ValueError(f"unknown Dynkin type {name!r}")
        return cls(family, int(digits))

    @property
    def name(self) -> str:
        if self.family in EXCEPTIONAL_RANKS:
            return self.family
        return f"{self.family}{self.rank}"

    @property
    def is_exceptional(self) -> bool:
        return self.family in EXCEPTIONAL_RANKS

    def admissibility_error(self) -> Optional[Tuple[str, Optional[str]]]:
        """Return (message, hint) when the type violates the canonical rank conventions."""
        table = degree_table()
        if self.is_exceptional:
            expected = EXCEPTIONAL_RANKS[self.family]
            if self.rank != expected:
                return f"{self.family} has fixed rank {expected}, got {self.rank}", None
            return None
        if self.family not in CLASSICAL_FAMILIES:
            return f"unknown family {self.family!r}", None
        min_rank = table["classical"][self.family]["min_rank"]
        if self.rank < min_rank:
            hint = table.get("low_rank_hints", {}).get(self.name)
            return f"{self.family} requires rank >= {min_rank}, got {self.rank}", hint
        return None

    def degrees(self) -> List[int]:
        """Degrees d_i of the fundamental Weyl-group invariants."""
        n = self.rank
        if self.is_exceptional:
            return exceptional_degrees(self.family)
        if self.family == "A":
            return list(range(2, n + 2))
        if self.family in ("B", "C"):
            return [2 * i for i in range(1, n + 1)]
        # D_n: 2, 4, ..., 2n-2 and the Pfaffian-type invariant of degree n
        return sorted([2 * i for i in range(1, n)] + [n])

    @property
    def dimension(self) -> int:
        return sum(2 * d - 1 for d in self.degrees())

    @property
    def positive_root_count(self) -> int:
        return sum(d - 1 for d in self.degrees())


# GroupExpr nodes

@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class Unipotent:
    dim: int


@dataclass(frozen=True)
class Torus:
    rank: int


@dataclass(frozen=True)
class SimplyConnectedSimple:
    type: DynkinType


@dataclass(frozen=True)
class AbelianVariety:
    """Abelian variety of dimension g; charpoly coefficients are stored leading term first."""
    g: int
    frobenius_charpoly: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class Extension:
    """e -> normal -> G -> quotient -> e"""
    normal: "GroupExpr"
    quotient: "GroupExpr"


@dataclass(frozen=True)
class Product:
    factors: Tuple["GroupExpr", ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class Isogenous:
    inner: "GroupExpr"


GroupExpr = Union[
    Trivial, Unipotent, Torus, SimplyConnectedSimple, AbelianVariety, Extension, Product, Isogenous
]

LEAF_TYPES = (Trivial, Unipotent, Torus, SimplyConnectedSimple, AbelianVariety)


@dataclass(frozen=True)
class ValidationIssue:
    path: str
    code: str
    message: str
    hint: Optional[str] = None

    def __str__(self) -> str:
        text = f"[{self.code}] at {self.path}: {self.message}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


# Tree paths

def child_segments(expr: GroupExpr) -> List[Tuple[str, GroupExpr]]:
    """(segment, child) pairs; segments compose into node paths and generator labels."""
    if isinstance(expr, Extension):
        return [("ext.n", expr.normal), ("ext.q", expr.quotient)]
    if isinstance(expr, Product):
        return [(f"prod.{i}", factor) for i, factor in enumerate(expr.factors)]
    if isinstance(expr, Isogenous):
        return [("isog", expr.inner)]
    return []


def leaf_segment(expr: GroupExpr) -> str:
    if isinstance(expr, Unipotent):
        return "ga"
    if isinstance(expr, Torus):
        return "torus"
    if isinstance(expr, SimplyConnectedSimple):
        return f"ss.{expr.type.name}"
    if isinstance(expr, AbelianVariety):
        return "ab"
    return "trivial"


def join_path(prefix: str, segment: str) -> str:
    return f"{prefix}.{segment}" if prefix else segment


def iter_leaves(expr: GroupExpr, prefix: str = "") -> Iterator[Tuple[str, GroupExpr]]:
    """Yield (path, leaf) in left-to-right tree order."""
    if isinstance(expr, LEAF_TYPES):
        yield prefix, expr
        return
    for segment, child in child_segments(expr):
        yield from iter_leaves(child, join_path(prefix, segment))


# Operations

def validate(expr: GroupExpr) -> List[ValidationIssue]:
    """
    检查所有 rank / 维数不变量

    Returns:
        空列表表示通过；否则每个问题都带有出错节点的路径
    """
    issues: List[ValidationIssue] = []
    _validate_node(expr, "root", issues)
    return issues


def _validate_node(expr: GroupExpr, path: str, issues: List[ValidationIssue]) -> None:
    if isinstance(expr, Unipotent) and expr.dim < 0:
        issues.append(ValidationIssue(path, "NegativeDimension", f"Ga dimension {expr.dim} < 0"))
    elif isinstance(expr, Torus) and expr.rank < 0:
        issues.append(ValidationIssue(path, "NegativeDimension", f"torus rank {expr.rank} < 0"))
    elif isinstance(expr, SimplyConnectedSimple):
        problem = expr.type.admissibility_error()
        if problem is not None:
            message, hint = problem
            issues.append(ValidationIssue(path, "RankOutOfRange", message, hint))
    elif isinstance(expr, AbelianVariety):
        if expr.g < 0:
            issues.append(ValidationIssue(path, "NegativeDimension", f"abelian dimension {expr.g} < 0"))
        elif expr.frobenius_charpoly is not None:
            poly = expr.frobenius_charpoly
            degree = len(poly) - 1
            if degree != 2 * expr.g:
                issues.append(ValidationIssue(
                    path, "BadCharPolyDegree",
                    f"charpoly has degree {degree}, expected 2g = {2 * expr.g}",
                ))
            elif poly[0] != 1:
                issues.append(ValidationIssue(path, "BadCharPolyDegree", f"charpoly is not monic (leading {poly[0]})"))
    elif isinstance(expr, Product) and not expr.factors:
        issues.append(ValidationIssue(path, "EmptyProduct", "prod() needs at least one factor"))

    for segment, child in child_segments(expr):
        _validate_node(child, f"{path}.{segment}", issues)


def ensure_valid(expr: GroupExpr) -> GroupExpr:
    issues = validate(expr)
    if issues:
        raise ValidationFailed.from_issues(issues)
    return expr


def normalize(expr: GroupExpr) -> GroupExpr:
    """
    去掉 Isogenous 节点 (同源不改变上同调) 并把 Product 从左到右折叠成嵌套 Extension
    """
    if isinstance(expr, Isogenous):
        return normalize(expr.inner)
    if isinstance(expr, Extension):
        return Extension(normalize(expr.normal), normalize(expr.quotient))
    if isinstance(expr, Product):
        factors = [normalize(f) for f in expr.factors]
        if not factors:
            return Trivial()
        result = factors[0]
        for factor in factors[1:]:
            result = Extension(result, factor)
        return result
    return expr


def leaf_dim(leaf: GroupExpr) -> int:
    if isinstance(leaf, Unipotent):
        return leaf.dim
    if isinstance(leaf, Torus):
        return leaf.rank
    if isinstance(leaf, AbelianVariety):
        return leaf.g
    if isinstance(leaf, SimplyConnectedSimple):
        return leaf.type.dimension
    return 0


def dim(expr: GroupExpr) -> int:
    """Algebraic dimension; additive over Extension / Product, Isogenous is transparent."""
    return sum(leaf_dim(leaf) for _, leaf in iter_leaves(expr))


def unipotent_dim(expr: GroupExpr) -> int:
    return sum(leaf.dim for _, leaf in iter_leaves(expr) if isinstance(leaf, Unipotent))


def abelian_dim(expr: GroupExpr) -> int:
    return sum(leaf.g for _, leaf in iter_leaves(expr) if isinstance(leaf, AbelianVariety))


def linear_dim(expr: GroupExpr) -> int:
    return dim(expr) - abelian_dim(expr)


# Structure layers

@dataclass(frozen=True)
class StructureLayers:
    """
    结构塔:
        G_lin = R_u . R(G) . G_ss,  G / G_lin = G_ab

    每一层都是由对应叶子拼成的 GroupExpr (相差同源)。
    """
    unipotent_radical: GroupExpr
    radical_torus: GroupExpr
    semisimple_part: GroupExpr
    linear_part: GroupExpr
    abelian_part: GroupExpr

    def as_dict(self) -> dict:
        return {
            "unipotent_radical": self.unipotent_radical,
            "radical_torus": self.radical_torus,
            "semisimple_part": self.semisimple_part,
            "linear_part": self.linear_part,
            "abelian_part": self.abelian_part,
        }


def _assemble(leaves: List[GroupExpr]) -> GroupExpr:
    if not leaves:
        return Trivial()
    return normalize(Product(tuple(leaves)))


def structure_layers(expr: GroupExpr) -> StructureLayers:
    leaves = [leaf for _, leaf in iter_leaves(normalize(expr))]
    unipotent = [leaf for leaf in leaves if isinstance(leaf, Unipotent)]
    tori = [leaf for leaf in leaves if isinstance(leaf, Torus)]
    simple = [leaf for leaf in leaves if isinstance(leaf, SimplyConnectedSimple)]
    abelian = [leaf for leaf in leaves if isinstance(leaf, AbelianVariety)]
    return StructureLayers(
        unipotent_radical=_assemble(unipotent),
        radical_torus=_assemble(tori),
        semisimple_part=_assemble(simple),
        linear_part=_assemble(unipotent + tori + simple),
        abelian_part=_assemble(abelian),
    )


def _leaf_kinds(expr: GroupExpr) -> set:
    return {
        type(leaf) for _, leaf in iter_leaves(expr)
        if not isinstance(leaf, Trivial) and leaf_dim(leaf) > 0
    }


def is_linear(expr: GroupExpr) -> bool:
    return AbelianVariety not in _leaf_kinds(expr)


def is_reductive(expr: GroupExpr) -> bool:
    return _leaf_kinds(expr) <= {Torus, SimplyConnectedSimple}


def is_semisimple(expr: GroupExpr) -> bool:
    return _leaf_kinds(expr) <= {SimplyConnectedSimple}


def is_abelian_variety(expr: GroupExpr) -> bool:
    return _leaf_kinds(expr) <= {AbelianVariety}


# Builtins

def SL(n: int) -> GroupExpr:
    if n < 1:
        raise ValueError("SL(n) needs n >= 1")
    if n == 1:
        return Trivial()
    return SimplyConnectedSimple(DynkinType("A", n - 1))


def GL(n: int) -> GroupExpr:
    """GL_n from the exact sequence SL_n -> GL_n -> G_m."""
    if n < 1:
        raise ValueError("GL(n) needs n >= 1")
    if n == 1:
        return Torus(1)
    return Extension(SL(n), Torus(1))


def PGL(n: int) -> GroupExpr:
    return Isogenous(SL(n))


BUILTINS = {"GL": GL, "SL": SL, "PGL": PGL}


def builtin(name: str, n: int) -> GroupExpr:
    return BUILTINS[name](n)
