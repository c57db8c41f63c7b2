"""
Oracle - 与引擎无关的暴力校验

提供:
- 素域 F_p 上 GL_n / SL_n / 环面 / 加法群的穷举点数
- 椭圆曲线 y^2 = x^3 + ax + b 的点数、Frobenius 迹与特征多项式 (Hasse 界校验)
- Weyl 群的有限矩阵实现 (闭包生成) 与 Molien 级数恢复不变量次数
- 由 Cartan 矩阵反射闭包枚举根系; Dynkin 图用 networkx 表示并检查为树

所有计数都是纯计数，结果与调度无关。
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .config import config
from .core_model import DynkinType, Extension, GroupExpr, SimplyConnectedSimple, Torus, Trivial, Unipotent, normalize
from .errors import GroupTooLarge, MolienFactoringError, OracleError, OracleUnavailable, SingularCurve, TooLarge

logger = logging.getLogger(__name__)

MAX_FIELD_PRIME = 101
GL_ENUMERATION_BOUND = 10 ** 7
MAX_ROOT_RANK = 8

IntMatrix = Tuple[Tuple[int, ...], ...]


def _check_budget(work: int, hard_bound: int, what: str) -> None:
    limit = min(hard_bound, config.oracle_budget)
    if work > limit:
        raise TooLarge(f"{what} needs {work} steps, budget is {limit}", hint="raise GVC_ORACLE_BUDGET")
    logger.info("%s: %s steps", what, work)


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or self.p > MAX_FIELD_PRIME:
            raise OracleError(f"prime fields are supported for 2 <= p <= {MAX_FIELD_PRIME}, got {self.p}")
        d = 2
        while d * d <= self.p:
            if self.p % d == 0:
                raise OracleError(f"{self.p} is not prime")
            d += 1

    @property
    def elements(self) -> range:
        return range(self.p)

    def is_square(self, x: int) -> bool:
        x %= self.p
        return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1

    def legendre(self, x: int) -> int:
        x %= self.p
        if x == 0:
            return 0
        return 1 if pow(x, (self.p - 1) // 2, self.p) == 1 else -1


def _det(entries: Sequence[int], n: int) -> int:
    if n == 1:
        return entries[0]
    if n == 2:
        a, b, c, d = entries
        return a * d - b * c
    a, b, c, d, e, f, g, h, i = entries
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _enumerate_matrices(n: int, p: int, predicate) -> int:
    if not 1 <= n <= 3:
        raise OracleError(f"matrix enumeration supports n <= 3, got {n}")
    field = PrimeField(p)
    _check_budget(p ** (n * n), GL_ENUMERATION_BOUND, f"{n}x{n} matrices over F_{p}")
    return sum(
        1 for entries in itertools.product(field.elements, repeat=n * n)
        if predicate(_det(entries, n) % p)
    )


def enumerate_gl(n: int, p: int) -> int:
    """#GL_n(F_p) by determinant evaluation over every matrix."""
    return _enumerate_matrices(n, p, lambda det: det != 0)


def enumerate_sl(n: int, p: int) -> int:
    return _enumerate_matrices(n, p, lambda det: det == 1)


def enumerate_torus(k: int, p: int) -> int:
    field = PrimeField(p)
    _check_budget(p ** k, GL_ENUMERATION_BOUND, f"G_m^{k} over F_{p}")
    return sum(1 for point in itertools.product(field.elements, repeat=k) if all(point))


def enumerate_unipotent(u: int, p: int) -> int:
    field = PrimeField(p)
    _check_budget(p ** u, GL_ENUMERATION_BOUND, f"G_a^{u} over F_{p}")
    return sum(1 for _ in itertools.product(field.elements, repeat=u))


@dataclass(frozen=True)
class EllipticCount:
    count: int
    trace: int
    charpoly: Tuple[int, int, int]


def enumerate_elliptic(a: int, b: int, p: int) -> EllipticCount:
    """
    y^2 = x^3 + ax + b 在 F_p 上的射影点数

    Returns:
        点数、a_p = p + 1 - #E 与 charpoly t^2 - a_p t + p
    """
    field = PrimeField(p)
    if p <= 3:
        raise OracleError("short Weierstrass form needs p > 3")
    if (4 * a ** 3 + 27 * b ** 2) % p == 0:
        raise SingularCurve(f"y^2 = x^3 + {a}x + {b} is singular over F_{p}")
    count = 1  # point at infinity
    for x in field.elements:
        count += 1 + field.legendre(x ** 3 + a * x + b)
    trace = p + 1 - count
    if trace * trace > 4 * p:
        raise OracleError(f"Hasse bound violated: a_p = {trace}, p = {p}")
    return EllipticCount(count, trace, (1, -trace, p))


def oracle_point_count(expr: GroupExpr, p: int) -> int:
    """
    用穷举计数代替公式: GL_n / SL_n (n <= 3)、环面、加法群按结构识别，扩张相乘

    Raises:
        OracleUnavailable: 含有无法穷举的分量 (阿贝尔簇、较大的单群)
    """
    expr = normalize(expr)
    if isinstance(expr, Trivial):
        return 1
    if isinstance(expr, Unipotent):
        return enumerate_unipotent(expr.dim, p)
    if isinstance(expr, Torus):
        return enumerate_torus(expr.rank, p)
    if isinstance(expr, SimplyConnectedSimple) and expr.type.family == "A" and expr.type.rank <= 2:
        return enumerate_sl(expr.type.rank + 1, p)
    if isinstance(expr, Extension):
        normal, quotient = expr.normal, expr.quotient
        if (
            isinstance(normal, SimplyConnectedSimple) and normal.type.family == "A" and normal.type.rank <= 2
            and quotient == Torus(1)
        ):
            return enumerate_gl(normal.type.rank + 1, p)
        return oracle_point_count(normal, p) * oracle_point_count(quotient, p)
    raise OracleUnavailable(f"no brute-force oracle for {type(expr).__name__}")


# Root systems

def cartan_matrix(t: DynkinType) -> List[List[int]]:
    """A[i][j] = <α_i^∨, α_j>."""
    n = t.rank
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i: int, j: int, a_ij: int = -1, a_ji: int = -1) -> None:
        A[i][j] = a_ij
        A[j][i] = a_ji

    family = t.family
    if family == "G2":
        bond(0, 1, -3, -1)
    elif family == "F4":
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    elif family in ("E6", "E7", "E8"):
        # chain 0 .. n-2, last node hangs off node n-4
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 4, n - 1)
    elif family == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    else:
        for i in range(n - 1):
            bond(i, i + 1)
        if family == "B" and n >= 2:
            bond(n - 2, n - 1, -1, -2)
        elif family == "C" and n >= 2:
            bond(n - 2, n - 1, -2, -1)
    return A


def dynkin_diagram(t: DynkinType) -> nx.Graph:
    """Dynkin diagram with bond multiplicity A_ij * A_ji on every edge."""
    A = cartan_matrix(t)
    graph = nx.Graph(name=t.name)
    graph.add_nodes_from(range(t.rank))
    for i in range(t.rank):
        for j in range(i + 1, t.rank):
            if A[i][j]:
                graph.add_edge(i, j, bond=A[i][j] * A[j][i])
    return graph


def _reflect(root: Tuple[int, ...], i: int, A: List[List[int]]) -> Tuple[int, ...]:
    pairing = sum(root[j] * A[i][j] for j in range(len(root)))
    if pairing == 0:
        return root
    reflected = list(root)
    reflected[i] -= pairing
    return tuple(reflected)


def enumerate_roots(t: DynkinType) -> int:
    """Number of roots, generated from the simple roots by reflection closure."""
    if t.rank > MAX_ROOT_RANK:
        raise TooLarge(f"root enumeration supports rank <= {MAX_ROOT_RANK}, got {t.rank}")
    if not nx.is_tree(dynkin_diagram(t)):
        raise OracleError(f"{t.name}: Dynkin diagram is not a tree")
    A = cartan_matrix(t)
    n = t.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        next_frontier = []
        for root in frontier:
            for i in range(n):
                image = _reflect(root, i, A)
                if image not in roots:
                    roots.add(image)
                    next_frontier.append(image)
        frontier = next_frontier
    return len(roots)


# Weyl groups

def _identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    rows = []
    for i in range(n):
        nonzero = [(k, a[i][k]) for k in range(n) if a[i][k]]
        rows.append(tuple(sum(v * b[k][j] for k, v in nonzero) for j in range(n)))
    return tuple(rows)


def _permutation(n: int, i: int, j: int) -> IntMatrix:
    rows = [list(r) for r in _identity(n)]
    rows[i], rows[j] = rows[j], rows[i]
    return tuple(tuple(r) for r in rows)


def _signed_generators(family: str, n: int) -> List[IntMatrix]:
    swaps = [_permutation(n, i, i + 1) for i in range(n - 1)]
    if family in ("B", "C"):
        flip = [list(r) for r in _identity(n)]
        flip[n - 1][n - 1] = -1
        return swaps + [tuple(tuple(r) for r in flip)]
    # D_n: (x_{n-1}, x_n) -> (-x_n, -x_{n-1})
    twist = [list(r) for r in _identity(n)]
    twist[n - 2][n - 2] = twist[n - 1][n - 1] = 0
    twist[n - 2][n - 1] = twist[n - 1][n - 2] = -1
    return swaps + [tuple(tuple(r) for r in twist)]


def _simple_reflections(t: DynkinType) -> List[IntMatrix]:
    A = cartan_matrix(t)
    n = t.rank
    generators = []
    for i in range(n):
        rows = [list(r) for r in _identity(n)]
        for j in range(n):
            rows[i][j] -= A[i][j]
        generators.append(tuple(tuple(r) for r in rows))
    return generators


@dataclass(frozen=True)
class WeylGroupRealization:
    type: DynkinType
    dimension: int
    elements: Tuple[IntMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def weyl_realization(t: DynkinType, max_order: Optional[int] = None) -> WeylGroupRealization:
    """
    有限矩阵实现:
    A 为 rank+1 维置换矩阵，B/C 为带符号置换，D 为偶数个符号的带符号置换，
    例外型由单反射矩阵生成；群阶由闭包得到。
    """
    max_order = config.molien_max_order if max_order is None else max_order
    if t.family == "A":
        n = t.rank + 1
        generators = [_permutation(n, i, i + 1) for i in range(n - 1)]
    elif t.family in ("B", "C", "D"):
        n = t.rank
        generators = _signed_generators(t.family, n)
    else:
        n = t.rank
        generators = _simple_reflections(t)

    identity = _identity(n)
    elements = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for w in frontier:
            for s in generators:
                sw = _matmul(s, w)
                if sw not in elements:
                    elements.add(sw)
                    next_frontier.append(sw)
                    if len(elements) > max_order:
                        raise GroupTooLarge(f"W({t.name}) has more than {max_order} elements",
                                            hint="raise --max-order")
        frontier = next_frontier
    # closure check: products of generators with elements stay inside
    for s in generators:
        for w in itertools.islice(elements, 64):
            if _matmul(w, s) not in elements:
                raise OracleError(f"W({t.name}) realization is not closed")
    logger.info("W(%s): order %s in dimension %s", t.name, len(elements), n)
    return WeylGroupRealization(t, n, tuple(sorted(elements)))


def _det_one_minus_tw(w: IntMatrix) -> Tuple[int, ...]:
    """Coefficients of det(I - t w), constant term first (= charpoly of w, leading term first)."""
    n = len(w)
    matrix = DomainMatrix([[ZZ(x) for x in row] for row in w], (n, n), ZZ)
    return tuple(int(c) for c in matrix.charpoly())


def _inverse_series(poly: Tuple[int, ...], order: int) -> List[int]:
    """Power series of 1 / poly(t) for poly(0) = 1."""
    series = [0] * (order + 1)
    series[0] = 1
    for k in range(1, order + 1):
        series[k] = -sum(poly[j] * series[k - j] for j in range(1, min(k, len(poly) - 1) + 1))
    return series


def molien_series(W: WeylGroupRealization, order: int) -> List[Fraction]:
    """(1/|W|) Σ_w 1/det(I - t w) up to t^order."""
    classes: Dict[Tuple[int, ...], int] = {}
    for w in W.elements:
        key = _det_one_minus_tw(w)
        classes[key] = classes.get(key, 0) + 1
    total = [0] * (order + 1)
    for poly, count in classes.items():
        for k, c in enumerate(_inverse_series(poly, order)):
            total[k] += count * c
    return [Fraction(c, W.order) for c in total]


def count_reflections(W: WeylGroupRealization) -> int:
    """Elements with det(I - t w) = (1 - t)^{n-1} (1 + t)."""
    n = W.dimension
    reflection = [1]
    for factor in [(1, -1)] * (n - 1) + [(1, 1)]:
        reflection = [
            sum(reflection[i] * factor[k - i] for i in range(len(reflection)) if 0 <= k - i < 2)
            for k in range(len(reflection) + 1)
        ]
    target = tuple(reflection)
    return sum(1 for w in W.elements if _det_one_minus_tw(w) == target)


def molien_degrees(t: DynkinType, max_order: Optional[int] = None) -> List[int]:
    """
    从 Molien 级数贪心提取 ∏ 1/(1 - t^{d_i})

    The truncation order Σ d_i + 1 is computed from the realization itself
    (Σ d_i = #reflections + dimension), never from the degree table.

    Raises:
        GroupTooLarge: |W| 超过上限
        MolienFactoringError: 级数不是有限乘积
    """
    W = weyl_realization(t, max_order)
    order = count_reflections(W) + W.dimension + 1
    series = molien_series(W, order)
    degrees: List[int] = []
    while len(degrees) < W.dimension:
        k = next((k for k in range(1, order + 1) if series[k]), None)
        if k is None:
            raise MolienFactoringError(f"W({t.name}): ran out of series after degrees {degrees}")
        if series[k].denominator != 1 or series[k] < 0:
            raise MolienFactoringError(f"W({t.name}): coefficient {series[k]} at t^{k} is not a count")
        degrees.append(k)
        # multiply by (1 - t^k)
        series = [series[j] - (series[j - k] if j >= k else 0) for j in range(order + 1)]
    if series[0] != 1 or any(series[1:]):
        raise MolienFactoringError(f"W({t.name}): remainder after extracting {degrees} is not 1")
    if t.family == "A":
        degrees.remove(1)
    return sorted(degrees)
