"""
Exact rational linear algebra on sparse vectors

Sparse vectors are dicts {index: Fraction}; dense work is handed to sympy
matrices over QQ, so every rank / kernel / solve is an exact equality.
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy


def add_into(target: Dict, source: Dict, scale: Fraction = Fraction(1)) -> Dict:
    """target += scale * source, dropping zero entries."""
    for key, value in source.items():
        total = target.get(key, Fraction(0)) + scale * value
        if total:
            target[key] = total
        else:
            target.pop(key, None)
    return target


def scaled(vector: Dict, scale: Fraction) -> Dict:
    if not scale:
        return {}
    return {key: scale * value for key, value in vector.items()}


def to_rational(value) -> sympy.Rational:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Rational(value)


def to_fraction(value) -> Fraction:
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def columns_to_matrix(columns: Sequence[Dict], row_keys: Optional[Sequence] = None) -> Tuple[sympy.Matrix, List]:
    """
    Stack sparse column vectors into a dense exact matrix.

    Returns:
        (matrix, row_keys) where row_keys fixes the row order
    """
    if row_keys is None:
        keys = set()
        for column in columns:
            keys.update(column.keys())
        row_keys = sorted(keys, key=repr)
    row_index = {key: i for i, key in enumerate(row_keys)}
    matrix = sympy.zeros(len(row_keys), len(columns))
    for j, column in enumerate(columns):
        for key, value in column.items():
            matrix[row_index[key], j] = to_rational(value)
    return matrix, list(row_keys)


def rank(matrix: sympy.Matrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return int(matrix.rank())


def kernel(matrix: sympy.Matrix, ncols: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """Basis of {x : Mx = 0} from the reduced row echelon form."""
    ncols = matrix.cols if ncols is None else ncols
    if matrix.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    return [tuple(to_fraction(x) for x in vector) for vector in matrix.nullspace()]


def solve(matrix: sympy.Matrix, rhs: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """One exact solution of Mx = rhs, or None when the system is inconsistent."""
    if matrix.cols == 0:
        return () if all(not value for value in rhs) else None
    b = sympy.Matrix([to_rational(v) for v in rhs])
    if matrix.rows == 0:
        return tuple(Fraction(0) for _ in range(matrix.cols))
    augmented = matrix.row_join(b)
    reduced, pivots = augmented.rref()
    if matrix.cols in pivots:
        return None
    solution = [Fraction(0)] * matrix.cols
    for row, pivot in enumerate(pivots):
        solution[pivot] = to_fraction(reduced[row, matrix.cols])
    return tuple(solution)


def dense(vector: Dict, keys: Iterable) -> Tuple[Fraction, ...]:
    return tuple(vector.get(key, Fraction(0)) for key in keys)
