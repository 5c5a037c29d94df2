"""
Linear Algebra Service
----------------------

Exact linear algebra over Q(q^{1/2}) through sympy's DomainMatrix, and the
numeric counterparts (rank, minimum eigenvalue) through numpy.
"""

import logging
from typing import List, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.models.scalar import FIELD, NumericContext, Scalar
from app.services.coeff import eval_matrix

logger = logging.getLogger(__name__)

DOMAIN = FIELD.to_domain()

Matrix = List[List[Scalar]]


def to_domain_matrix(rows: Sequence[Sequence[Scalar]]) -> DomainMatrix:
    """Convert to a DomainMatrix, over QQ when every entry is a rational constant."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    if all(entry.is_rational() for row in rows for entry in row):
        return DomainMatrix(
            [[QQ.from_sympy(entry.rational_value()) for entry in row] for row in rows],
            (n_rows, n_cols), QQ,
        )
    return DomainMatrix([[entry.value for entry in row] for row in rows], (n_rows, n_cols), DOMAIN)


def from_domain_matrix(matrix: DomainMatrix) -> Matrix:
    if matrix.domain == QQ:
        return [[Scalar(QQ.to_sympy(entry)) for entry in row] for row in matrix.to_list()]
    return [[Scalar(entry) for entry in row] for row in matrix.to_list()]


def exact_pivots(rows: Sequence[Sequence[Scalar]]) -> List[int]:
    """Pivot columns of the reduced row echelon form."""
    if not rows or not rows[0]:
        return []
    _, pivots = to_domain_matrix(rows).rref()
    return list(pivots)


def exact_solve(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Sequence[Scalar]]) -> Matrix:
    """Solve rows·X = rhs for square invertible rows."""
    lhs, right = to_domain_matrix(rows).unify(to_domain_matrix(rhs))
    return from_domain_matrix(lhs.inv() * right)


def exact_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows or not rows[0]:
        return 0
    return to_domain_matrix(rows).rank()


def exact_nullspace(rows: Sequence[Sequence[Scalar]], n_cols: int = None) -> Matrix:
    """Basis of the right null space, one vector per row of the result."""
    if not rows:
        size = n_cols or 0
        return [[Scalar(1) if i == j else Scalar(0) for j in range(size)] for i in range(size)]
    return from_domain_matrix(to_domain_matrix(rows).nullspace())


def exact_inverse(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return from_domain_matrix(to_domain_matrix(rows).inv())


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    result = []
    for row in a:
        out = []
        for j in range(cols):
            total = FIELD(0)
            for k in range(inner):
                if row[k] and b[k][j]:
                    total += row[k].value * b[k][j].value
            out.append(Scalar(total))
        result.append(out)
    return result


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def conj_transpose(a: Matrix) -> Matrix:
    # coefficients are real, so conjugation is the identity
    return transpose(a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(entry.is_zero() for row in a for entry in row)


def matrices_equal(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def numeric_rank(array: np.ndarray, tolerance: float = 1e-9) -> int:
    if array.size == 0:
        return 0
    return int(np.linalg.matrix_rank(array, tol=tolerance))


def min_eigenvalue(array: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of a square matrix."""
    if array.size == 0:
        return 0.0
    hermitian = (array + array.conj().T) / 2
    return float(np.linalg.eigvalsh(hermitian).min())


def is_hermitian(array: np.ndarray, tolerance: float = 1e-9) -> bool:
    return bool(np.allclose(array, array.conj().T, atol=tolerance))


def numeric_psd(rows: Matrix, ctx: NumericContext) -> float:
    """Evaluate a Scalar Gram matrix at ctx.q_value and return its minimum eigenvalue."""
    if not rows:
        return 0.0
    return min_eigenvalue(eval_matrix(rows, ctx))
