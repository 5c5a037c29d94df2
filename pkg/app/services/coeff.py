"""
Coefficient Service
-------------------

Field arithmetic on Scalars, quantum integers and numeric evaluation at a
sample value of q.
"""

import cmath
import logging
from functools import lru_cache

import numpy as np

from app.errors import DivisionByZeroError, PoleError
from app.models.scalar import FIELD, T, NumericContext, Scalar

logger = logging.getLogger(__name__)

VALID_KINDS = ("add", "sub", "mul", "div")


def scalar_arith(a: Scalar, b: Scalar, kind: str) -> Scalar:
    """
    Combine two Scalars exactly.

    Args:
        a: Left operand
        b: Right operand
        kind: One of add, sub, mul, div

    Returns:
        Canonical Scalar result

    Raises:
        DivisionByZeroError: If kind is div and b is zero
    """
    if kind not in VALID_KINDS:
        raise ValueError(f"kind must be one of: {', '.join(VALID_KINDS)}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if b.is_zero():
        raise DivisionByZeroError(f"Cannot divide {a.to_text()} by zero")
    return a / b


@lru_cache(maxsize=None)
def quantum_int(n: int) -> Scalar:
    """Return [n]_q = (q^n - q^-n)/(q - q^-1) as a Laurent polynomial."""
    size = abs(n)
    total = FIELD(0)
    for k in range(size):
        # q^{size-1-2k} in powers of t = q^{1/2}
        total += T ** (2 * (size - 1 - 2 * k))
    return Scalar(total if n >= 0 else -total)


@lru_cache(maxsize=None)
def quantum_factorial(n: int) -> Scalar:
    result = Scalar(1)
    for k in range(1, n + 1):
        result = result * quantum_int(k)
    return result


def q_power(half_exponent: int) -> Scalar:
    return Scalar.q_power(half_exponent)


def _eval_poly(poly, t_value: complex) -> complex:
    total = 0j
    for (exponent,), coeff in poly.terms():
        total += (int(coeff.numerator) / int(coeff.denominator)) * t_value ** exponent
    return total


def eval_numeric(a: Scalar, ctx: NumericContext) -> complex:
    """
    Evaluate a Scalar at ctx.q_value.

    The half power q^{1/2} is the principal square root of q.

    Raises:
        PoleError: If the denominator vanishes at q
    """
    t_value = cmath.sqrt(ctx.q_value)
    numer, denom = a.value.numer, a.value.denom
    den_value = _eval_poly(denom, t_value)
    if abs(den_value) < 1e-300:
        logger.error(f"Pole of {a.to_text()} at q={ctx.q_value}")
        raise PoleError(f"Scalar {a.to_text()} has a pole at q={ctx.q_value}")
    return _eval_poly(numer, t_value) / den_value


def eval_matrix(rows, ctx: NumericContext) -> np.ndarray:
    """Evaluate a nested list of Scalars into a complex numpy array."""
    return np.array(
        [[eval_numeric(entry, ctx) for entry in row] for row in rows],
        dtype=complex,
    ).reshape(len(rows), len(rows[0]) if rows else 0)


def conj_scalar(a: Scalar) -> Scalar:
    """Complex conjugation; q is real and coefficients are rational, so a is fixed."""
    return a


def numeric_q_power(exponent: complex, ctx: NumericContext) -> complex:
    """q^exponent for a possibly complex exponent, principal branch."""
    return complex(np.exp(exponent * np.log(ctx.q_value)))
