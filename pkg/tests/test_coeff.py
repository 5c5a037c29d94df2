import pytest

from app.errors import DivisionByZeroError, PoleError
from app.models.scalar import NumericContext, Scalar
from app.services.coeff import (
    eval_matrix,
    eval_numeric,
    numeric_q_power,
    q_power,
    quantum_factorial,
    quantum_int,
    scalar_arith,
)


def test_quantum_int_is_symmetric_laurent():
    assert quantum_int(2) == q_power(2) + q_power(-2)
    assert quantum_int(-2) == -quantum_int(2)
    assert quantum_int(0) == Scalar(0)
    assert quantum_int(1) == Scalar(1)


def test_quantum_factorial():
    assert quantum_factorial(3) == quantum_int(2) * quantum_int(3)
    assert quantum_factorial(0) == Scalar(1)


def test_scalar_arith_kinds():
    a, b = quantum_int(2), q_power(1)
    assert scalar_arith(a, b, "add") == a + b
    assert scalar_arith(a, b, "mul") == a * b
    assert scalar_arith(scalar_arith(a, b, "div"), b, "mul") == a
    with pytest.raises(ValueError):
        scalar_arith(a, b, "pow")


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        scalar_arith(Scalar(1), Scalar(0), "div")


def test_canonical_form_cancels():
    x = (q_power(4) - Scalar(1)) / (q_power(2) - Scalar(1))
    assert x == q_power(2) + Scalar(1)
    assert Scalar.from_text(x.to_text()) == x


def test_eval_numeric():
    ctx = NumericContext(q_value=0.5)
    assert eval_numeric(quantum_int(2), ctx) == pytest.approx(2.5)
    assert eval_numeric(q_power(2), ctx) == pytest.approx(0.5)


def test_pole_raises():
    x = Scalar(1) / (q_power(2) - Scalar(1))
    with pytest.raises(PoleError):
        eval_numeric(x, NumericContext(q_value=1.0))


def test_numeric_q_power_matches_exact():
    ctx = NumericContext(q_value=0.3)
    assert numeric_q_power(3, ctx) == pytest.approx(eval_numeric(q_power(6), ctx))
    assert abs(numeric_q_power(0.7j, ctx)) == pytest.approx(1.0)


def test_eval_matrix_shape():
    ctx = NumericContext(q_value=0.5)
    array = eval_matrix([[Scalar(1), q_power(2)], [Scalar(0), quantum_int(2)]], ctx)
    assert array.shape == (2, 2)
    assert array[1, 1] == pytest.approx(2.5)
