import pytest

from app.models.elements import AlgElem
from app.models.scalar import Scalar
from app.services import hopf_core as hc
from app.services.axioms import run_axioms_suite
from app.services.lattice import (
    LatticeDescriptor,
    TensorDescriptor,
    k_lambda_lattice,
    torus_algebra,
    weight_algebra,
)


def test_bad_kind_rejected():
    with pytest.raises(ValueError):
        LatticeDescriptor("bad", "free", 2)
    with pytest.raises(ValueError):
        LatticeDescriptor("bad", "group", -1)


def test_torus_product_and_haar():
    torus = torus_algebra(4)
    product = hc.mul(AlgElem.basis(torus, 1), AlgElem.basis(torus, -3))
    assert product == AlgElem.basis(torus, -2)
    assert torus.haar_basis(0) == Scalar(1)
    assert torus.haar_basis(2) == Scalar(0)


def test_delta_comul_respects_window():
    weights = weight_algebra(4, window=2)
    table = weights.comul_basis(1)
    assert set(table) == {(-1, 2), (0, 1), (1, 0), (2, -1)}


def test_axioms_on_torus():
    torus = torus_algebra(2)
    labels = [n for n in torus.basis if abs(n) <= 1]
    assert all(r.passed for r in run_axioms_suite(torus, labels))


def test_k_lambda_scales_weights():
    weights = weight_algebra(3)
    k = k_lambda_lattice(weights, 2)
    scaled = k.left_act(1)
    assert scaled == {1: Scalar.q_power(2)}


def test_tensor_descriptor_multiplies_legwise():
    lq = TensorDescriptor(torus_algebra(2), weight_algebra(2))
    product = hc.mul(AlgElem.basis(lq, (1, 0)), AlgElem.basis(lq, (-1, 0)))
    assert product == AlgElem.basis(lq, (0, 0))
    assert hc.mul(AlgElem.basis(lq, (0, 1)), AlgElem.basis(lq, (0, 2))).is_zero()
