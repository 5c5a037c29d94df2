import pytest
from sympy import S
from sympy.physics.quantum.cg import CG

from app.errors import TruncationError
from app.models.labels import DualLabel, PWLabel
from app.models.scalar import NumericContext, Scalar
from app.services import cache
from app.services import suq2
from app.services.axioms import run_axioms_suite
from app.services.coeff import eval_numeric, q_power, quantum_int
from app.services.lattice import torus_algebra


def test_highest_weight_coefficient_is_one():
    assert suq2.qcg(1, 1, 2, 1, 1, 2) == Scalar(1)
    assert suq2.qcg(1, 1, 2, 3, 1, 2) == Scalar(0)


@pytest.mark.parametrize("t1,t2", [(1, 1), (1, 2), (2, 2)])
def test_orthonormal_columns(t1, t2):
    for twice_big in range(abs(t1 - t2), t1 + t2 + 1, 2):
        for n in range(-twice_big, twice_big + 1, 2):
            total = Scalar(0)
            for n1 in range(-t1, t1 + 1, 2):
                total = total + suq2.qcg_squared(t1, t2, twice_big, n1, n - n1, n)
            assert total == Scalar(1)


def test_classical_limit_matches_sympy():
    ctx = NumericContext(q_value=0.999)
    t1, t2 = 1, 2
    for twice_big in (1, 3):
        for n1 in (-1, 1):
            for n2 in (-2, 0, 2):
                n = n1 + n2
                if abs(n) > twice_big:
                    continue
                classical = CG(S(t1) / 2, S(n1) / 2, S(t2) / 2, S(n2) / 2,
                               S(twice_big) / 2, S(n) / 2).doit() ** 2
                value = eval_numeric(suq2.qcg_squared(t1, t2, twice_big, n1, n2, n), ctx)
                assert abs(value - float(classical)) < 1e-2


def test_norms_and_haar_of_spin_half():
    assert suq2.norms(1) == (Scalar(1), q_power(-2))
    assert suq2.haar_of_product(PWLabel(1, 0, 0), PWLabel(1, 1, 1)) == q_power(-2) / quantum_int(2)
    assert suq2.haar_of_product(PWLabel(1, 1, 1), PWLabel(1, 0, 0)) == q_power(2) / quantum_int(2)
    assert suq2.haar_of_product(PWLabel(1, 0, 0), PWLabel(2, 1, 1)) == Scalar(0)


def test_products_outside_safe_span_raise():
    pw = suq2.pw_algebra(1)
    with pytest.raises(TruncationError):
        pw.mul_basis(PWLabel(1, 0, 0), PWLabel(1, 1, 1))


def test_pw_and_dual_axioms():
    pw = suq2.pw_algebra(2)
    dual = suq2.dual_algebra(2)
    for descriptor in (pw, dual):
        failed = [r.name for r in run_axioms_suite(descriptor) if not r.passed]
        assert failed == []


def test_twist_and_haar_checks():
    pw = suq2.pw_algebra(2)
    dual = suq2.dual_algebra(2)
    for check in (
        suq2.twist_unitarity_check(dual, pw),
        suq2.twist_factorization_check(dual, pw),
        suq2.kms_check(pw),
        suq2.right_haar_check(dual),
        suq2.torus_morphism_check(suq2.torus_map(pw, torus_algebra(2))),
        suq2.quotient_haar_check(dual, suq2.weights_for(dual)),
    ):
        assert check.passed, f"{check.name}: {check.detail}"


def test_dual_window_bounds():
    with pytest.raises(ValueError):
        suq2.dual_algebra(1, window=2)
    dual = suq2.dual_algebra(2, window=1)
    assert DualLabel(2, 0, 0) in dual.basis
    assert dual.comul_window == 1


def test_product_cache_round_trip(tmp_path):
    pw = suq2.PeterWeylDescriptor(2)
    table = pw.safe_products()
    convention = suq2.convention_hash()
    cache.save_products(2, convention, table, tmp_path)
    loaded = cache.load_products(2, convention, tmp_path)
    assert loaded == table
    assert cache.load_products(2, "stale", tmp_path) is None


def test_corrupted_cache_is_a_miss(tmp_path):
    path = cache.cache_path(1, suq2.convention_hash(), tmp_path)
    path.write_text("{not json")
    assert cache.load_products(1, suq2.convention_hash(), tmp_path) is None
