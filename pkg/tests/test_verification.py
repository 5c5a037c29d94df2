from app.models.scalar import NumericContext
from app.services.verification import VERIFY_GROUPS, verify_all, verify_double, verify_finite


def _failures(results):
    return [f"{r.group}/{r.name}: {r.detail}" for r in results if not r.passed]


def test_finite_statements():
    results = verify_finite(seed=1, samples=4)
    assert _failures(results) == []
    groups = {r.group for r in results}
    assert groups == {"conditional expectation", "inner product", "ρ-operators",
                      "Ψ-isometry", "essentialness"}


def test_parabolic_statements_at_spin_half():
    results = verify_double(twice_cutoff=1, mu=1, samples=4, ctx=NumericContext(q_value=0.5))
    assert _failures(results) == []
    general = next(r for r in results if r.name == "lambda_compatibility_general")
    assert general.group == "Λ compatibility"
    assert general.status == "discrepancy"


def test_verify_all_orders_groups():
    results = verify_all(twice_cutoff=1, samples=2)
    order = [VERIFY_GROUPS.index(r.group) for r in results]
    assert order == sorted(order)
    assert {r.group for r in results} == set(VERIFY_GROUPS)
