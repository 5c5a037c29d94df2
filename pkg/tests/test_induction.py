import pytest
import sympy

from app.errors import NonStarRepresentationError
from app.models.elements import AlgElem
from app.models.groups import SubgroupSpec, preset_group
from app.models.representation import RepOnSpace
from app.models.scalar import NumericContext, Scalar
from app.services import finite_backend as fb
from app.services import hopf_core as hc
from app.services import induction as ind
from app.services.verification import isometry_samples


def _character(group, subgroup, rep):
    induced = ind.induce(fb.subgroup_map(subgroup), rep)
    return induced, ind.induced_character(group, induced)


def test_trivial_rep_from_transposition(s3_pair):
    group, subgroup, m = s3_pair
    trivial = fb.trivial_rep(m.target, subgroup.as_group())
    induced, character = _character(group, subgroup, trivial)
    assert induced.dimension == 3
    assert character == [Scalar(3), Scalar(1), Scalar(0)]
    oracle = ind.mackey_oracle(group, subgroup, fb.element_character(subgroup.as_group(), trivial))
    assert character == oracle


def test_trivial_subgroup_gives_regular_rep():
    group = preset_group("S3")
    subgroup = SubgroupSpec.from_names(group, [])
    m = fb.subgroup_map(subgroup)
    induced, character = _character(group, subgroup, fb.trivial_rep(m.target, subgroup.as_group()))
    assert induced.dimension == 6
    assert character == [Scalar(6), Scalar(0), Scalar(0)]


def test_whole_group_induces_itself():
    group = preset_group("S3")
    subgroup = SubgroupSpec.from_names(group, ["(0 1)", "(0 1 2)"])
    m = fb.subgroup_map(subgroup)
    for rep in fb.sign_reps(m.target, subgroup.as_group()):
        induced, _ = _character(group, subgroup, rep)
        assert induced.dimension == rep.dim


def test_two_dim_component_of_a3(a3_pair):
    group, subgroup, m = a3_pair
    components = fb.rational_components(m.target, subgroup.as_group())
    rep = next(rep for rep in components if rep.dim == 2)
    check = ind.mackey_check(group, subgroup, m, rep, fb.element_character(subgroup.as_group(), rep))
    assert check.passed, check.detail
    _, character = _character(group, subgroup, rep)
    assert character == [Scalar(4), Scalar(0), Scalar(-2)]


def test_mackey_oracle_with_cube_roots(a3_pair):
    group, subgroup, _ = a3_pair
    g = group.index["(0 1 2)"]
    omega = sympy.exp(2 * sympy.pi * sympy.I / 3)
    character = {
        group.elements[group.identity]: 1,
        group.elements[g]: omega,
        group.elements[group.mul(g, g)]: omega ** 2,
    }
    assert ind.mackey_oracle(group, subgroup, character) == [2, 0, -1]


@pytest.mark.parametrize("preset,pairs", [
    ("S3", 12),
    ("D4", 27),
    pytest.param("S4", 87, marks=pytest.mark.slow),
])
def test_mackey_on_every_subgroup(preset, pairs):
    group = preset_group(preset)
    failures = []
    count = 0
    for subgroup in group.subgroups():
        local = subgroup.as_group()
        m = fb.subgroup_map(subgroup)
        for rep in fb.rational_components(m.target, local):
            count += 1
            check = ind.mackey_check(group, subgroup, m, rep, fb.element_character(local, rep))
            if not check.passed:
                failures.append(f"{check.name}: {check.detail}")
    assert failures == []
    assert count == pairs


def test_conditional_expectation(s3_pair):
    _, _, m = s3_pair
    basis_g = [AlgElem.basis(m.source, label) for label in m.source.basis]
    basis_b = [AlgElem.basis(m.target, label) for label in m.target.basis]
    assert ind.expectation_star_check(m, basis_g).passed
    assert ind.expectation_module_check(m, [(f, h) for f in basis_g for h in basis_b]).passed
    assert ind.counit_restriction_check(m).passed


def test_bimodule_and_inner_product_laws(s3_pair, rng):
    _, _, m = s3_pair

    def sample(target=False):
        return hc.random_element(m.target if target else m.source, rng, terms=3)

    quadruples = [(sample(), sample(), sample(True), sample(True)) for _ in range(5)]
    assert ind.module_laws_check(m, quadruples).passed
    assert ind.pi_hat_star_check(m, [(sample(), sample(True)) for _ in range(5)]).passed
    assert ind.sesquilinearity_check(m, [(sample(), sample(), sample(True)) for _ in range(5)]).passed


def test_rho_identity_exact_and_numeric(s3_pair, rng):
    _, _, m = s3_pair
    pairs = [(hc.random_element(m.source, rng, terms=3), hc.random_element(m.source, rng, terms=3))
             for _ in range(4)]
    exact = ind.rho_identity_check(m, pairs)
    numeric = ind.rho_identity_check(m, pairs, ctx=NumericContext(q_value=0.5))
    assert exact.passed and exact.name == "rho_identity[exact]"
    assert numeric.passed


def test_psi_isometry_on_z4(z4_pair, rng):
    _, subgroup, m = z4_pair
    for rep in [fb.trivial_rep(m.target, subgroup.as_group())] + fb.sign_reps(m.target, subgroup.as_group()):
        check = ind.psi_isometry_check(m, rep, isometry_samples(m, rep, rng, 10))
        assert check.passed, check.detail


def test_essentialness():
    descriptor = fb.group_alg_qgroup(preset_group("Z3"))
    assert ind.essentialness_check(fb.regular_rep(descriptor))
    assert not ind.essentialness_check(RepOnSpace(descriptor, 2, {}))


def test_non_star_rep_rejected(s3_pair):
    _, _, m = s3_pair
    nilpotent = [[Scalar(0), Scalar(1)], [Scalar(0), Scalar(0)]]
    rep = RepOnSpace(m.target, 2, {label: nilpotent for label in m.target.basis}, name="nilpotent")
    with pytest.raises(NonStarRepresentationError):
        ind.induce(m, rep)
