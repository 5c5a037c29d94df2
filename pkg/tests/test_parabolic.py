import pytest

from app.errors import ConfigError
from app.models.elements import AlgElem
from app.models.labels import DualLabel, PWLabel
from app.models.scalar import NumericContext, Scalar
from app.services import parabolic as pb
from app.services.coeff import q_power
from app.services.double import build_borel, build_double


@pytest.fixture(scope="module")
def borel_one():
    """A(G_q) at spin 1 with its Borel restriction."""
    double = build_double(2)
    _, m = build_borel(double)
    return double, m


def test_character_param_validation():
    with pytest.raises(ConfigError):
        pb.CharacterParam(0.5, 0)
    with pytest.raises(ConfigError):
        pb.CharacterParam(0, 0.3 + 0.7j)
    with pytest.raises(ValueError):
        pb.CharacterParam(0, 0, mode="symbolic")
    numeric = pb.CharacterParam(0, 0.3 + 0.7j, mode="numeric", ctx=NumericContext(q_value=0.5))
    assert not numeric.exact


def test_expected_dimension():
    assert pb.expected_dimension(2, 0) == (4, 2)
    assert pb.expected_dimension(2, 1) == (2, 1)
    assert pb.expected_dimension(3, 1) == (6, 2)
    assert pb.expected_dimension(1, 2) == (0, 0)


def test_principal_series_trivial_character(borel_one):
    _, m = borel_one
    space = pb.principal_series(m, pb.CharacterParam(0, 0))
    assert space.residual == 0
    assert space.dimension == 4
    assert space.k_types == [0, 2]
    assert space.min_eigenvalue >= -1e-9
    assert space.to_dict()["k_types"] == ["0", "1"]


def test_principal_series_generic_lambda(borel_one):
    _, m = borel_one
    ctx = NumericContext(q_value=0.5)
    space = pb.principal_series(m, pb.CharacterParam(0, 0.3 + 0.7j, mode="numeric", ctx=ctx))
    assert space.residual <= 1e-9
    assert space.min_eigenvalue >= -1e-9
    assert space.dimension > 0


def test_action_preservation(borel_half):
    _, m = borel_half
    assert pb.action_preservation_check(m, pb.CharacterParam(1, 0)).passed


@pytest.mark.parametrize("mu,lam", [(1, 0), (-1, 0)])
def test_module_picture(borel_half, mu, lam):
    _, m = borel_half
    param = pb.CharacterParam(mu, lam)
    assert pb.module_map_check(m, param).passed
    assert pb.inner_product_check(m, param).passed
    low = [a for a in m.source.left.basis if a.twice_l <= 1]
    pairs = [(a, (n, DualLabel(0, 0, 0))) for a in low for n in range(-1, 2)]
    check = pb.module_balance_check(m, param, pairs)
    assert check.passed, check.detail


def test_module_picture_needs_exact(borel_half):
    _, m = borel_half
    param = pb.CharacterParam(0, 0.5, mode="numeric")
    x = AlgElem.basis(m.source, (PWLabel(0, 0, 0), DualLabel(0, 0, 0)))
    with pytest.raises(ConfigError):
        pb.module_picture_map(m, param, x)


def test_gqnq_weights_and_functional(double_half):
    module = pb.build_gqnq(double_half)
    for kappa in (-1, 0, 2):
        assert module.act_weight(0, kappa) == {kappa: q_power(-2 * kappa)}
    assert module.functional((PWLabel(0, 0, 0), 1)) == q_power(-4)
    assert module.functional((PWLabel(1, 0, 0), 1)) == Scalar(0)


def test_gqnq_checks(double_half, borel_half):
    _, m = borel_half
    module = pb.build_gqnq(double_half)
    low = [a for a in double_half.left.basis if a.twice_l <= 1]
    samples = [(a, f) for a in low for f in double_half.dual.basis if f.twice_l <= double_half.dual.window]
    for check in (
        pb.coaction_commutation_check(module),
        pb.gqnq_well_defined_check(module, samples),
        pb.gqnq_invariance_check(module),
        pb.lambda_compatibility_check(module, m),
        pb.lambda_equivariance_check(module),
        pb.lambda_surjectivity_check(module),
    ):
        assert check.passed, f"{check.name}: {check.detail}"


def test_character_multiplicativity(double_half):
    param = pb.CharacterParam(0, 0)
    module = pb.build_gqnq(double_half)
    assert pb.character_multiplicativity_check(param, module.lq).passed
    numeric = pb.CharacterParam(0, 0.3 + 0.7j, mode="numeric")
    assert pb.character_multiplicativity_check(numeric, module.lq).passed


def test_lambda_compatibility_general_h(double_half, borel_half):
    _, m = borel_half
    module = pb.build_gqnq(double_half)
    reduced = pb.lambda_compatibility_general_check(module, m, kappas=[0])
    assert reduced.status == "pass"
    check = pb.lambda_compatibility_general_check(module, m, kappas=[0, 1])
    # off δ_0 the two sides differ by a power of q; it is reported, not failed
    assert check.status == "discrepancy", check.detail
    assert check.passed
    assert "κ=1, κ'=1" in check.detail
    assert "κ=0, κ'=0" not in check.detail


MODULE_GRID = [(mu, lam) for mu in range(-2, 3) for lam in (-1, 0, 1)]


@pytest.mark.parametrize("mu,lam", MODULE_GRID)
def test_module_picture_and_balanced_tensor_grid(double_half, borel_half, mu, lam):
    _, m = borel_half
    param = pb.CharacterParam(mu, lam)
    module = pb.build_gqnq(double_half)
    space = pb.principal_series(m, param)
    for check in (
        pb.module_map_check(m, param),
        pb.inner_product_check(m, param),
        pb.balanced_tensor_vs_gqnq(module, m, space),
    ):
        assert check.passed, f"{check.name}: {check.detail}"


@pytest.mark.slow
@pytest.mark.parametrize("mu,lam", [(0, 0), (1, 1)])
def test_balanced_tensor_at_spin_one(borel_one, mu, lam):
    double, m = borel_one
    param = pb.CharacterParam(mu, lam)
    space = pb.principal_series(m, param)
    assert pb.balanced_tensor_vs_gqnq(pb.build_gqnq(double), m, space).passed
    assert pb.module_map_check(m, param).passed
    assert pb.inner_product_check(m, param).passed


@pytest.mark.slow
def test_module_picture_at_spin_three_halves():
    double = build_double(3)
    _, m = build_borel(double)
    param = pb.CharacterParam(1, 0)
    assert pb.module_map_check(m, param).passed
    assert pb.inner_product_check(m, param).passed


@pytest.mark.parametrize("mu", [0, 1])
def test_balanced_tensor_generic_lambda(double_half, borel_half, mu):
    _, m = borel_half
    ctx = NumericContext(q_value=0.5, tolerance=1e-9)
    param = pb.CharacterParam(mu, 0.3 + 0.7j, mode="numeric", ctx=ctx)
    space = pb.principal_series(m, param)
    check = pb.balanced_tensor_vs_gqnq(pb.build_gqnq(double_half), m, space)
    assert check.passed, check.detail


def test_balanced_tensor_detects_wrong_gram(double_half, borel_half):
    _, m = borel_half
    module = pb.build_gqnq(double_half)
    space = pb.principal_series(m, pb.CharacterParam(1, 0))
    assert space.dimension > 0
    assert pb.balanced_tensor_vs_gqnq(module, m, space).passed
    gram = [list(row) for row in space.gram]
    gram[0][0] = gram[0][0] + Scalar(1)
    broken = pb.PrincipalSeriesSpace(space.param, space.twice_cutoff, space.labels, space.basis,
                                     gram, space.residual, space.min_eigenvalue)
    check = pb.balanced_tensor_vs_gqnq(module, m, broken)
    assert not check.passed
    assert "gram" in check.detail
