import pytest

from app.models.elements import AlgElem
from app.models.labels import DualLabel, PWLabel
from app.models.scalar import Scalar
from app.services import hopf_core as hc
from app.services.axioms import run_axioms_suite
from app.services.double import (
    borel_intertwining_check,
    borel_modular_check,
    build_lq,
    dbq_convolution,
    expectation_formula_check,
    gamma_grouplike_check,
    unit_like_check,
)
from app.services.induction import cond_expect
from app.services.suq2 import k_lambda


def test_double_basis(double_half):
    assert double_half.dual.window == 1
    assert len(double_half.basis) == 25
    assert double_half.unimodular


def test_double_axioms_on_window(double_half, borel_half):
    borel, _ = borel_half
    for descriptor in (double_half, borel):
        window = descriptor.dual.window
        labels = [label for label in descriptor.basis if descriptor.grade(label) <= window]
        failed = [r.name for r in run_axioms_suite(descriptor, labels) if not r.passed]
        assert failed == []


def test_unit_like(double_half):
    assert unit_like_check(double_half).passed


def test_borel_checks(borel_half):
    borel, m = borel_half
    assert not borel.unimodular
    for check in (borel_modular_check(borel), gamma_grouplike_check(m),
                  borel_intertwining_check(m), expectation_formula_check(m)):
        assert check.passed, f"{check.name}: {check.detail}"


def test_expectation_on_off_diagonal_vanishes(borel_half):
    _, m = borel_half
    x = AlgElem.basis(m.source, (PWLabel(1, 0, 1), DualLabel(0, 0, 0)))
    assert cond_expect(m, x).is_zero()


def test_expectation_twists_by_k(borel_half):
    borel, m = borel_half
    f = DualLabel(1, 0, 0)
    x = AlgElem.basis(m.source, (PWLabel(1, 1, 1), f))
    scaled = k_lambda(borel.dual, -2).right_act(f)
    assert cond_expect(m, x) == AlgElem(borel, {(-1, g): c for g, c in scaled.items()})


def test_dbq_convolution_needs_borel(double_half, borel_half):
    borel, _ = borel_half
    unit = AlgElem.basis(borel, (0, DualLabel(0, 0, 0)))
    assert dbq_convolution(unit, unit) == hc.conv_mul(unit, unit)
    with pytest.raises(ValueError):
        x = AlgElem.basis(double_half, (PWLabel(0, 0, 0), DualLabel(0, 0, 0)))
        dbq_convolution(x, x)


def _borel_pools(borel):
    """Labels of dual grade 0 and of dual grade up to the window."""
    window = borel.dual.window
    narrow = [label for label in borel.basis if borel.grade(label) == 0]
    wide = [label for label in borel.basis if borel.grade(label) <= window]
    return narrow, wide


def test_dbq_convolution_associative(borel_half, rng):
    borel, _ = borel_half
    narrow, wide = _borel_pools(borel)
    for n in range(10):
        pools = [narrow, narrow, narrow]
        pools[n % 3] = wide
        x, y, z = (hc.random_element(borel, rng, pool, terms=3) for pool in pools)
        assert dbq_convolution(dbq_convolution(x, y), z) == dbq_convolution(x, dbq_convolution(y, z))


def test_dbq_convolution_star_reverses_products(borel_half, rng):
    borel, _ = borel_half
    narrow, wide = _borel_pools(borel)
    for n in range(10):
        first, second = (wide, narrow) if n % 2 else (narrow, wide)
        x = hc.random_element(borel, rng, first, terms=3)
        y = hc.random_element(borel, rng, second, terms=3)
        assert hc.conv_star(dbq_convolution(x, y)) == dbq_convolution(hc.conv_star(y), hc.conv_star(x))


def test_dbq_weight_zero_unit_acts_on_weight_zero_only(borel_half):
    borel, _ = borel_half
    # e^0⊗ω⁰ is idempotent on the D(T) leg only: other torus weights are killed
    unit = AlgElem.basis(borel, (0, DualLabel(0, 0, 0)))
    shifted = AlgElem.basis(borel, (-1, DualLabel(0, 0, 0)))
    assert dbq_convolution(unit, shifted).is_zero()


def test_lq_is_untwisted():
    lq = build_lq(2)
    x = AlgElem.basis(lq, (1, 1))
    y = AlgElem.basis(lq, (1, -1))
    assert hc.mul(x, y) == AlgElem.basis(lq, (1, 0))
    assert lq.counit_basis((0, 2)) == Scalar(1)
