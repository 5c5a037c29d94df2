"""
Verification Service
--------------------

Runs the identity checks of the induction theory grouped by the statement
they establish. Finite statements are checked on S3 ⊇ <(0 1)>, S3 ⊇ A3 and
Z4 ⊇ Z2; the parabolic statements on the truncated double of SU_q(2).
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.models.elements import AlgElem
from app.models.groups import SubgroupSpec, preset_group
from app.models.labels import DualLabel, spin_text
from app.models.report import CheckResult
from app.models.representation import RepOnSpace
from app.models.scalar import NumericContext, Scalar
from app.models.subgroup_map import SubgroupMap
from app.services import finite_backend as fb
from app.services import hopf_core as hc
from app.services import induction as ind
from app.services import parabolic as pb
from app.services.double import (
    borel_intertwining_check,
    borel_modular_check,
    build_borel,
    build_double,
    expectation_formula_check,
    gamma_grouplike_check,
)

logger = logging.getLogger(__name__)

VERIFY_GROUPS = (
    "conditional expectation",
    "inner product",
    "ρ-operators",
    "Ψ-isometry",
    "essentialness",
    "Borel modular element",
    "principal series covariance",
    "module map",
    "coaction commutation",
    "invariance",
    "Λ compatibility",
    "balanced tensor",
)

GENERIC_LAMBDA = 0.3 + 0.7j


def _grouped(group: str, checks: Sequence[CheckResult]) -> List[CheckResult]:
    for check in checks:
        check.group = group
    return list(checks)


def finite_pair(preset: str, generators: Sequence[str]):
    """(group, subgroup, subgroup map) for a preset and generator names."""
    group = preset_group(preset)
    subgroup = SubgroupSpec.from_names(group, generators)
    return group, subgroup, fb.subgroup_map(subgroup)


def random_vector(rng: np.random.Generator, dim: int) -> List[Scalar]:
    return [Scalar(int(x)) for x in rng.integers(-2, 3, size=dim)]


def _elements(m: SubgroupMap, rng, count: int, target: bool = False, labels=None) -> List[AlgElem]:
    algebra = m.target if target else m.source
    return [hc.random_element(algebra, rng, labels, terms=int(rng.integers(1, 5)))
            for _ in range(count)]


def isometry_samples(m: SubgroupMap, rep: RepOnSpace, rng, count: int) -> List[Tuple]:
    """Seeded samples (ξ, f, v, η, g, w) for the Ψ-isometry check."""
    samples = []
    for _ in range(count):
        xi, f, eta, g = _elements(m, rng, 4)
        samples.append((xi, f, random_vector(rng, rep.dim), eta, g, random_vector(rng, rep.dim)))
    return samples


def verify_finite(seed: int = 0, samples: int = 20, ctx: Optional[NumericContext] = None) -> List[CheckResult]:
    """The finite-backend statements: expectation, inner product, ρ, Ψ, essentialness."""
    rng = np.random.default_rng(seed)
    ctx = ctx or NumericContext()
    group, subgroup, m = finite_pair("S3", ["(0 1)"])
    basis_g = [AlgElem.basis(m.source, label) for label in m.source.basis]
    basis_b = [AlgElem.basis(m.target, label) for label in m.target.basis]
    results: List[CheckResult] = []

    logger.info(f"Verifying the conditional expectation on {m.name}")
    results += _grouped("conditional expectation", [
        ind.expectation_star_check(m, basis_g),
        ind.expectation_module_check(m, [(f, h) for f in basis_g for h in basis_b]),
        ind.counit_restriction_check(m),
    ])

    quadruples = [tuple(_elements(m, rng, 2) + _elements(m, rng, 2, target=True)) for _ in range(samples)]
    pairs = [(f, h) for f, h in zip(_elements(m, rng, samples), _elements(m, rng, samples, target=True))]
    triples = [(f, g, h) for f, g, h in zip(_elements(m, rng, samples), _elements(m, rng, samples),
                                            _elements(m, rng, samples, target=True))]
    sub = subgroup.as_group()
    trivial = fb.trivial_rep(m.target, sub)
    _, a3, m_a3 = finite_pair("S3", ["(0 1 2)"])
    a3_group = a3.as_group()
    results += _grouped("inner product", [
        ind.module_laws_check(m, quadruples),
        ind.pi_hat_star_check(m, pairs),
        ind.sesquilinearity_check(m, triples),
        ind.mackey_check(group, subgroup, m, trivial, fb.element_character(sub, trivial)),
    ] + [ind.mackey_check(group, a3, m_a3, rep, fb.element_character(a3_group, rep))
         for rep in fb.rational_components(m_a3.target, a3_group)])

    rho_pairs = [(f, g) for f, g in zip(_elements(m, rng, samples), _elements(m, rng, samples))]
    results += _grouped("ρ-operators", [
        ind.rho_identity_check(m, rho_pairs),
        ind.rho_identity_check(m, rho_pairs, ctx=ctx),
    ])

    z4 = preset_group("Z4")
    order_two = [name for g, name in enumerate(z4.elements) if z4.element_order(g) == 2]
    _, z2, m_z4 = finite_pair("Z4", order_two)
    isometry = []
    for pair, spec, count in ((m_z4, z2, max(samples, 50)), (m, subgroup, max(samples, 20))):
        target_group = spec.as_group()
        for rep in [fb.trivial_rep(pair.target, target_group)] + fb.sign_reps(pair.target, target_group):
            check = ind.psi_isometry_check(pair, rep, isometry_samples(pair, rep, rng, count))
            check.name = f"psi_isometry[{pair.name}:{rep.name}]"
            isometry.append(check)
    results += _grouped("Ψ-isometry", isometry)

    z3 = fb.group_alg_qgroup(preset_group("Z3"))
    induced = ind.induce(m, trivial).as_rep()
    essential = [
        CheckResult.from_flag("regular_rep_essential", ind.essentialness_check(fb.regular_rep(z3)),
                              identity="span D(G)*K = K", samples=1),
        CheckResult.from_flag("induced_rep_essential", ind.essentialness_check(induced),
                              identity="span D(G)*Ind V = Ind V", samples=1),
    ]
    results += _grouped("essentialness", essential)
    return results


def _double_samples(m: SubgroupMap, rng, count: int) -> List[AlgElem]:
    double = m.source
    window = double.dual.window
    labels = [label for label in double.basis if double.grade(label) <= window]
    return [hc.random_element(double, rng, labels, terms=int(rng.integers(1, 5))) for _ in range(count)]


def verify_double(twice_cutoff: int = 1, mu: int = 0, lam: int = 0, seed: int = 0,
                  samples: int = 20, twice_window: Optional[int] = None,
                  ctx: Optional[NumericContext] = None) -> List[CheckResult]:
    """The parabolic statements on A(G_q) truncated at spin twice_cutoff/2."""
    rng = np.random.default_rng(seed)
    ctx = ctx or NumericContext()
    double = build_double(twice_cutoff, twice_window)
    borel, m = build_borel(double)
    logger.info(f"Verifying the parabolic statements at L={spin_text(twice_cutoff)}")
    results: List[CheckResult] = []

    results += _grouped("conditional expectation", [
        ind.expectation_star_check(m, _double_samples(m, rng, samples)),
        expectation_formula_check(m),
    ])
    results += _grouped("Borel modular element", [
        borel_modular_check(borel),
        gamma_grouplike_check(m),
        borel_intertwining_check(m),
    ])

    param = pb.CharacterParam(mu, lam)
    space = pb.principal_series(m, param)
    covariance = [
        CheckResult.from_flag("covariance_residual", space.residual == 0,
                              identity="(id⊗π_B)Δ_G(ξ) = ξ⊗(e^μ⊗K_{2ρ+λ})",
                              detail=f"dimension {space.dimension}", samples=space.dimension),
        CheckResult.from_flag("gram_positive", space.min_eigenvalue >= -ctx.tolerance,
                              identity="Gram ≥ 0 at numeric q",
                              detail=f"min eigenvalue {space.min_eigenvalue:.3e}", samples=1),
        pb.action_preservation_check(m, param),
    ]
    numeric = pb.CharacterParam(mu, GENERIC_LAMBDA, mode="numeric", ctx=ctx)
    numeric_space = pb.principal_series(m, numeric)
    covariance.append(CheckResult.from_flag(
        "generic_lambda", numeric_space.min_eigenvalue >= -ctx.tolerance
        and numeric_space.residual <= ctx.tolerance,
        identity="covariant and Gram ≥ 0 for generic λ",
        detail=f"λ={GENERIC_LAMBDA}, min eigenvalue {numeric_space.min_eigenvalue:.3e}", samples=1,
    ))
    results += _grouped("principal series covariance", covariance)

    block = DualLabel(0, 0, 0)
    low = [a for a in double.left.basis if a.twice_l <= min(twice_cutoff, 1)]
    balance_pairs = [(a, (n, block)) for a in low for n in range(-1, 2)]
    results += _grouped("module map", [
        pb.module_map_check(m, param),
        pb.module_balance_check(m, param, balance_pairs),
        pb.inner_product_check(m, param),
    ])

    module = pb.build_gqnq(double)
    well_defined = [(a, f) for a in low for f in double.dual.basis if f.twice_l <= double.dual.window]
    results += _grouped("coaction commutation", [
        pb.coaction_commutation_check(module),
        pb.gqnq_well_defined_check(module, well_defined),
    ])
    results += _grouped("invariance", [pb.gqnq_invariance_check(module)])
    results += _grouped("Λ compatibility", [
        pb.lambda_compatibility_check(module, m),
        pb.lambda_compatibility_general_check(module, m),
        pb.lambda_equivariance_check(module),
        pb.lambda_surjectivity_check(module),
    ])
    results += _grouped("balanced tensor", [
        pb.balanced_tensor_vs_gqnq(module, m, space),
        pb.character_multiplicativity_check(param, module.lq),
    ])
    return results


def verify_all(twice_cutoff: int = 1, seed: int = 0, samples: int = 20,
               twice_window: Optional[int] = None, ctx: Optional[NumericContext] = None,
               mu: int = 0, lam: int = 0) -> List[CheckResult]:
    """Every group, ordered as VERIFY_GROUPS."""
    results = verify_finite(seed, samples, ctx) + verify_double(
        twice_cutoff, mu, lam, seed, samples, twice_window, ctx)
    order = {group: n for n, group in enumerate(VERIFY_GROUPS)}
    return sorted(results, key=lambda check: order.get(check.group, len(order)))
