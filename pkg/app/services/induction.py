"""
Induction Service
-----------------

The induction module E(G) of a closed quantum subgroup: conditional
expectation, the D(B)-module actions on D(G), the D(B)-valued inner product,
the operators ρ_f, the induced representation E(G)⊗_{D(B)}V and the checks
that compare it with the classical Frobenius formula and with the
L2(G)⊗V picture.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.errors import NonStarRepresentationError
from app.models.elements import AlgElem, accumulate
from app.models.groups import FiniteGroupTable, SubgroupSpec
from app.models.multiplier import Multiplier
from app.models.report import CheckResult
from app.models.representation import InducedRep, Matrix, RepOnSpace, identity_matrix
from app.models.scalar import NumericContext, Scalar
from app.models.subgroup_map import SubgroupMap
from app.services import hopf_core as hc
from app.services.coeff import eval_matrix
from app.services.linear_algebra import (
    exact_pivots,
    exact_rank,
    exact_solve,
    mat_mul,
    matrices_equal,
    transpose,
)

logger = logging.getLogger(__name__)


def cond_expect(m: SubgroupMap, f: AlgElem) -> AlgElem:
    """E(f) = π(f)γ."""
    return m.gamma.act_right(m.apply_pi(f))


def _right_grades(m: SubgroupMap, h: AlgElem):
    if m.source.block_diagonal and m.target.block_diagonal:
        return {m.target.grade(label) for label in hc.antipode_inv(h).coeffs}
    return None


def act_right(m: SubgroupMap, f: AlgElem, h: AlgElem) -> AlgElem:
    """
    Right action of D(B) on D(G):
    f·h = (id⊗φ_B)[(1⊗S⁻¹(h))(id⊗E)(Δ(f))].

    Raises:
        TruncationError: If a product leaves the safe sub-span
    """
    s_inv_h = hc.antipode_inv(h)
    delta = hc.comul(f, right_grades=_right_grades(m, h))
    weights: Dict[Any, Scalar] = {}
    result: Dict[Any, Scalar] = {}
    for (x1, x2), c in delta.coeffs.items():
        if x2 not in weights:
            expected = cond_expect(m, AlgElem.basis(m.source, x2))
            weights[x2] = hc.haar_pair(s_inv_h, expected) if not expected.is_zero() else Scalar(0)
        if not weights[x2].is_zero():
            accumulate(result, x1, c * weights[x2])
    return AlgElem(m.source, result)


def act_left(m: SubgroupMap, h: AlgElem, f: AlgElem) -> AlgElem:
    """
    Left action of D(B) on D(G):
    h·f = (φ_B⊗id)[((S⁻¹∘E⊗id)Δ(f))(h⊗1)].
    """
    delta = hc.comul(f)
    weights: Dict[Any, Scalar] = {}
    result: Dict[Any, Scalar] = {}
    for (x1, x2), c in delta.coeffs.items():
        if x1 not in weights:
            expected = cond_expect(m, AlgElem.basis(m.source, x1))
            weights[x1] = (hc.haar_pair(hc.antipode_inv(expected), h)
                           if not expected.is_zero() else Scalar(0))
        if not weights[x1].is_zero():
            accumulate(result, x2, c * weights[x1])
    return AlgElem(m.source, result)


def pi_hat_as_multiplier(m: SubgroupMap, h: AlgElem) -> Multiplier:
    """π̂(h) in M(D(G)): π̂(h)*f = h·f and f*π̂(h) = f·h."""
    source = m.source

    def left(label):
        return act_left(m, h, AlgElem.basis(source, label)).coeffs

    def right(label):
        return act_right(m, AlgElem.basis(source, label), h).coeffs

    return Multiplier(source, left, right, name=f"pi_hat({h!r})")


def dvalued_inner(m: SubgroupMap, f: AlgElem, g: AlgElem) -> AlgElem:
    """⟨f, g⟩_{D(B)} = E(f* * g)."""
    return cond_expect(m, hc.conv_mul(hc.conv_star(f), g))


# ρ-operators L2(B) -> L2(G)


def _coordinates(element: AlgElem, labels: Sequence[Any]) -> List[Scalar]:
    return [element.coeff(label) for label in labels]


def rho_op(m: SubgroupMap, f: AlgElem, source_labels: Optional[Sequence[Any]] = None,
           target_labels: Optional[Sequence[Any]] = None) -> Matrix:
    """Matrix of η ↦ f·η; rows indexed by source labels, columns by target labels."""
    source_labels = list(source_labels if source_labels is not None else m.source.basis)
    target_labels = list(target_labels if target_labels is not None else m.target.basis)
    columns = [_coordinates(act_right(m, f, AlgElem.basis(m.target, label)), source_labels)
               for label in target_labels]
    return transpose(columns)


def rho_adjoint(m: SubgroupMap, f: AlgElem, source_labels: Optional[Sequence[Any]] = None,
                target_labels: Optional[Sequence[Any]] = None) -> Matrix:
    """
    Adjoint of ρ_f for the two GNS forms: G_B⁻¹ ρ_f^T G_G.

    Raises:
        DivisionByZeroError: If the Gram matrix of the target labels is singular
    """
    source_labels = list(source_labels if source_labels is not None else m.source.basis)
    target_labels = list(target_labels if target_labels is not None else m.target.basis)
    gram_source = hc.gram_matrix(AlgElem.basis(m.source, label) for label in source_labels)
    gram_target = hc.gram_matrix(AlgElem.basis(m.target, label) for label in target_labels)
    rho = rho_op(m, f, source_labels, target_labels)
    return exact_solve(gram_target, mat_mul(transpose(rho), gram_source))


def convolution_operator(k: AlgElem, labels: Optional[Sequence[Any]] = None) -> Matrix:
    """Matrix of η ↦ k*η on the span of the given labels."""
    labels = list(labels if labels is not None else k.algebra.basis)
    columns = [_coordinates(hc.conv_mul(k, AlgElem.basis(k.algebra, label)), labels) for label in labels]
    return transpose(columns)


# induced representations


def check_star_rep(rep: RepOnSpace) -> None:
    """
    Verify ⟨v, b·w⟩ = ⟨b*·v, w⟩ on basis elements of the acting algebra.

    Raises:
        NonStarRepresentationError: On the first failing label
    """
    algebra = rep.algebra
    for label in algebra.basis:
        element = AlgElem.basis(algebra, label)
        lhs = mat_mul(rep.inner, rep.matrix(element))
        rhs = mat_mul(transpose(rep.matrix(hc.conv_star(element))), rep.inner)
        if not matrices_equal(lhs, rhs):
            logger.error(f"Representation {rep.name} is not a *-representation at {label}")
            raise NonStarRepresentationError(
                f"Representation {rep.name} is not compatible with its inner product at {label}"
            )


def induce(m: SubgroupMap, rep: RepOnSpace, labels: Optional[Sequence[Any]] = None) -> InducedRep:
    """
    Induced representation E(G)⊗_{D(B)}V.

    Representatives f⊗v carry the semi-inner product ⟨f⊗v, g⊗w⟩ = ⟨v, ⟨f,g⟩*w⟩;
    the null space is quotiented exactly and D(G) acts by convolution on
    the first factor.

    Args:
        m: Subgroup map G -> B
        rep: *-representation of D(B) with an inner product
        labels: Labels of D(G) used as representatives (all of them by default)

    Returns:
        InducedRep with the reduced Gram matrix and the action tables

    Raises:
        NonStarRepresentationError: If rep is not a *-representation
    """
    check_star_rep(rep)
    labels = list(labels if labels is not None else m.source.basis)
    representatives: List[Tuple[Any, int]] = [(label, i) for label in labels for i in range(rep.dim)]
    index = {pair: n for n, pair in enumerate(representatives)}
    logger.info(f"Inducing {rep.name} along {m.name}: {len(representatives)} representatives")

    unit_inner = matrices_equal(rep.inner, identity_matrix(rep.dim))
    inner_matrices: Dict[Tuple[Any, Any], Matrix] = {}
    for a in labels:
        for b in labels:
            k = dvalued_inner(m, AlgElem.basis(m.source, a), AlgElem.basis(m.source, b))
            action = rep.matrix(k)
            inner_matrices[(a, b)] = action if unit_inner else mat_mul(rep.inner, action)
    gram = [[inner_matrices[(a, b)][i][j] for (b, j) in representatives] for (a, i) in representatives]

    pivots = exact_pivots(gram)
    reduced = [[gram[r][s] for s in pivots] for r in pivots]
    logger.info(f"Induced module has dimension {len(pivots)}")
    if not pivots:
        return InducedRep(m.source, m.name, representatives, gram, [], {}, [])
    # quotient coordinates of a full vector y: reduced⁻¹·gram[R,:]·y
    projection = exact_solve(reduced, [gram[r] for r in pivots])

    actions: Dict[Any, Matrix] = {}
    for x in m.source.basis:
        element = AlgElem.basis(m.source, x)
        columns = []
        for r in pivots:
            label, i = representatives[r]
            image = hc.conv_mul(element, AlgElem.basis(m.source, label))
            column = [Scalar(0)] * len(pivots)
            for out, value in image.coeffs.items():
                if (out, i) not in index:
                    raise ValueError(f"Representative labels are not closed under convolution at {out}")
                n = index[(out, i)]
                for row in range(len(pivots)):
                    if not projection[row][n].is_zero():
                        column[row] = column[row] + value * projection[row][n]
            columns.append(column)
        actions[x] = transpose(columns)
    basis = [[Scalar(1) if n == r else Scalar(0) for n in range(len(representatives))] for r in pivots]
    return InducedRep(m.source, m.name, representatives, gram, basis, actions, reduced)


def essentialness_check(rep: RepOnSpace) -> bool:
    """The span of all f*v equals V, i.e. the stacked action matrices have full rank."""
    if rep.dim == 0:
        return True
    stacked = [[] for _ in range(rep.dim)]
    for label in rep.algebra.basis:
        matrix = rep.actions.get(label)
        if matrix is None:
            continue
        for i in range(rep.dim):
            stacked[i].extend(matrix[i])
    if not stacked[0]:
        return False
    return exact_rank(stacked) == rep.dim


# classical oracle


def mackey_oracle(group: FiniteGroupTable, subgroup: SubgroupSpec,
                  character: Dict[str, Any]) -> List[Any]:
    """
    Frobenius formula χ_Ind(g) = (1/|B|)·Σ_{x∈G, x⁻¹gx∈B} χ_V(x⁻¹gx), evaluated
    on one representative per conjugacy class of G.

    Character values may be Scalars, integers or exact sympy numbers
    (e.g. roots of unity); sympy values are simplified.
    """
    values = []
    for cls in group.conjugacy_classes():
        g = cls[0]
        total = 0
        for x in range(group.order):
            conjugate = group.conjugate(x, g)
            if conjugate in subgroup.members:
                total = total + character[group.elements[conjugate]]
        if isinstance(total, Scalar):
            values.append(total / subgroup.order)
        else:
            values.append(sympy.simplify(sympy.expand_complex(sympy.Rational(1, subgroup.order) * total)))
    return values


def induced_character(group: FiniteGroupTable, induced: InducedRep) -> List[Scalar]:
    """Character |G|·Tr(δ_g) of an induced representation of D(Fun(G))."""
    values = []
    for cls in group.conjugacy_classes():
        matrix = induced.actions.get(group.elements[cls[0]])
        if matrix is None:
            values.append(Scalar(0))
            continue
        trace = sum((matrix[i][i] for i in range(induced.dimension)), Scalar(0))
        values.append(trace * group.order)
    induced.character = values
    return values


# the L2(G)⊗V picture


def _beta_left(m: SubgroupMap, rep: RepOnSpace, h: AlgElem, eta: AlgElem,
               w: List[Scalar]) -> List[Tuple[Any, List[Scalar]]]:
    """h*(η⊗w) = Σ η₂ ⊗ (π(S⁻¹(η₁))h)*w as (label, vector) terms."""
    terms = []
    for (z1, z2), c in hc.comul(eta).coeffs.items():
        weight = hc.mul(m.apply_pi(hc.antipode_inv(AlgElem.basis(m.source, z1))), h)
        if weight.is_zero():
            continue
        vector = rep.act(weight, w)
        terms.append((z2, [c * value for value in vector]))
    return terms


def _inner_v(rep: RepOnSpace, v: List[Scalar], w: List[Scalar]) -> Scalar:
    total = Scalar(0)
    for i in range(rep.dim):
        if v[i].is_zero():
            continue
        for j in range(rep.dim):
            if not w[j].is_zero() and not rep.inner[i][j].is_zero():
                total = total + v[i] * rep.inner[i][j] * w[j]
    return total


def psi_side_inner(m: SubgroupMap, rep: RepOnSpace, xi: AlgElem, f: AlgElem, v: List[Scalar],
                   eta: AlgElem, g: AlgElem, w: List[Scalar]) -> Scalar:
    """⟨Ψ(ξ⊗f⊗v), Ψ(η⊗g⊗w)⟩ with Ψ(ξ⊗f⊗v) = Δ(ξ)(f⊗1)⊗v."""
    total = Scalar(0)
    for (x1, x2), c in hc.comul(xi).coeffs.items():
        left = hc.mul(AlgElem.basis(m.source, x1), f)
        if left.is_zero():
            continue
        for (y1, y2), d in hc.comul(eta).coeffs.items():
            right = hc.mul(AlgElem.basis(m.source, y1), g)
            if right.is_zero():
                continue
            h = dvalued_inner(m, left, right)
            if h.is_zero():
                continue
            for z2, vector in _beta_left(m, rep, h, AlgElem.basis(m.source, y2), w):
                overlap = hc.gns_inner(AlgElem.basis(m.source, x2), AlgElem.basis(m.source, z2))
                if not overlap.is_zero():
                    total = total + c * d * overlap * _inner_v(rep, v, vector)
    return total


def direct_side_inner(m: SubgroupMap, rep: RepOnSpace, xi: AlgElem, f: AlgElem, v: List[Scalar],
                      eta: AlgElem, g: AlgElem, w: List[Scalar]) -> Scalar:
    """⟨ξ,η⟩_{L2(G)}·⟨v, ⟨f,g⟩*w⟩_V."""
    return hc.gns_inner(xi, eta) * _inner_v(rep, v, rep.act(dvalued_inner(m, f, g), w))


def psi_isometry_check(m: SubgroupMap, rep: RepOnSpace, samples: Sequence[Tuple]) -> CheckResult:
    """
    Compare both ends of the inner-product chain for Ψ on each sample
    (ξ, f, v, η, g, w).
    """
    failures = []
    for n, sample in enumerate(samples):
        lhs = psi_side_inner(m, rep, *sample)
        rhs = direct_side_inner(m, rep, *sample)
        if lhs != rhs:
            logger.debug(f"Isometry sample {n}: {lhs.to_text()} != {rhs.to_text()}")
            failures.append(n)
    detail = f"failed samples {failures[:5]}" if failures else ""
    return CheckResult.from_flag(
        "psi_isometry", not failures,
        identity="⟨Ψ(ξ⊗f⊗v), Ψ(η⊗g⊗w)⟩ = ⟨ξ,η⟩⟨v,⟨f,g⟩*w⟩",
        detail=detail, samples=len(samples), group="psi-isometry",
    )


# identity checks


def _result(name: str, failures: List[Any], identity: str, samples: int, group: str) -> CheckResult:
    detail = f"failed samples {failures[:5]}" if failures else ""
    return CheckResult.from_flag(name, not failures, identity=identity, detail=detail,
                                 samples=samples, group=group)


def expectation_star_check(m: SubgroupMap, samples: Sequence[AlgElem]) -> CheckResult:
    """E(f*) = E(f)* for each f in D(G)."""
    failures = [n for n, f in enumerate(samples)
                if cond_expect(m, hc.conv_star(f)) != hc.conv_star(cond_expect(m, f))]
    return _result("expectation_star", failures, "E(f*) = E(f)*", len(samples),
                   "conditional expectation")


def expectation_module_check(m: SubgroupMap, pairs: Sequence[Tuple[AlgElem, AlgElem]]) -> CheckResult:
    """E(f·h) = E(f)*h for f in D(G), h in D(B)."""
    failures = [n for n, (f, h) in enumerate(pairs)
                if cond_expect(m, act_right(m, f, h)) != hc.conv_mul(cond_expect(m, f), h)]
    return _result("expectation_module", failures, "E(f·h) = E(f)*h", len(pairs),
                   "conditional expectation")


def counit_restriction_check(m: SubgroupMap, labels: Optional[Sequence[Any]] = None) -> CheckResult:
    labels = list(labels if labels is not None else m.source.basis)
    failures = []
    for label in labels:
        f = AlgElem.basis(m.source, label)
        if hc.counit(cond_expect(m, f)) != hc.counit(f):
            failures.append(m.source.label_to_text(label))
    return _result("counit_restriction", failures, "ε_B(E(x)) = ε_G(x)", len(labels),
                   "conditional expectation")


def module_laws_check(m: SubgroupMap, samples: Sequence[Tuple[AlgElem, AlgElem, AlgElem, AlgElem]]
                      ) -> CheckResult:
    """
    Bimodule laws for samples (f, g, h, k) with f, g in D(G) and h, k in D(B):
    (g*f)·h = g*(f·h), (f·h)·k = f·(h*k), h·(f*g) = (h·f)*g, (k*h)·f = k·(h·f)
    and the multiplier law (f·h)*g = f*(h·g).
    """
    failures = []
    for n, (f, g, h, k) in enumerate(samples):
        if act_right(m, hc.conv_mul(g, f), h) != hc.conv_mul(g, act_right(m, f, h)):
            failures.append(("left-linear", n))
        if act_right(m, act_right(m, f, h), k) != act_right(m, f, hc.conv_mul(h, k)):
            failures.append(("right-module", n))
        if act_left(m, h, hc.conv_mul(f, g)) != hc.conv_mul(act_left(m, h, f), g):
            failures.append(("right-linear", n))
        if act_left(m, hc.conv_mul(k, h), f) != act_left(m, k, act_left(m, h, f)):
            failures.append(("left-module", n))
        if hc.conv_mul(act_right(m, f, h), g) != hc.conv_mul(f, act_left(m, h, g)):
            failures.append(("multiplier", n))
    return _result("module_laws", failures, "D(B)-bimodule laws on D(G)", len(samples), "inner product")


def pi_hat_star_check(m: SubgroupMap, pairs: Sequence[Tuple[AlgElem, AlgElem]]) -> CheckResult:
    """(π̂(h)*f)* = f* * π̂(h*) and (f*π̂(h))* = π̂(h*)*f*."""
    failures = []
    for n, (f, h) in enumerate(pairs):
        f_star, h_star = hc.conv_star(f), hc.conv_star(h)
        if hc.conv_star(act_left(m, h, f)) != act_right(m, f_star, h_star):
            failures.append(("left", n))
        if hc.conv_star(act_right(m, f, h)) != act_left(m, h_star, f_star):
            failures.append(("right", n))
    return _result("pi_hat_star", failures, "π̂(h*) = π̂(h)*", len(pairs), "inner product")


def sesquilinearity_check(m: SubgroupMap, samples: Sequence[Tuple[AlgElem, AlgElem, AlgElem]]
                          ) -> CheckResult:
    """⟨f, g·h⟩ = ⟨f,g⟩*h and ⟨f,g⟩* = ⟨g,f⟩ for samples (f, g, h)."""
    failures = []
    for n, (f, g, h) in enumerate(samples):
        inner = dvalued_inner(m, f, g)
        if dvalued_inner(m, f, act_right(m, g, h)) != hc.conv_mul(inner, h):
            failures.append(("linear", n))
        if hc.conv_star(inner) != dvalued_inner(m, g, f):
            failures.append(("hermitian", n))
    return _result("sesquilinearity", failures, "⟨f,g·h⟩ = ⟨f,g⟩*h, ⟨f,g⟩* = ⟨g,f⟩",
                   len(samples), "inner product")


def rho_identity_check(m: SubgroupMap, pairs: Sequence[Tuple[AlgElem, AlgElem]],
                       source_labels: Optional[Sequence[Any]] = None,
                       target_labels: Optional[Sequence[Any]] = None,
                       ctx: Optional[NumericContext] = None) -> CheckResult:
    """
    ⟨f,g⟩_{D(B)} = ρ_f*ρ_g as operators on L2(B).

    With a NumericContext both sides are evaluated at ctx.q_value and compared
    to ctx.tolerance; otherwise the comparison is exact.
    """
    target_labels = list(target_labels if target_labels is not None else m.target.basis)
    failures = []
    for n, (f, g) in enumerate(pairs):
        lhs = convolution_operator(dvalued_inner(m, f, g), target_labels)
        rhs = mat_mul(rho_adjoint(m, f, source_labels, target_labels),
                      rho_op(m, g, source_labels, target_labels))
        if ctx is None:
            ok = matrices_equal(lhs, rhs)
        else:
            ok = bool(np.allclose(eval_matrix(lhs, ctx), eval_matrix(rhs, ctx), atol=ctx.tolerance))
        if not ok:
            failures.append(n)
    mode = "exact" if ctx is None else f"q={ctx.q_value}"
    return _result(f"rho_identity[{mode}]", failures, "⟨f,g⟩ = ρ_f*ρ_g", len(pairs), "ρ-operators")


def mackey_check(group: FiniteGroupTable, subgroup: SubgroupSpec, m: SubgroupMap,
                 rep: RepOnSpace, character: Dict[str, Any]) -> CheckResult:
    """Character of induce(m, rep) against the Frobenius formula."""
    induced = induce(m, rep)
    got = induced_character(group, induced)
    expected = [Scalar(value) if not isinstance(value, Scalar) else value
                for value in mackey_oracle(group, subgroup, character)]
    ok = got == expected
    detail = "" if ok else f"{[v.to_text() for v in got]} != {[v.to_text() for v in expected]}"
    return CheckResult.from_flag(f"mackey[{subgroup.name}:{rep.name}]", ok,
                                 identity="χ_Ind = Frobenius formula", detail=detail,
                                 samples=1, group="inner product")
