"""
Double Service
--------------

The Drinfeld double G_q = K_q ⋈ K̂_q, its Borel subgroup B_q = T ⋈ K̂_q,
the restriction π_B = π⊗id between them, and the lattice group
L_q = T × A_q.

Both twisted descriptors share one construction: the algebra is the plain
tensor product A(H)⊗A(K̂_q) and the coproduct is

    Δ(a⊗f) = X₂₃ (a₁⊗f₁⊗a₂⊗f₂) X₂₃⁻¹,   X = Σ ω^σ_ij ⊗ t(u^σ_ij),

with t = id for the double and t = π (restriction to the torus) for the
Borel subgroup. The antipode is S(x) = U (S⊗Ŝ)(x) U⁻¹ with U = Σ t(S(u_x))⊗ω_x.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

from app.models.descriptor import QGroupDescriptor
from app.models.elements import AlgElem, TensorElem, accumulate
from app.models.labels import DualLabel, PWLabel, spin_text
from app.models.multiplier import Multiplier
from app.models.report import CheckResult
from app.models.scalar import Scalar
from app.models.subgroup_map import SubgroupMap
from app.services import hopf_core as hc
from app.services.lattice import LatticeDescriptor, TensorDescriptor, tensor_multiplier, torus_algebra
from app.services.suq2 import (
    DualBlockDescriptor,
    PeterWeylDescriptor,
    as_pw,
    dual_algebra,
    k_lambda,
    twist_element,
)

logger = logging.getLogger(__name__)

ONE = Scalar(1)

Sparse = Dict[Any, Scalar]


def _mul_sparse(algebra, left: Sparse, right: Sparse) -> Sparse:
    result: Sparse = {}
    for a, x in left.items():
        for b, y in right.items():
            for out, z in algebra.mul_basis(a, b).items():
                accumulate(result, out, x * y * z)
    return result


def _apply_sparse(linear: Callable[[Any], Sparse], vector: Sparse) -> Sparse:
    result: Sparse = {}
    for label, value in vector.items():
        for out, coeff in linear(label).items():
            accumulate(result, out, coeff * value)
    return result


class TwistedDescriptor(TensorDescriptor):
    """
    A(H)⊗A(K̂_q) with the coproduct conjugated by X₂₃.

    The grade of a pair is the spin of its dual leg, so the coproduct window
    and the block structure are those of A(K̂_q).
    """

    def __init__(self, left: QGroupDescriptor, dual: DualBlockDescriptor,
                 twist: Callable[[DualLabel], Sparse], name: str, basis: Optional[list] = None,
                 dual_haar: Optional[Callable[[DualLabel], Scalar]] = None):
        super().__init__(left, dual, name=name, basis=basis)
        self.dual = dual
        self.twist = twist
        self.dual_haar = dual_haar or dual.haar_basis
        self._triples: Dict[Tuple[Any, ...], Sparse] = {}

    @property
    def comul_window(self) -> Optional[int]:
        return self.dual.window

    @property
    def block_diagonal(self) -> bool:
        return True

    def grade(self, label: Any) -> int:
        return self.dual.grade(label[1])

    def _conjugate(self, first: Sparse, a: Any, last: Sparse, key: Tuple[Any, ...]) -> Sparse:
        """first·a·last in the left algebra, cached per key."""
        if key not in self._triples:
            self._triples[key] = _mul_sparse(self.left, _mul_sparse(self.left, first, {a: ONE}), last)
        return self._triples[key]

    def _left_antipode(self, vector: Sparse) -> Sparse:
        return _apply_sparse(self.left.antipode_basis, vector)

    def _sandwich(self, g: DualLabel):
        """Pairs (x, y) of matrix units with ω_x·g·ω_y ≠ 0, and the resulting unit."""
        t = g.twice_l
        for p in range(t + 1):
            for r in range(t + 1):
                yield DualLabel(t, p, g.i), DualLabel(t, g.j, r), DualLabel(t, p, r)

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        a, f = label
        delta_left = self.left.comul_basis(a)
        table: Dict[Tuple[Any, Any], Scalar] = {}
        for (f1, f2), c in self.dual.comul_basis(f, right_grades).items():
            for x, y, middle in self._sandwich(f1):
                u_x, s_u_y = self.twist(x), self._left_antipode(self.twist(y))
                if not u_x or not s_u_y:
                    continue
                for (a1, a2), d in delta_left.items():
                    product = self._conjugate(u_x, a2, s_u_y, ("comul", x, a2, y))
                    for out, e in product.items():
                        accumulate(table, ((a1, middle), (out, f2)), c * d * e)
        return table

    def antipode_basis(self, label: Any) -> Dict[Any, Scalar]:
        a, f = label
        result: Sparse = {}
        s_a = self.left.antipode_basis(a)
        for g, c in self.dual.antipode_basis(f).items():
            for x, y, middle in self._sandwich(g):
                s_u_x, u_y = self._left_antipode(self.twist(x)), self.twist(y)
                if not s_u_x or not u_y:
                    continue
                for s_label, d in s_a.items():
                    product = self._conjugate(s_u_x, s_label, u_y, ("antipode", x, s_label, y))
                    for out, e in product.items():
                        accumulate(result, (out, middle), c * d * e)
        return result

    def antipode_inv_basis(self, label: Any) -> Dict[Any, Scalar]:
        a, f = label
        result: Sparse = {}
        for x, y, middle in self._sandwich(f):
            u_x, s_u_y = self.twist(x), self._left_antipode(self.twist(y))
            if not u_x or not s_u_y:
                continue
            inner = self._conjugate(u_x, a, s_u_y, ("comul", x, a, y))
            left_part = _apply_sparse(self.left.antipode_inv_basis, inner)
            for g, c in self.dual.antipode_inv_basis(middle).items():
                for out, d in left_part.items():
                    accumulate(result, (out, g), c * d)
        return result

    def haar_basis(self, label: Any) -> Scalar:
        first = self.left.haar_basis(label[0])
        if first.is_zero():
            return first
        return first * self.dual_haar(label[1])

    def haar_product(self, left: Any, right: Any) -> Scalar:
        first = self.left.haar_product(left[0], right[0])
        if first.is_zero():
            return first
        second = sum((value * self.dual_haar(out)
                      for out, value in self.dual.mul_basis(left[1], right[1]).items()), Scalar(0))
        return first * second


def build_double(twice_cutoff: int, window: Optional[int] = None) -> TwistedDescriptor:
    """
    A(G_q) = A(K_q)⊗A(K̂_q) on the basis u^{(l)}_{ij}⊗ω^{(σ)}_{kl} with l, σ ≤ L.

    The dual coproduct keeps spins ≤ window; the Peter-Weyl factor is built
    with enough headroom for two twisted coproducts of basis elements.

    Args:
        twice_cutoff: Doubled cutoff spin 2L
        window: Doubled dual window (default L/2 rounded down, at least ½ when L > 0)
    """
    if window is None:
        window = max(twice_cutoff // 2, min(twice_cutoff, 1))
    pw = PeterWeylDescriptor(twice_cutoff + 4 * window)
    dual = dual_algebra(twice_cutoff, window)
    basis = [(a, f) for a in pw.basis if a.twice_l <= twice_cutoff for f in dual.basis]
    double = TwistedDescriptor(pw, dual, lambda x: {as_pw(x): ONE},
                               name=f"A(G_q)[L={spin_text(twice_cutoff)}]", basis=basis,
                               dual_haar=dual.right_haar_basis)
    identity = Multiplier.identity(double)
    double.modular = double.modular_sqrt = double.modular_inv_sqrt = identity
    double.unimodular = True
    double.twice_cutoff = twice_cutoff
    logger.info(f"Built {double.name}: {len(basis)} basis elements, window {spin_text(window)}")
    return double


def twist_elements(double: TwistedDescriptor) -> Tuple[TensorElem, TensorElem]:
    """W and W⁻¹ of the double, over the dual window."""
    return (twist_element(double.dual, double.left),
            twist_element(double.dual, double.left, inverse=True))


def _torus_twist(x: DualLabel) -> Sparse:
    return {x.weight_i(): ONE} if x.i == x.j else {}


def build_borel(double: TwistedDescriptor) -> Tuple[TwistedDescriptor, SubgroupMap]:
    """
    A(B_q) = A(T)⊗A(K̂_q) with the coproduct twisted by (π⊗id)(W), and the
    restriction π_B = π⊗id with γ = 1⊗K_{-2ρ}.
    """
    dual = double.dual
    bound = double.twice_cutoff
    torus = torus_algebra(bound)
    basis = [(n, f) for n in torus.basis for f in dual.basis]
    borel = TwistedDescriptor(torus, dual, _torus_twist,
                              name=f"A(B_q)[L={spin_text(bound)}]", basis=basis)
    identity = Multiplier.identity(torus)
    borel.modular = tensor_multiplier(borel, identity, k_lambda(dual, -4))
    borel.modular_sqrt = tensor_multiplier(borel, identity, k_lambda(dual, -2))
    borel.modular_inv_sqrt = tensor_multiplier(borel, identity, k_lambda(dual, 2))
    borel.unimodular = False

    def restrict(label):
        a, f = label
        return {(a.weight_i(), f): ONE} if a.i == a.j else {}

    gamma = borel.modular_sqrt
    m = SubgroupMap(double, borel, restrict, gamma=gamma, name="B_q")
    logger.info(f"Built {borel.name} with {len(basis)} basis elements")
    return borel, m


def build_lq(bound: int, window: Optional[int] = None) -> TensorDescriptor:
    """D(L_q) = D(T)⊗D(A_q) with the untwisted tensor structure."""
    dt = LatticeDescriptor("D(T)", "delta", bound, prefix="e^", window=window)
    daq = LatticeDescriptor("D(A_q)", "group", bound, prefix="d_")
    return TensorDescriptor(dt, daq, name="D(L_q)")


def dbq_convolution(x: AlgElem, y: AlgElem) -> AlgElem:
    """
    Convolution product of D(B_q).

    Raises:
        ValueError: If the elements do not live on a Borel descriptor
    """
    if not isinstance(x.algebra, TwistedDescriptor) or not isinstance(x.algebra.left, LatticeDescriptor):
        raise ValueError(f"{x.algebra.name} is not a Borel descriptor")
    return hc.conv_mul(x, y)


# identity checks


def _result(name: str, failures: List[Any], identity: str, samples: int) -> CheckResult:
    detail = f"failed on {', '.join(str(f) for f in failures[:5])}" if failures else ""
    return CheckResult.from_flag(name, not failures, identity=identity, detail=detail,
                                 samples=samples, group="double")


def _push(m: SubgroupMap, t: TensorElem) -> TensorElem:
    result: Dict[Tuple[Any, ...], Scalar] = {}
    for key, value in t.coeffs.items():
        images = [m.pi(label) for label in key]
        partial: Dict[Tuple[Any, ...], Scalar] = {(): value}
        for image in images:
            partial = {k + (out,): v * c for k, v in partial.items() for out, c in image.items()}
        for k, v in partial.items():
            accumulate(result, k, v)
    return TensorElem(tuple(m.target for _ in t.algebras), result)


def borel_intertwining_check(m: SubgroupMap, labels: Optional[List[Any]] = None) -> CheckResult:
    """(π_B⊗π_B)∘Δ_G = Δ_B∘π_B and π_B∘S_G = S_B∘π_B on basis elements."""
    labels = list(labels if labels is not None else m.source.basis)
    failures = []
    for label in labels:
        f = AlgElem.basis(m.source, label)
        image = m.apply_pi(f)
        if _push(m, hc.comul(f)) != hc.comul(image):
            failures.append(("comul", m.source.label_to_text(label)))
        if m.apply_pi(hc.antipode(f)) != hc.antipode(image):
            failures.append(("antipode", m.source.label_to_text(label)))
    return _result("borel_intertwining", failures, "(π⊗π)Δ_G = Δ_Bπ, πS_G = S_Bπ", len(labels))


def expectation_formula_check(m: SubgroupMap, labels: Optional[List[Any]] = None) -> CheckResult:
    """E(a⊗f) = π(a)⊗fK_{-2ρ} and ε_B(E(x)) = ε_G(x)."""
    from app.services.induction import cond_expect

    labels = list(labels if labels is not None else m.source.basis)
    k = k_lambda(m.target.dual, -2)
    failures = []
    for a, f in labels:
        x = AlgElem.basis(m.source, (a, f))
        expected: Sparse = {}
        if a.i == a.j:
            for g, c in k.right_act(f).items():
                accumulate(expected, (a.weight_i(), g), c)
        expectation = cond_expect(m, x)
        if expectation != AlgElem(m.target, expected):
            failures.append(("formula", m.source.label_to_text((a, f))))
        if a.i == a.j and hc.counit(expectation) != hc.counit(x):
            failures.append(("counit", m.source.label_to_text((a, f))))
    return _result("expectation_formula", failures, "E(a⊗f) = π(a)⊗fK_{-2ρ}", len(labels))


def gamma_grouplike_check(m: SubgroupMap) -> CheckResult:
    """Δ_B(xγ) = Δ_B(x)(γ⊗γ) on basis elements."""
    borel, gamma = m.target, m.gamma
    failures = []
    for label in borel.basis:
        x = AlgElem.basis(borel, label)
        lhs = hc.comul(gamma.act_right(x))
        rhs = hc.apply_leg(hc.apply_leg(hc.comul(x), 0, gamma.right_act), 1, gamma.right_act)
        if lhs != rhs:
            failures.append(borel.label_to_text(label))
    return _result("gamma_grouplike", failures, "Δ_B(γ) = γ⊗γ", len(borel.basis))


def borel_modular_check(borel: TwistedDescriptor) -> CheckResult:
    """(φ_B⊗id)Δ_B(x) = φ_B(x)·(1⊗K_{-4ρ}) on the exact components."""
    from app.services.axioms import check_modular_property

    failures = [borel.label_to_text(label) for label in borel.basis
                if not check_modular_property(borel, label)]
    return _result("borel_modular", failures, "(φ_B⊗id)Δ_B = φ_B(·)δ_B, δ_B = 1⊗K_{-4ρ}",
                   len(borel.basis))


def unit_like_check(double: TwistedDescriptor) -> CheckResult:
    """Δ_G(1⊗ω^{(0)}) equals (1⊗ω^{(0)})-type unit components on the window."""
    label = (PWLabel(0, 0, 0), DualLabel(0, 0, 0))
    delta = hc.comul(AlgElem.basis(double, label))
    counit_left = hc.tensor_to_elem(hc.contract_leg(delta, 0, double.counit_basis))
    ok = counit_left == AlgElem.basis(double, label)
    return _result("unit_like", [] if ok else ["1⊗ω0"], "(ε⊗id)Δ_G(1⊗ω⁰) = 1⊗ω⁰", 1)
