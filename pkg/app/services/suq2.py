"""
SU_q(2) Backend
---------------

Truncated Peter-Weyl algebra A(K_q) of K_q = SU_q(2), its discrete dual
A(K̂_q) = ⊕_{l≤L} End(V_l), the elements K_λ, the torus quotient
A(K_q) -> A(T) and the quotient A(K̂_q) -> A(A_q).

Spins, weight indices and weights are doubled integers (see app.models.labels).
The fundamental weight is ω, the simple root α = 2ω, (α, α) = 2, so
K_{kω} acts on the weight vector v_a of V_l by q^{k·n_a/2} where
n_a = 2l - 2a. In particular K_{2ρ} = K_α is the generator K.

Structure constants come from q-Clebsch-Gordan intertwiners computed by the
highest-weight recursion over Q(q^{1/2}); nothing is projected past the
cutoff, products that would leave it raise TruncationError.
"""

import hashlib
import json
import logging
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Tuple

from app.errors import TruncationError
from app.models.descriptor import QGroupDescriptor
from app.models.elements import AlgElem, TensorElem, accumulate
from app.models.labels import DualLabel, PWLabel, parse_block_label, spin_text
from app.models.multiplier import Multiplier
from app.models.report import CheckResult
from app.models.representation import Matrix
from app.models.scalar import NumericContext, Scalar
from app.models.subgroup_map import SubgroupMap
from app.services import cache
from app.services import hopf_core as hc
from app.services.coeff import numeric_q_power, q_power, quantum_int
from app.services.lattice import LatticeDescriptor, k_lambda_lattice, torus_algebra, weight_algebra
from app.services.linear_algebra import exact_inverse

logger = logging.getLogger(__name__)

CONVENTIONS = {
    "coproduct": "D(E)=E⊗1+K⊗E, D(F)=F⊗K^-1+1⊗F, D(K)=K⊗K",
    "antipode": "S(E)=-K^-1E, S(F)=-FK, S(K)=K^-1",
    "star": "E*=FK, F*=K^-1E, K*=K",
    "module": "Kv_k=q^(2l-2k)v_k, Ev_k=[2l-k+1]v_(k-1), Fv_k=[k+1]v_(k+1)",
    "norms": "N_0=1, N_(k+1)=q^(-2(l-k))[2l-k]/[k+1]N_k",
    "matrix_coefficients": "u_ij(X)=<v^i, X v_j>",
    "pairing": "<w^s_ij, u^t_kl> = [s=t][i=k][j=l]",
    "dual_coproduct": "<D^(w), u⊗u'> = <w, u'u>",
    "weights": "(a,a)=2, K_(kw) v_a = q^(k n_a/2) v_a",
}

ZERO = Scalar(0)
ONE = Scalar(1)
TRIVIAL = PWLabel(0, 0, 0)


def convention_hash() -> str:
    text = json.dumps(CONVENTIONS, sort_keys=True, ensure_ascii=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _indices(twice_l: int):
    return [(i, j) for i in range(twice_l + 1) for j in range(twice_l + 1)]


def _weight(twice_l: int, index: int) -> int:
    return twice_l - 2 * index


# modules V_l


@lru_cache(maxsize=None)
def norms(twice_l: int) -> Tuple[Scalar, ...]:
    """Invariant norms ⟨v_k, v_k⟩ of the weight basis of V_l."""
    values = [ONE]
    for k in range(twice_l):
        values.append(values[-1] * q_power(-2 * _weight(twice_l, k))
                      * quantum_int(twice_l - k) / quantum_int(k + 1))
    return tuple(values)


@lru_cache(maxsize=None)
def antipode_factors(twice_l: int) -> Tuple[Scalar, ...]:
    """Factors s_k with S(u_ij) = (s_i/s_j)·u_{2l-j, 2l-i}."""
    values = [ONE]
    for k in range(twice_l):
        values.append(-values[-1] * q_power(2 * _weight(twice_l, k))
                      * quantum_int(k + 1) / quantum_int(twice_l - k))
    return tuple(values)


def rep_matrices(twice_l: int) -> Dict[str, Matrix]:
    """Matrices of E, F, K on V_l in the weight basis v_0..v_{2l}."""
    dim = twice_l + 1
    e = [[ZERO] * dim for _ in range(dim)]
    f = [[ZERO] * dim for _ in range(dim)]
    k = [[ZERO] * dim for _ in range(dim)]
    for a in range(dim):
        k[a][a] = q_power(2 * _weight(twice_l, a))
        if a > 0:
            e[a - 1][a] = quantum_int(twice_l - a + 1)
        if a < twice_l:
            f[a + 1][a] = quantum_int(a + 1)
    return {"E": e, "F": f, "K": k}


# Clebsch-Gordan intertwiners V_L -> V_l1⊗V_l2


Vector = Dict[Tuple[int, int], Scalar]


@lru_cache(maxsize=None)
def _highest_weight(t1: int, t2: int, n: int) -> Tuple[Tuple[Tuple[int, int], Scalar], ...]:
    """Highest-weight vector of V_{l1+l2-n} inside V_l1⊗V_l2, leading coefficient 1."""
    coefficient = ONE
    terms = [((0, n), coefficient)]
    for a in range(n):
        coefficient = -coefficient * q_power(2 * (t1 - 2 * a)) \
            * quantum_int(t2 - n + a + 1) / quantum_int(t1 - a)
        terms.append(((a + 1, n - a - 1), coefficient))
    return tuple(terms)


def _lower(t1: int, t2: int, vector: Vector, m: int) -> Vector:
    """Δ(F)·y_m / [m+1]."""
    lowered: Vector = {}
    for (a, b), c in vector.items():
        if a < t1:
            accumulate(lowered, (a + 1, b), c * quantum_int(a + 1) * q_power(-2 * _weight(t2, b)))
        if b < t2:
            accumulate(lowered, (a, b + 1), c * quantum_int(b + 1))
    scale = quantum_int(m + 1)
    return {key: value / scale for key, value in lowered.items()}


@lru_cache(maxsize=None)
def _decomposition(t1: int, t2: int) -> Tuple[Dict[Tuple[int, int], Vector], Dict[Tuple[int, int], Vector]]:
    """
    Intertwiner Q (columns y^L_m) and its inverse P (rows), keyed by (2L, m).

    P is inverted one weight space at a time.
    """
    columns: Dict[Tuple[int, int], Vector] = {}
    for n in range(min(t1, t2) + 1):
        twice_big = t1 + t2 - 2 * n
        vector = dict(_highest_weight(t1, t2, n))
        columns[(twice_big, 0)] = vector
        for m in range(twice_big):
            vector = _lower(t1, t2, vector, m)
            columns[(twice_big, m + 1)] = vector

    rows: Dict[Tuple[int, int], Vector] = {}
    for weight in range(-(t1 + t2), t1 + t2 + 1, 2):
        pairs = [(a, b) for a in range(t1 + 1) for b in range(t2 + 1)
                 if _weight(t1, a) + _weight(t2, b) == weight]
        keys = [(big, m) for (big, m) in columns if _weight(big, m) == weight]
        block = [[columns[key].get(pair, ZERO) for key in keys] for pair in pairs]
        inverse = exact_inverse(block)
        for r, key in enumerate(keys):
            rows[key] = {pair: inverse[r][c] for c, pair in enumerate(pairs) if not inverse[r][c].is_zero()}
    logger.debug(f"Decomposed V_{spin_text(t1)}⊗V_{spin_text(t2)} into {len(columns)} weight vectors")
    return columns, rows


def _cg_position(t1: int, t2: int, twice_big: int, n1: int, n2: int, n: int) -> Optional[Tuple[int, int, int]]:
    if min(t1, t2, twice_big) < 0 or n != n1 + n2:
        return None
    if not abs(t1 - t2) <= twice_big <= t1 + t2 or (t1 + t2 - twice_big) % 2:
        return None
    for twice, weight in ((t1, n1), (t2, n2), (twice_big, n)):
        if abs(weight) > twice or (twice - weight) % 2:
            return None
    return (t1 - n1) // 2, (t2 - n2) // 2, (twice_big - n) // 2


def qcg(t1: int, t2: int, twice_big: int, n1: int, n2: int, n: int) -> Scalar:
    """
    q-Clebsch-Gordan coefficient of v_{n1}⊗w_{n2} in the standard basis
    vector of weight n of V_L ⊂ V_l1⊗V_l2.

    Arguments are doubled spins and doubled weights. The highest-weight
    vector of each V_L has coefficient 1 on v_0⊗w_{l1+l2-L}; lower vectors
    follow from Δ(F). Out-of-range arguments give 0.
    """
    position = _cg_position(t1, t2, twice_big, n1, n2, n)
    if position is None:
        return ZERO
    a, b, m = position
    columns, _ = _decomposition(t1, t2)
    return columns[(twice_big, m)].get((a, b), ZERO)


def qcg_norm(t1: int, t2: int, twice_big: int, n: int) -> Scalar:
    """Squared invariant norm of the standard vector of weight n of V_L ⊂ V_l1⊗V_l2."""
    m = (twice_big - n) // 2
    columns, _ = _decomposition(t1, t2)
    n1, n2 = norms(t1), norms(t2)
    return sum((c * c * n1[a] * n2[b] for (a, b), c in columns[(twice_big, m)].items()), ZERO)


def qcg_squared(t1: int, t2: int, twice_big: int, n1: int, n2: int, n: int) -> Scalar:
    """Square of the coefficient between orthonormal bases, C² = Q²·N_a·N_b/‖y‖²."""
    position = _cg_position(t1, t2, twice_big, n1, n2, n)
    if position is None:
        return ZERO
    a, b, _ = position
    value = qcg(t1, t2, twice_big, n1, n2, n)
    return value * value * norms(t1)[a] * norms(t2)[b] / qcg_norm(t1, t2, twice_big, n)


@lru_cache(maxsize=None)
def product_coeffs(left: PWLabel, right: PWLabel) -> Dict[PWLabel, Scalar]:
    """u^{l1}_{ij}·u^{l2}_{kl} = Σ_L Q[(i,k),(L,m)]·P[(L,n),(j,l)]·u^L_{mn}, without truncation."""
    t1, t2 = left.twice_l, right.twice_l
    columns, rows = _decomposition(t1, t2)
    row_weight = left.weight_i() + right.weight_i()
    col_weight = left.weight_j() + right.weight_j()
    result: Dict[PWLabel, Scalar] = {}
    for twice_big in range(abs(t1 - t2), t1 + t2 + 1, 2):
        if abs(row_weight) > twice_big or abs(col_weight) > twice_big:
            continue
        m = (twice_big - row_weight) // 2
        n = (twice_big - col_weight) // 2
        first = columns[(twice_big, m)].get((left.i, right.i))
        second = rows[(twice_big, n)].get((left.j, right.j))
        if first is None or second is None:
            continue
        value = first * second
        if not value.is_zero():
            result[PWLabel(twice_big, m, n)] = value
    return result


def haar_of_product(left: PWLabel, right: PWLabel) -> Scalar:
    """φ(u_a·u_b): only contragredient partners pair nontrivially."""
    if left.twice_l != right.twice_l:
        return ZERO
    return product_coeffs(left, right).get(TRIVIAL, ZERO)


# A(K_q)


def pw_antipode(label: PWLabel) -> Dict[PWLabel, Scalar]:
    t, s = label.twice_l, antipode_factors(label.twice_l)
    return {PWLabel(t, t - label.j, t - label.i): s[label.i] / s[label.j]}


def pw_antipode_inv(label: PWLabel) -> Dict[PWLabel, Scalar]:
    t, s = label.twice_l, antipode_factors(label.twice_l)
    return {PWLabel(t, t - label.j, t - label.i): s[t - label.i] / s[t - label.j]}


def pw_star(label: PWLabel) -> Dict[PWLabel, Scalar]:
    """u_ij* = (N_j/N_i)·S(u_ji)."""
    t, s, n = label.twice_l, antipode_factors(label.twice_l), norms(label.twice_l)
    return {PWLabel(t, t - label.i, t - label.j): n[label.j] / n[label.i] * s[label.j] / s[label.i]}


class PeterWeylDescriptor(QGroupDescriptor):
    """
    A(K_q) truncated at spin L: basis u^{(l)}_{ij}, l ≤ L.

    The safe sub-span for products is l1 + l2 ≤ L; the coproduct, antipode,
    star and Haar functional are exact on every basis element.
    """

    def __init__(self, twice_cutoff: int, products: Optional[cache.ProductTable] = None):
        if twice_cutoff < 0:
            raise ValueError("cutoff must be a nonnegative half-integer")
        self.twice_cutoff = twice_cutoff
        self.products = dict(products or {})
        super().__init__(
            name=f"A(SU_q(2))[L={spin_text(twice_cutoff)}]",
            basis=[PWLabel(t, i, j) for t in range(twice_cutoff + 1) for i, j in _indices(t)],
            unit={TRIVIAL: ONE},
            unimodular=True,
            truncation={"cutoff": twice_cutoff},
        )

    def label_to_text(self, label: Any) -> str:
        return str(label)

    def text_to_label(self, text: str) -> Any:
        label = parse_block_label(text)
        if not isinstance(label, PWLabel):
            raise ValueError(f"{text!r} is not a Peter-Weyl label")
        self.validate_label(label)
        return label

    def grade(self, label: Any) -> int:
        return label.twice_l

    def mul_basis(self, left: Any, right: Any) -> Dict[Any, Scalar]:
        if left.twice_l + right.twice_l > self.twice_cutoff:
            raise TruncationError(left, right, spin_text(self.twice_cutoff))
        key = (left, right)
        if key not in self.products:
            self.products[key] = product_coeffs(left, right)
        return self.products[key]

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        if right_grades is not None and label.twice_l not in right_grades:
            return {}
        t = label.twice_l
        return {(PWLabel(t, label.i, k), PWLabel(t, k, label.j)): ONE for k in range(t + 1)}

    def counit_basis(self, label: Any) -> Scalar:
        return ONE if label.i == label.j else ZERO

    def antipode_basis(self, label: Any) -> Dict[Any, Scalar]:
        return pw_antipode(label)

    def antipode_inv_basis(self, label: Any) -> Dict[Any, Scalar]:
        return pw_antipode_inv(label)

    def star_basis(self, label: Any) -> Dict[Any, Scalar]:
        return pw_star(label)

    def haar_basis(self, label: Any) -> Scalar:
        return ONE if label == TRIVIAL else ZERO

    def haar_product(self, left: Any, right: Any) -> Scalar:
        return haar_of_product(left, right)

    def safe_products(self) -> cache.ProductTable:
        """Every product inside the safe sub-span."""
        for a in self.basis:
            for b in self.basis:
                if a.twice_l + b.twice_l <= self.twice_cutoff:
                    self.mul_basis(a, b)
        return self.products

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "cutoff": spin_text(self.twice_cutoff), "convention": convention_hash()}


def pw_algebra(twice_cutoff: int, use_cache: bool = False) -> PeterWeylDescriptor:
    """
    Build A(K_q) truncated at spin twice_cutoff/2.

    Args:
        twice_cutoff: Doubled cutoff spin 2L
        use_cache: Read (or write) the product table from the JSON cache

    Raises:
        ValueError: If the cutoff is negative
    """
    products = None
    if use_cache:
        products = cache.load_products(twice_cutoff, convention_hash())
    descriptor = PeterWeylDescriptor(twice_cutoff, products)
    if use_cache and products is None:
        cache.save_products(twice_cutoff, convention_hash(), descriptor.safe_products())
    logger.info(f"Built {descriptor.name} with {len(descriptor.basis)} matrix coefficients")
    return descriptor


# A(K̂_q)


def as_pw(label: DualLabel) -> PWLabel:
    return PWLabel(*label)


def as_dual(label: PWLabel) -> DualLabel:
    return DualLabel(*label)


@lru_cache(maxsize=None)
def _dual_comul_blocks(t1: int, t2: int) -> Dict[DualLabel, Dict[Tuple[DualLabel, DualLabel], Scalar]]:
    """Components of Δ̂ with left leg in block t1 and right leg in block t2."""
    table: Dict[DualLabel, Dict[Tuple[DualLabel, DualLabel], Scalar]] = {}
    for ai, aj in _indices(t1):
        for bi, bj in _indices(t2):
            for out, value in product_coeffs(PWLabel(t2, bi, bj), PWLabel(t1, ai, aj)).items():
                table.setdefault(as_dual(out), {})[(DualLabel(t1, ai, aj), DualLabel(t2, bi, bj))] = value
    return table


def _partner(label) -> PWLabel:
    t = label.twice_l
    return PWLabel(t, t - label.i, t - label.j)


@lru_cache(maxsize=None)
def dual_haar(label: DualLabel) -> Scalar:
    """Left Haar functional φ̂, fixed by φ̂(φ(·u_a)) = ε(u_a)."""
    if label.i != label.j:
        return ZERO
    return ONE / haar_of_product(as_pw(label), _partner(label))


@lru_cache(maxsize=None)
def dual_right_haar(label: DualLabel) -> Scalar:
    """Right Haar functional ψ̂, fixed by ψ̂(φ(u_b·)) = ε(u_b)."""
    if label.i != label.j:
        return ZERO
    return ONE / haar_of_product(_partner(label), as_pw(label))


def k_lambda(descriptor: QGroupDescriptor, k: int) -> Multiplier:
    """
    K_{kω} as a diagonal multiplier of A(K̂_q): K·ω_ab = q^{k n_a/2}ω_ab,
    ω_ab·K = q^{k n_b/2}ω_ab.

    Raises:
        ValueError: If k is not an integer (generic weights are numeric only)
    """
    if not isinstance(k, int):
        raise ValueError(f"Exact K_lambda needs an integral weight, got {k!r}; use numeric_k_lambda")
    if k == 0:
        return Multiplier.identity(descriptor)
    return Multiplier.diagonal(
        descriptor,
        lambda label: q_power(k * label.weight_i()),
        lambda label: q_power(k * label.weight_j()),
        name=f"K[{k}w]",
    )


def numeric_k_lambda(lam: complex, ctx: NumericContext) -> Callable[[int], complex]:
    """Eigenvalue q^{λ·n/2} of K_{λω} on weight n, for a complex λ."""
    return lambda weight: numeric_q_power(lam * weight / 2, ctx)


class DualBlockDescriptor(QGroupDescriptor):
    """
    A(K̂_q) = ⊕_{l≤L} End(V_l) with matrix units ω^{(l)}_{ij}.

    The coproduct is dual to the product of A(K_q) in the opposite order and
    is kept on legs with spin ≤ window.
    """

    def __init__(self, twice_cutoff: int, window: Optional[int] = None):
        if twice_cutoff < 0:
            raise ValueError("cutoff must be a nonnegative half-integer")
        window = twice_cutoff if window is None else window
        if not 0 <= window <= twice_cutoff:
            raise ValueError("window must lie between 0 and the cutoff")
        self.twice_cutoff = twice_cutoff
        self.window = window
        super().__init__(
            name=f"A(K^_q)[L={spin_text(twice_cutoff)}]",
            basis=[DualLabel(t, i, j) for t in range(twice_cutoff + 1) for i, j in _indices(t)],
            unimodular=False,
            truncation={"cutoff": twice_cutoff, "window": window},
        )
        self.modular = k_lambda(self, -4)
        self.modular_sqrt = k_lambda(self, -2)
        self.modular_inv_sqrt = k_lambda(self, 2)

    def label_to_text(self, label: Any) -> str:
        return str(label)

    def text_to_label(self, text: str) -> Any:
        label = parse_block_label(text)
        if not isinstance(label, DualLabel):
            raise ValueError(f"{text!r} is not a dual block label")
        self.validate_label(label)
        return label

    @property
    def comul_window(self) -> Optional[int]:
        return self.window

    @property
    def block_diagonal(self) -> bool:
        return True

    def grade(self, label: Any) -> int:
        return label.twice_l

    def mul_basis(self, left: Any, right: Any) -> Dict[Any, Scalar]:
        if left.twice_l == right.twice_l and left.j == right.i:
            return {DualLabel(left.twice_l, left.i, right.j): ONE}
        return {}

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        nu = label.twice_l
        table: Dict[Tuple[Any, Any], Scalar] = {}
        for t2 in range(self.window + 1):
            if right_grades is not None and t2 not in right_grades:
                continue
            for t1 in range(self.window + 1):
                if (t1 + t2 - nu) % 2 or not abs(t1 - t2) <= nu <= t1 + t2:
                    continue
                table.update(_dual_comul_blocks(t1, t2).get(label, {}))
        return table

    def counit_basis(self, label: Any) -> Scalar:
        return ONE if label.twice_l == 0 else ZERO

    def antipode_basis(self, label: Any) -> Dict[Any, Scalar]:
        t, s = label.twice_l, antipode_factors(label.twice_l)
        return {DualLabel(t, t - label.j, t - label.i): s[label.j] / s[label.i]}

    def antipode_inv_basis(self, label: Any) -> Dict[Any, Scalar]:
        t, s = label.twice_l, antipode_factors(label.twice_l)
        return {DualLabel(t, t - label.j, t - label.i): s[t - label.j] / s[t - label.i]}

    def star_basis(self, label: Any) -> Dict[Any, Scalar]:
        n = norms(label.twice_l)
        return {DualLabel(label.twice_l, label.j, label.i): n[label.i] / n[label.j]}

    def haar_basis(self, label: Any) -> Scalar:
        return dual_haar(label)

    def right_haar_basis(self, label: Any) -> Scalar:
        return dual_right_haar(label)

    def unit_coeffs(self, window: Optional[int] = None) -> Dict[Any, Scalar]:
        window = self.window if window is None else min(window, self.twice_cutoff)
        return {DualLabel(t, i, i): ONE for t in range(window + 1) for i in range(t + 1)}

    def block_unit(self, twice_l: int) -> AlgElem:
        return AlgElem(self, {DualLabel(twice_l, i, i): ONE for i in range(twice_l + 1)})

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "cutoff": spin_text(self.twice_cutoff),
                "window": spin_text(self.window), "convention": convention_hash()}


def dual_algebra(twice_cutoff: int, window: Optional[int] = None) -> DualBlockDescriptor:
    descriptor = DualBlockDescriptor(twice_cutoff, window)
    logger.info(f"Built {descriptor.name} with {len(descriptor.basis)} matrix units")
    return descriptor


def block_element(descriptor: DualBlockDescriptor, blocks: Dict[int, Matrix]) -> AlgElem:
    """Element of A(K̂_q) from per-spin matrices (keyed by 2l)."""
    coeffs: Dict[Any, Scalar] = {}
    for twice_l, matrix in blocks.items():
        if twice_l > descriptor.twice_cutoff:
            raise ValueError(f"Block {spin_text(twice_l)} exceeds the cutoff of {descriptor.name}")
        for i, row in enumerate(matrix):
            for j, value in enumerate(row):
                accumulate(coeffs, DualLabel(twice_l, i, j), value)
    return AlgElem(descriptor, coeffs)


def element_blocks(f: AlgElem) -> Dict[int, Matrix]:
    blocks: Dict[int, Matrix] = {}
    for label, value in f.coeffs.items():
        dim = label.twice_l + 1
        block = blocks.setdefault(label.twice_l, [[ZERO] * dim for _ in range(dim)])
        block[label.i][label.j] = value
    return blocks


# torus and lattice quotients


def torus_map(pw: PeterWeylDescriptor, torus: Optional[LatticeDescriptor] = None) -> SubgroupMap:
    """π: A(K_q) -> A(T), u_ij ↦ δ_ij·e^{n_i}."""
    torus = torus or torus_algebra(pw.twice_cutoff)

    def restrict(label):
        return {label.weight_i(): ONE} if label.i == label.j else {}

    return SubgroupMap(pw, torus, restrict, name="T")


def aq_quotient(dual: DualBlockDescriptor) -> Callable[[DualLabel], Dict[int, Scalar]]:
    """π: A(K̂_q) -> A(A_q), ω^{(l)}_ij ↦ δ_ij·φ̂(ω^{(l)}_ii)·δ_{n_i}; linear, not multiplicative."""
    def project(label):
        if label.i != label.j:
            return {}
        return {label.weight_i(): dual.haar_basis(label)}
    return project


def apply_aq_quotient(f: AlgElem, weights: LatticeDescriptor) -> AlgElem:
    return hc.apply_linear(f, aq_quotient(f.algebra), algebra=weights)


def minimal_preimage(dual: DualBlockDescriptor, weight: int, twice_l: Optional[int] = None) -> AlgElem:
    """An element f of A(K̂_q) with π(f) = δ_weight, supported on one diagonal unit."""
    twice_l = abs(weight) if twice_l is None else twice_l
    if abs(weight) > twice_l or (twice_l - weight) % 2 or twice_l > dual.twice_cutoff:
        raise ValueError(f"Weight {weight} does not occur in V_{spin_text(twice_l)} below the cutoff")
    label = DualLabel(twice_l, (twice_l - weight) // 2, (twice_l - weight) // 2)
    return AlgElem(dual, {label: ONE / dual.haar_basis(label)})


def corep_induced_coaction(dual: DualBlockDescriptor,
                           preimage: Optional[Callable[[int], AlgElem]] = None
                           ) -> Callable[[int], Dict[Tuple[DualLabel, int], Scalar]]:
    """
    Coaction α: A(A_q) -> A(K̂_q)⊗A(A_q), α(π(f)) = f₁⊗π(f₂).

    Args:
        dual: The discrete dual
        preimage: Choice of f with π(f) = δ_n (minimal spin by default)
    """
    preimage = preimage or (lambda weight: minimal_preimage(dual, weight))
    project = aq_quotient(dual)

    def coaction(weight: int) -> Dict[Tuple[DualLabel, int], Scalar]:
        result: Dict[Tuple[DualLabel, int], Scalar] = {}
        for (a, b), c in hc.comul(preimage(weight)).coeffs.items():
            for n, value in project(b).items():
                accumulate(result, (a, n), c * value)
        return result

    return coaction


# the multiplicative unitary


def twist_element(dual: DualBlockDescriptor, pw: PeterWeylDescriptor, inverse: bool = False,
                  window: Optional[int] = None) -> TensorElem:
    """W = Σ ω^σ_ij⊗u^σ_ij, or W⁻¹ = Σ ω^σ_ij⊗S(u^σ_ij), over blocks σ ≤ window."""
    window = min(dual.window, pw.twice_cutoff) if window is None else window
    coeffs: Dict[Tuple[Any, ...], Scalar] = {}
    for t in range(window + 1):
        for i, j in _indices(t):
            image = pw_antipode(PWLabel(t, i, j)) if inverse else {PWLabel(t, i, j): ONE}
            for out, value in image.items():
                accumulate(coeffs, (DualLabel(t, i, j), out), value)
    return TensorElem((dual, pw), coeffs)


# identity checks


def _result(name: str, failures: List[Any], identity: str, samples: int, group: str = "suq2") -> CheckResult:
    detail = f"failed on {', '.join(str(f) for f in failures[:5])}" if failures else ""
    return CheckResult.from_flag(name, not failures, identity=identity, detail=detail,
                                 samples=samples, group=group)


def twist_unitarity_check(dual: DualBlockDescriptor, pw: PeterWeylDescriptor) -> CheckResult:
    """W·W⁻¹ = 1 = W⁻¹·W block by block, on blocks whose products stay below the cutoff."""
    failures, samples = [], 0
    for t in range(min(dual.window, pw.twice_cutoff // 2) + 1):
        w = twist_element(dual, pw).restrict(lambda key, t=t: key[0].twice_l == t)
        w_inv = twist_element(dual, pw, inverse=True).restrict(lambda key, t=t: key[0].twice_l == t)
        expected = TensorElem((dual, pw), {(DualLabel(t, i, i), TRIVIAL): ONE for i in range(t + 1)})
        samples += 1
        if hc.tensor_mul(w, w_inv) != expected or hc.tensor_mul(w_inv, w) != expected:
            failures.append(spin_text(t))
    return _result("twist_unitarity", failures, "W·W⁻¹ = 1 = W⁻¹·W blockwise", samples)


def twist_factorization_check(dual: DualBlockDescriptor, pw: PeterWeylDescriptor) -> CheckResult:
    """(id⊗Δ)W = W₁₂W₁₃ and (Δ̂⊗id)W = W₂₃W₁₃ on the exact components."""
    failures = []
    w = twist_element(dual, pw)
    lhs = hc.comul_leg(w, 1)
    rhs: Dict[Tuple[Any, ...], Scalar] = {}
    for (a, u), x in w.coeffs.items():
        for (b, v), y in w.coeffs.items():
            for out, z in dual.mul_basis(a, b).items():
                accumulate(rhs, (out, u, v), x * y * z)
    if lhs != TensorElem(lhs.algebras, rhs):
        failures.append("(id⊗Δ)W")

    limit = min(dual.window, pw.twice_cutoff)
    keep = lambda key: key[0].twice_l + key[1].twice_l <= limit
    lhs = hc.comul_leg(w, 0).restrict(keep)
    rhs = {}
    for (a, u), x in w.coeffs.items():
        for (b, v), y in w.coeffs.items():
            if a.twice_l + b.twice_l > limit:
                continue
            for out, z in pw.mul_basis(v, u).items():
                accumulate(rhs, (a, b, out), x * y * z)
    if lhs != TensorElem(lhs.algebras, rhs).restrict(keep):
        failures.append("(Δ̂⊗id)W")
    return _result("twist_factorization", failures, "(id⊗Δ)W = W₁₂W₁₃, (Δ̂⊗id)W = W₂₃W₁₃", 2)


def kms_check(pw: PeterWeylDescriptor) -> CheckResult:
    """φ(ab) = φ(b·σ(a)) with σ(u_ij) = q^{-(n_i+n_j)}u_ij."""
    failures, samples = [], 0
    for a in pw.basis:
        sigma = q_power(-2 * (a.weight_i() + a.weight_j()))
        for b in pw.basis:
            if a.twice_l != b.twice_l:
                continue
            samples += 1
            if haar_of_product(a, b) != sigma * haar_of_product(b, a):
                failures.append((str(a), str(b)))
    return _result("kms", failures, "φ(ab) = φ(bσ(a))", samples)


def right_haar_check(dual: DualBlockDescriptor) -> CheckResult:
    """ψ̂ = φ̂(·K_{-4ρ}) and (ψ̂⊗id)Δ̂(x) = ψ̂(x)1 on the exact components."""
    failures = []
    modular = dual.modular
    for label in dual.basis:
        shifted = hc.haar(modular.act_right(AlgElem.basis(dual, label)))
        if dual.right_haar_basis(label) != shifted:
            failures.append(label)
            continue
        lhs = hc.contract_leg(hc.comul(AlgElem.basis(dual, label)), 0, dual.right_haar_basis)
        expected = TensorElem((dual,), {(k,): v * dual.right_haar_basis(label)
                                        for k, v in dual.unit_coeffs().items()})
        keep = lambda key: label.twice_l + key[0].twice_l <= dual.window
        if lhs.restrict(keep) != expected.restrict(keep):
            failures.append(label)
    return _result("right_haar", failures, "ψ̂ = φ̂(·K_{-4ρ}), right invariance", len(dual.basis))


def torus_morphism_check(m: SubgroupMap) -> CheckResult:
    """π is multiplicative, comultiplicative, counital and *-preserving on the safe sub-span."""
    pw, torus = m.source, m.target
    failures = []
    for a in pw.basis:
        f = AlgElem.basis(pw, a)
        image = m.apply_pi(f)
        pushed = TensorElem((torus, torus))
        for (x, y), c in hc.comul(f).coeffs.items():
            pushed = pushed + TensorElem.from_elements(m.apply_pi(AlgElem.basis(pw, x)),
                                                       m.apply_pi(AlgElem.basis(pw, y))).scale(c)
        if hc.comul(image) != pushed:
            failures.append(("comul", str(a)))
        if hc.counit(image) != hc.counit(f):
            failures.append(("counit", str(a)))
        if m.apply_pi(hc.star_alg(f)) != hc.star_alg(image):
            failures.append(("star", str(a)))
        for b in pw.basis:
            if a.twice_l + b.twice_l > pw.twice_cutoff:
                continue
            g = AlgElem.basis(pw, b)
            if m.apply_pi(hc.mul(f, g)) != hc.mul(image, m.apply_pi(g)):
                failures.append(("mul", str(a), str(b)))
    return _result("torus_morphism", failures, "π is a *-Hopf morphism", len(pw.basis))


def quotient_haar_check(dual: DualBlockDescriptor, weights: LatticeDescriptor) -> CheckResult:
    """φ̂(f) = φ_{A_q}(π(f)) and π(f·K_λ) = π(f)·K_λ on every basis element."""
    failures = []
    k_dual, k_lattice = k_lambda(dual, 2), k_lambda_lattice(weights, 2)
    for label in dual.basis:
        f = AlgElem.basis(dual, label)
        image = apply_aq_quotient(f, weights)
        if hc.haar(f) != hc.haar(image):
            failures.append(("haar", label))
        if apply_aq_quotient(k_dual.act_right(f), weights) != k_lattice.act_right(image):
            failures.append(("k_lambda", label))
    return _result("quotient_haar", failures, "φ̂ = φ_{A_q}∘π, π(fK_λ) = π(f)K_λ", len(dual.basis))


def weights_for(dual: DualBlockDescriptor) -> LatticeDescriptor:
    """A(A_q) sized to the weights occurring below the cutoff."""
    return weight_algebra(dual.twice_cutoff, window=dual.window)
