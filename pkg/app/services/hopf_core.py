"""
Hopf Core Service
-----------------

Generic operations on elements of a quantum group descriptor: structure
maps, tensor-leg manipulation, the four Galois maps, the convolution algebra
D(G), the GNS form and the passage from corepresentations to
representations.
"""

import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from app.errors import MalformedCoactionError
from app.models.elements import AlgElem, TensorElem, accumulate
from app.models.multiplier import Multiplier
from app.models.representation import Coaction
from app.models.scalar import Scalar
from app.services.coeff import conj_scalar

logger = logging.getLogger(__name__)

GALOIS_KINDS = ("gamma_l", "gamma_r", "rho_l", "rho_r")

LinearMap = Callable[[Any], Dict[Any, Scalar]]


def _same_algebra(f: AlgElem, g: AlgElem) -> None:
    if f.algebra is not g.algebra and f.algebra.name != g.algebra.name:
        raise ValueError(f"Cannot combine elements of {f.algebra.name} and {g.algebra.name}")


def apply_linear(f: AlgElem, linear: LinearMap, algebra=None) -> AlgElem:
    result: Dict[Any, Scalar] = {}
    for label, value in f.coeffs.items():
        for out, coeff in linear(label).items():
            accumulate(result, out, coeff * value)
    return AlgElem(algebra or f.algebra, result)


def mul_basis_element(f: AlgElem, g: AlgElem) -> AlgElem:
    algebra = f.algebra
    result: Dict[Any, Scalar] = {}
    for a, x in f.coeffs.items():
        for b, y in g.coeffs.items():
            for out, coeff in algebra.mul_basis(a, b).items():
                accumulate(result, out, coeff * x * y)
    return AlgElem(algebra, result)


def mul(f: AlgElem, g: AlgElem) -> AlgElem:
    """
    Product in A(G).

    Raises:
        TruncationError: If a basis pair leaves the safe sub-span
    """
    _same_algebra(f, g)
    return mul_basis_element(f, g)


def unit(algebra, window: Optional[int] = None) -> AlgElem:
    return AlgElem(algebra, algebra.unit_coeffs(window))


def comul(f: AlgElem, right_grades=None) -> TensorElem:
    algebra = f.algebra
    result: Dict[Tuple[Any, Any], Scalar] = {}
    for label, value in f.coeffs.items():
        for key, coeff in algebra.comul_basis(label, right_grades).items():
            accumulate(result, key, coeff * value)
    return TensorElem((algebra, algebra), result)


def counit(f: AlgElem) -> Scalar:
    total = Scalar(0)
    for label, value in f.coeffs.items():
        total = total + value * f.algebra.counit_basis(label)
    return total


def antipode(f: AlgElem) -> AlgElem:
    return apply_linear(f, f.algebra.antipode_basis)


def antipode_inv(f: AlgElem) -> AlgElem:
    return apply_linear(f, f.algebra.antipode_inv_basis)


def star_alg(f: AlgElem) -> AlgElem:
    """Antilinear extension of the star table."""
    result: Dict[Any, Scalar] = {}
    for label, value in f.coeffs.items():
        for out, coeff in f.algebra.star_basis(label).items():
            accumulate(result, out, coeff * conj_scalar(value))
    return AlgElem(f.algebra, result)


def haar(f: AlgElem) -> Scalar:
    total = Scalar(0)
    for label, value in f.coeffs.items():
        total = total + value * f.algebra.haar_basis(label)
    return total


def haar_pair(f: AlgElem, g: AlgElem) -> Scalar:
    """φ(f·g) without forming the product; exact beyond the safe sub-span."""
    algebra = f.algebra
    total = Scalar(0)
    for a, x in f.coeffs.items():
        for b, y in g.coeffs.items():
            value = algebra.haar_product(a, b)
            if not value.is_zero():
                total = total + x * y * value
    return total


# tensor legs


def tensor_mul(s: TensorElem, t: TensorElem) -> TensorElem:
    """Legwise product of two tensors over the same algebras."""
    if len(s.algebras) != len(t.algebras):
        raise ValueError("Tensor ranks differ")
    result: Dict[Tuple[Any, ...], Scalar] = {}
    for key_s, x in s.coeffs.items():
        for key_t, y in t.coeffs.items():
            partial: Dict[Tuple[Any, ...], Scalar] = {(): x * y}
            for algebra, a, b in zip(s.algebras, key_s, key_t):
                product = algebra.mul_basis(a, b)
                if not product:
                    partial = {}
                    break
                grown: Dict[Tuple[Any, ...], Scalar] = {}
                for key, value in partial.items():
                    for out, coeff in product.items():
                        accumulate(grown, key + (out,), value * coeff)
                partial = grown
            for key, value in partial.items():
                accumulate(result, key, value)
    return TensorElem(s.algebras, result)


def apply_leg(t: TensorElem, leg: int, linear: LinearMap, algebra=None) -> TensorElem:
    """Apply a linear map to one leg."""
    algebras = list(t.algebras)
    if algebra is not None:
        algebras[leg] = algebra
    result: Dict[Tuple[Any, ...], Scalar] = {}
    for key, value in t.coeffs.items():
        for out, coeff in linear(key[leg]).items():
            accumulate(result, key[:leg] + (out,) + key[leg + 1:], value * coeff)
    return TensorElem(tuple(algebras), result)


def expand_leg(t: TensorElem, leg: int, linear: Callable[[Any], Dict[Tuple[Any, ...], Scalar]],
               algebras: Sequence[Any]) -> TensorElem:
    """Replace one leg by several, e.g. apply a coproduct to leg ``leg``."""
    new_algebras = t.algebras[:leg] + tuple(algebras) + t.algebras[leg + 1:]
    result: Dict[Tuple[Any, ...], Scalar] = {}
    for key, value in t.coeffs.items():
        for out, coeff in linear(key[leg]).items():
            accumulate(result, key[:leg] + tuple(out) + key[leg + 1:], value * coeff)
    return TensorElem(new_algebras, result)


def contract_leg(t: TensorElem, leg: int, functional: Callable[[Any], Scalar]) -> TensorElem:
    """Apply a functional to one leg, removing it."""
    algebras = t.algebras[:leg] + t.algebras[leg + 1:]
    result: Dict[Tuple[Any, ...], Scalar] = {}
    for key, value in t.coeffs.items():
        coeff = functional(key[leg])
        if not coeff.is_zero():
            accumulate(result, key[:leg] + key[leg + 1:], value * coeff)
    return TensorElem(algebras, result)


def permute_legs(t: TensorElem, order: Sequence[int]) -> TensorElem:
    """Reorder legs: leg i of the result is leg order[i] of t."""
    algebras = tuple(t.algebras[i] for i in order)
    return TensorElem(algebras, {tuple(key[i] for i in order): value for key, value in t.coeffs.items()})


def tensor_to_elem(t: TensorElem) -> AlgElem:
    if t.rank != 1:
        raise ValueError("Only rank-one tensors convert to elements")
    return AlgElem(t.algebras[0], {key[0]: value for key, value in t.coeffs.items()})


def comul_leg(t: TensorElem, leg: int, right_grades=None) -> TensorElem:
    algebra = t.algebras[leg]
    return expand_leg(t, leg, lambda label: algebra.comul_basis(label, right_grades), (algebra, algebra))


# Galois maps


def galois(kind: str, t: TensorElem) -> TensorElem:
    """
    Galois maps of the coproduct.

    gamma_l: f⊗g ↦ Δ(f)(g⊗1)
    gamma_r: f⊗g ↦ Δ(f)(1⊗g)
    rho_l:   f⊗g ↦ (f⊗1)Δ(g)
    rho_r:   f⊗g ↦ (1⊗f)Δ(g)
    """
    if kind not in GALOIS_KINDS:
        raise ValueError(f"kind must be one of: {', '.join(GALOIS_KINDS)}")
    algebra = t.algebras[0]
    one = unit(algebra)
    result = TensorElem((algebra, algebra))
    for (a, b), value in t.coeffs.items():
        f = AlgElem.basis(algebra, a)
        g = AlgElem.basis(algebra, b)
        if kind == "gamma_l":
            term = tensor_mul(comul(f), TensorElem.from_elements(g, one))
        elif kind == "gamma_r":
            term = tensor_mul(comul(f), TensorElem.from_elements(one, g))
        elif kind == "rho_l":
            term = tensor_mul(TensorElem.from_elements(f, one), comul(g))
        else:
            term = tensor_mul(TensorElem.from_elements(one, f), comul(g))
        result = result + term.scale(value)
    return result


def galois_matrix(algebra, kind: str) -> List[List[Scalar]]:
    """Matrix of a Galois map in the basis of label pairs."""
    pairs = [(a, b) for a in algebra.basis for b in algebra.basis]
    index = {pair: i for i, pair in enumerate(pairs)}
    columns = []
    for pair in pairs:
        image = galois(kind, TensorElem((algebra, algebra), {pair: Scalar(1)}))
        column = [Scalar(0)] * len(pairs)
        for key, value in image.coeffs.items():
            column[index[key]] = value
        columns.append(column)
    return [[columns[j][i] for j in range(len(pairs))] for i in range(len(pairs))]


# convolution algebra D(G)


def conv_mul(f: AlgElem, g: AlgElem) -> AlgElem:
    """f*g = (id⊗φ)[(1⊗S⁻¹(g))Δ(f)]."""
    _same_algebra(f, g)
    algebra = f.algebra
    s_inv_g = antipode_inv(g)
    grades = None
    if algebra.block_diagonal:
        grades = {algebra.grade(label) for label in s_inv_g.coeffs}
    delta_f = comul(f, right_grades=grades)
    result: Dict[Any, Scalar] = {}
    haar_cache: Dict[Tuple[Any, Any], Scalar] = {}
    for (x1, x2), c in delta_f.coeffs.items():
        weight = Scalar(0)
        for y, d in s_inv_g.coeffs.items():
            key = (y, x2)
            if key not in haar_cache:
                haar_cache[key] = algebra.haar_product(y, x2)
            value = haar_cache[key]
            if not value.is_zero():
                weight = weight + d * value
        if not weight.is_zero():
            accumulate(result, x1, c * weight)
    return AlgElem(algebra, result)


def conv_star(f: AlgElem) -> AlgElem:
    """f* = conj(S(f))·δ in D(G)."""
    return f.algebra.modular.act_right(star_alg(antipode(f)))


def gns_inner(f: AlgElem, g: AlgElem) -> Scalar:
    """⟨f, g⟩ = φ(f̄ g)."""
    _same_algebra(f, g)
    return haar_pair(star_alg(f), g)


def pairing(f: AlgElem, g: AlgElem) -> Scalar:
    """(f, g) = φ(g f) for f in A(G) and g in D(G)."""
    _same_algebra(f, g)
    return haar_pair(g, f)


def gram_matrix(elements: Iterable[AlgElem]) -> List[List[Scalar]]:
    elements = list(elements)
    return [[gns_inner(f, g) for g in elements] for f in elements]


def multiplier_from_element(f: AlgElem) -> Multiplier:
    return Multiplier.from_element(f)


# corepresentations


def check_coaction(corep: Coaction) -> None:
    """
    Verify that a left coaction is counital and coassociative.

    Raises:
        MalformedCoactionError: If either law fails on a basis vector
    """
    algebra = corep.algebra
    for i in range(corep.dim):
        image = corep.apply(i)
        counital: Dict[int, Scalar] = {}
        for (a, j), value in image.items():
            accumulate(counital, j, value * algebra.counit_basis(a))
        if counital != {i: Scalar(1)}:
            raise MalformedCoactionError(f"Coaction is not counital on basis vector {i}")
        left: Dict[Tuple[Any, Any, int], Scalar] = {}
        for (a, j), value in image.items():
            for (a1, a2), coeff in algebra.comul_basis(a).items():
                accumulate(left, (a1, a2, j), value * coeff)
        right: Dict[Tuple[Any, Any, int], Scalar] = {}
        for (a, j), value in image.items():
            for (b, k), coeff in corep.apply(j).items():
                accumulate(right, (a, b, k), value * coeff)
        if left.keys() != right.keys() or any(left[k] != right[k] for k in left):
            raise MalformedCoactionError(f"Coaction is not coassociative on basis vector {i}")


def corep_to_rep(corep: Coaction, f: AlgElem, v: Dict[int, Scalar]) -> Dict[int, Scalar]:
    """
    Action of D(G) obtained from a left corepresentation.

    f*v = (φ⊗id)((ρ(f)∘S⁻¹⊗id)(α(v))), with ρ(f) the right multiplication by f.
    """
    algebra = corep.algebra
    result: Dict[int, Scalar] = {}
    for i, coefficient in v.items():
        for (a, j), value in corep.apply(i).items():
            weight = haar_pair(antipode_inv(AlgElem.basis(algebra, a)), f)
            if not weight.is_zero():
                accumulate(result, j, coefficient * value * weight)
    return result


def regular_coaction(algebra) -> Coaction:
    """The coproduct of a finite algebra viewed as a left coaction on itself."""
    labels = list(algebra.basis)
    index = {label: i for i, label in enumerate(labels)}
    table = {
        index[label]: {(a, index[b]): value for (a, b), value in algebra.comul_basis(label).items()}
        for label in labels
    }
    return Coaction(algebra, len(labels), table)


def random_element(algebra, rng, labels: Optional[Sequence[Any]] = None, terms: int = 2) -> AlgElem:
    """Sparse element with small integer coefficients, drawn from a numpy Generator."""
    pool = list(labels if labels is not None else algebra.basis)
    picks = rng.choice(len(pool), size=min(terms, len(pool)), replace=False)
    coeffs: Dict[Any, Scalar] = {}
    for i in picks:
        accumulate(coeffs, pool[int(i)], Scalar(int(rng.integers(-3, 4)) or 1))
    return AlgElem(algebra, coeffs)
