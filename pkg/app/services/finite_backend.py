"""
Finite Backend Service
----------------------

Exact quantum groups attached to a finite group G: the function algebra
Fun(G), the group algebra C[G], restriction maps for subgroups and the dual
coproduct on the convolution algebra.
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
from jsonschema import ValidationError
from sympy import Matrix, Poly, QQ, Rational, Symbol, factor_list, gcdex

from app.config import GROUPS_DIR
from app.models.descriptor import QGroupDescriptor
from app.models.elements import AlgElem, PairingTable, TensorElem, accumulate
from app.models.groups import FiniteGroupTable, SubgroupSpec, preset_group
from app.models.representation import RepOnSpace
from app.models.scalar import Scalar
from app.models.subgroup_map import SubgroupMap
from app.services import hopf_core as hc
from app.services.linear_algebra import exact_inverse, exact_pivots, exact_solve

logger = logging.getLogger(__name__)


def load_group(source: Union[str, Path]) -> FiniteGroupTable:
    """
    Load a group from a preset name or a JSON Cayley-table file.

    Args:
        source: Preset name (Z<n>, S3, S4, D4, Q8), path to a JSON file, or the
            name of a file under data/groups

    Returns:
        The validated FiniteGroupTable

    Raises:
        ValueError: If the preset is unknown or the file is not a valid group
    """
    path = Path(source)
    if path.suffix == ".json" and not path.exists() and (GROUPS_DIR / path.name).exists():
        path = GROUPS_DIR / path.name
    if path.suffix == ".json":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            group = FiniteGroupTable.from_dict(data)
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            logger.error(f"Error loading group file {path}: {type(e).__name__}: {str(e)}")
            raise ValueError(f"Cannot load group from {path}: {str(e)}") from e
        logger.info(f"Loaded group {group.name} of order {group.order} from {path}")
        return group
    return preset_group(str(source))


def fun_qgroup(group: FiniteGroupTable) -> QGroupDescriptor:
    """Fun(G): pointwise product, Δ(δ_g) = Σ_{ab=g} δ_a⊗δ_b, φ(δ_g) = 1/|G|."""
    names = group.elements
    one, share = Scalar(1), Scalar(1) / group.order
    comult: Dict[Any, Dict[Tuple[Any, Any], Scalar]] = {name: {} for name in names}
    for a in range(group.order):
        for b in range(group.order):
            comult[names[group.mul(a, b)]][(names[a], names[b])] = one
    descriptor = QGroupDescriptor(
        name=f"Fun({group.name})",
        basis=names,
        mult={(name, name): {name: one} for name in names},
        comult=comult,
        counit={names[group.identity]: one},
        antipode={names[g]: {names[group.inverse[g]]: one} for g in range(group.order)},
        antipode_inv={names[g]: {names[group.inverse[g]]: one} for g in range(group.order)},
        star={name: {name: one} for name in names},
        haar={name: share for name in names},
        unit={name: one for name in names},
        unimodular=True,
    )
    logger.debug(f"Built {descriptor.name} with {len(names)} basis elements")
    return descriptor


def group_alg_qgroup(group: FiniteGroupTable) -> QGroupDescriptor:
    """C[G]: λ_gλ_h = λ_{gh}, Δ(λ_g) = λ_g⊗λ_g, φ(λ_g) = [g = e]."""
    names = group.elements
    one = Scalar(1)
    inverse = {names[g]: names[group.inverse[g]] for g in range(group.order)}
    descriptor = QGroupDescriptor(
        name=f"C[{group.name}]",
        basis=names,
        mult={(names[a], names[b]): {names[group.mul(a, b)]: one}
              for a in range(group.order) for b in range(group.order)},
        comult={name: {(name, name): one} for name in names},
        counit={name: one for name in names},
        antipode={name: {inverse[name]: one} for name in names},
        antipode_inv={name: {inverse[name]: one} for name in names},
        star={name: {inverse[name]: one} for name in names},
        haar={names[group.identity]: one},
        unit={names[group.identity]: one},
        unimodular=True,
    )
    logger.debug(f"Built {descriptor.name} with {len(names)} basis elements")
    return descriptor


def evaluation_pairing(fun: QGroupDescriptor, group_alg: QGroupDescriptor) -> PairingTable:
    """(δ_g, λ_h) = δ_g(h)."""
    return PairingTable(fun, group_alg, {(name, name): Scalar(1) for name in fun.basis})


def subgroup_map(subgroup: SubgroupSpec, source: QGroupDescriptor = None) -> SubgroupMap:
    """
    Restriction Fun(G) -> Fun(B) for a subgroup B ≤ G.

    Classical groups are unimodular, so γ = 1 and E = π.
    """
    parent = subgroup.parent
    source = source or fun_qgroup(parent)
    target = fun_qgroup(subgroup.as_group())
    members = {parent.elements[g] for g in subgroup.members}

    def restrict(label):
        return {label: Scalar(1)} if label in members else {}

    return SubgroupMap(source, target, restrict, name=subgroup.name)


@lru_cache(maxsize=32)
def _dual_basis(descriptor: QGroupDescriptor):
    """Matrix inverse of the pairing (e_i, e_j) = φ(e_j e_i) on the basis."""
    labels = descriptor.basis
    matrix = [[hc.pairing(AlgElem.basis(descriptor, a), AlgElem.basis(descriptor, b))
               for b in labels] for a in labels]
    return labels, exact_inverse(matrix)


def dual_comul(f: AlgElem) -> TensorElem:
    """
    Coproduct Δ̂ of D(G), dual to the product of A(G) under the pairing:
    (Δ̂(x), a⊗b) = (x, ab).
    """
    descriptor = f.algebra
    labels, inverse = _dual_basis(descriptor)
    index = {label: i for i, label in enumerate(labels)}
    # values (x, e_a e_b) for every basis pair
    values: Dict[Tuple[Any, Any], Scalar] = {}
    for a in labels:
        for b in labels:
            product = AlgElem(descriptor, descriptor.mul_basis(a, b))
            value = hc.pairing(product, f)
            if not value.is_zero():
                values[(a, b)] = value
    # dual basis element of e_a is Σ_c inverse[c][a]·e_c
    result: Dict[Tuple[Any, Any], Scalar] = {}
    for (a, b), value in values.items():
        for c in labels:
            x = inverse[index[c]][index[a]]
            if x.is_zero():
                continue
            for d in labels:
                y = inverse[index[d]][index[b]]
                if not y.is_zero():
                    accumulate(result, (c, d), value * x * y)
    return TensorElem((descriptor, descriptor), result)


# representations of D(Fun(G)) = C[G], where δ_g acts as λ_g/|G|


def one_dim_rep(descriptor: QGroupDescriptor, group: FiniteGroupTable,
                values: Dict[str, int], name: str = "") -> RepOnSpace:
    """1-dimensional representation from a ±1-valued homomorphism on element names."""
    share = Scalar(1) / group.order
    actions = {label: [[share * values[label]]] for label in descriptor.basis}
    return RepOnSpace(descriptor, 1, actions, name=name or "one-dim")


def trivial_rep(descriptor: QGroupDescriptor, group: FiniteGroupTable) -> RepOnSpace:
    return one_dim_rep(descriptor, group, {name: 1 for name in group.elements}, name="trivial")


def sign_reps(descriptor: QGroupDescriptor, group: FiniteGroupTable) -> List[RepOnSpace]:
    """The nontrivial ±1 characters, one per index-2 subgroup."""
    reps = []
    for subgroup in group.subgroups():
        if 2 * subgroup.order != group.order:
            continue
        values = {group.elements[g]: 1 if g in subgroup.members else -1 for g in range(group.order)}
        reps.append(one_dim_rep(descriptor, group, values, name=f"sign[{subgroup.name}]"))
    return reps


def regular_rep(descriptor: QGroupDescriptor) -> RepOnSpace:
    """Left convolution of D(G) on itself, with the GNS inner product."""
    labels = descriptor.basis
    index = {label: i for i, label in enumerate(labels)}
    basis = [AlgElem.basis(descriptor, label) for label in labels]
    actions = {}
    for label in labels:
        matrix = [[Scalar(0)] * len(labels) for _ in labels]
        for j, f in enumerate(basis):
            for out, value in hc.conv_mul(AlgElem.basis(descriptor, label), f).coeffs.items():
                matrix[index[out]][j] = value
        actions[label] = matrix
    return RepOnSpace(descriptor, len(labels), actions, inner=hc.gram_matrix(basis), name="regular")


def _group_ring_mul(group: FiniteGroupTable, x: List[Rational], y: List[Rational]) -> List[Rational]:
    result = [Rational(0)] * group.order
    for a, xa in enumerate(x):
        if xa == 0:
            continue
        for b, yb in enumerate(y):
            if yb != 0:
                result[group.mul(a, b)] += xa * yb
    return result


def _central_idempotents(group: FiniteGroupTable, seed: int = 0) -> List[List[Rational]]:
    """
    Primitive central idempotents of Q[G], as coefficient vectors over the
    group elements.

    A random central element z separates the simple components once the
    number of irreducible factors of its minimal polynomial reaches the number
    of rational classes; each factor then yields one idempotent.
    """
    classes = group.conjugacy_classes()
    sums = [[Rational(1) if g in cls else Rational(0) for g in range(group.order)] for cls in classes]
    first = [cls[0] for cls in classes]
    target = group.rational_class_count()
    x = Symbol("x")
    rng = np.random.default_rng(seed)
    for attempt in range(50):
        weights = [int(w) for w in rng.integers(1, 20, size=len(classes))]
        z = [sum(w * s[g] for w, s in zip(weights, sums)) for g in range(group.order)]
        # multiplication by z in the class-sum basis of the center
        columns = [_group_ring_mul(group, z, s) for s in sums]
        matrix = Matrix(len(classes), len(classes), lambda i, j: columns[j][first[i]])
        _, factors = factor_list(matrix.charpoly(x).as_expr(), x)
        irreducible = [Poly(p, x, domain=QQ) for p, _ in factors]
        if len(irreducible) != target:
            logger.debug(f"Central element attempt {attempt} does not separate components")
            continue
        minimal = Poly(1, x, domain=QQ)
        for p in irreducible:
            minimal = minimal * p
        idempotents = []
        for p in irreducible:
            cofactor = minimal.quo(p)
            s, _, _ = gcdex(cofactor, p)
            e_poly = (s * cofactor).rem(minimal)
            # evaluate e(z) applied to the unit class sum
            coords = Matrix([1] + [0] * (len(classes) - 1))
            result = Matrix.zeros(len(classes), 1)
            power = coords
            for coeff in reversed(e_poly.all_coeffs()):
                result += coeff * power
                power = matrix * power
            idempotents.append([
                sum(result[k] * sums[k][g] for k in range(len(classes))) for g in range(group.order)
            ])
        return idempotents
    raise ValueError(f"Could not separate the rational components of {group.name}")


def rational_components(descriptor: QGroupDescriptor, group: FiniteGroupTable,
                        seed: int = 0) -> List[RepOnSpace]:
    """
    The simple two-sided ideals Q[G]e of the group ring, each as a
    representation of D(G) with the restricted l2 inner product.
    """
    share = Scalar(1) / group.order
    reps = []
    for k, e in enumerate(_central_idempotents(group, seed)):
        vectors = [_group_ring_mul(group, [Rational(int(g == h)) for h in range(group.order)], e)
                   for g in range(group.order)]
        columns = [[Scalar(v[i]) for v in vectors] for i in range(group.order)]
        pivots = exact_pivots(columns)
        basis = [vectors[p] for p in pivots]
        gram = [[Scalar(sum(a[i] * b[i] for i in range(group.order))) for b in basis] for a in basis]
        actions = {}
        for b in range(group.order):
            images = [_group_ring_mul(group, [Rational(int(b == h)) for h in range(group.order)], w)
                      for w in basis]
            # coordinates c with basis·c = image, through the normal equations
            rhs = [[Scalar(sum(w[i] * image[i] for i in range(group.order))) for image in images]
                   for w in basis]
            coords = exact_solve(gram, rhs)
            actions[group.elements[b]] = [[share * value for value in row] for row in coords]
        reps.append(RepOnSpace(descriptor, len(basis), actions, inner=gram, name=f"component[{k}]"))
    logger.info(f"Found {len(reps)} rational components of Q[{group.name}]")
    return reps


def element_character(group: FiniteGroupTable, rep: RepOnSpace) -> Dict[str, Scalar]:
    """Character value |G|·Tr(δ_g) for every element name."""
    values = {}
    for name in group.elements:
        matrix = rep.actions[name]
        values[name] = sum((matrix[i][i] for i in range(rep.dim)), Scalar(0)) * group.order
    return values


def rep_character(group: FiniteGroupTable, rep: RepOnSpace) -> List[Scalar]:
    """Character on one representative of each conjugacy class."""
    by_name = element_character(group, rep)
    return [by_name[group.elements[cls[0]]] for cls in group.conjugacy_classes()]
