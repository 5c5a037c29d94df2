"""
Element Models
--------------

Sparse elements of a quantum group algebra and of its tensor powers. Labels
are whatever the owning descriptor uses for its basis; coefficients are
Scalars.
"""

from typing import Any, Dict, Iterable, Iterator, List, Tuple

from app.models.scalar import Scalar


def accumulate(target: Dict[Any, Scalar], key: Any, value: Scalar) -> None:
    """Add value into target[key], dropping the entry when it cancels."""
    if value.is_zero():
        return
    current = target.get(key)
    if current is None:
        target[key] = value
        return
    total = current + value
    if total.is_zero():
        del target[key]
    else:
        target[key] = total


class AlgElem:
    """Element of a single algebra, stored as label -> Scalar."""

    def __init__(self, algebra, coeffs: Dict[Any, Scalar] = None):
        self.algebra = algebra
        self.coeffs: Dict[Any, Scalar] = {}
        for label, value in (coeffs or {}).items():
            if not isinstance(value, Scalar):
                value = Scalar(value)
            if value.is_zero():
                continue
            algebra.validate_label(label)
            self.coeffs[label] = value

    @classmethod
    def basis(cls, algebra, label: Any, coeff=1) -> 'AlgElem':
        return cls(algebra, {label: Scalar(coeff)})

    @classmethod
    def zero(cls, algebra) -> 'AlgElem':
        return cls(algebra, {})

    def items(self) -> List[Tuple[Any, Scalar]]:
        return sorted(self.coeffs.items(), key=lambda item: self.algebra.sort_key(item[0]))

    def labels(self) -> List[Any]:
        return [label for label, _ in self.items()]

    def coeff(self, label: Any) -> Scalar:
        return self.coeffs.get(label, Scalar(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other: 'AlgElem') -> None:
        if other.algebra is not self.algebra and other.algebra.name != self.algebra.name:
            raise ValueError(
                f"Elements belong to different algebras: {self.algebra.name} and {other.algebra.name}"
            )

    def __add__(self, other: 'AlgElem') -> 'AlgElem':
        self._check_same(other)
        result = dict(self.coeffs)
        for label, value in other.coeffs.items():
            accumulate(result, label, value)
        return AlgElem(self.algebra, result)

    def __sub__(self, other: 'AlgElem') -> 'AlgElem':
        return self + (-other)

    def __neg__(self) -> 'AlgElem':
        return AlgElem(self.algebra, {label: -value for label, value in self.coeffs.items()})

    def scale(self, factor) -> 'AlgElem':
        factor = Scalar(factor)
        if factor.is_zero():
            return AlgElem.zero(self.algebra)
        return AlgElem(self.algebra, {label: value * factor for label, value in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.algebra.name, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        terms = " + ".join(f"{value.to_text()}*{label}" for label, value in self.items())
        return f"AlgElem[{self.algebra.name}]({terms or '0'})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.name,
            "coeffs": [
                [self.algebra.label_to_text(label), value.to_text()]
                for label, value in self.items()
            ],
        }

    @classmethod
    def from_dict(cls, algebra, data: Dict[str, Any]) -> 'AlgElem':
        if data.get("algebra") != algebra.name:
            raise ValueError(f"Element belongs to {data.get('algebra')}, not {algebra.name}")
        return cls(algebra, {
            algebra.text_to_label(label): Scalar.from_text(value)
            for label, value in data["coeffs"]
        })


class TensorElem:
    """Element of a tensor product of algebras, stored as label tuple -> Scalar."""

    def __init__(self, algebras: Tuple[Any, ...], coeffs: Dict[Tuple[Any, ...], Scalar] = None):
        self.algebras = tuple(algebras)
        self.coeffs: Dict[Tuple[Any, ...], Scalar] = {}
        for key, value in (coeffs or {}).items():
            if not isinstance(value, Scalar):
                value = Scalar(value)
            if value.is_zero():
                continue
            if len(key) != len(self.algebras):
                raise ValueError(f"Tensor key {key} does not match {len(self.algebras)} legs")
            self.coeffs[tuple(key)] = value

    @classmethod
    def from_elements(cls, *elements: AlgElem) -> 'TensorElem':
        coeffs: Dict[Tuple[Any, ...], Scalar] = {(): Scalar(1)}
        for element in elements:
            grown: Dict[Tuple[Any, ...], Scalar] = {}
            for key, value in coeffs.items():
                for label, coeff in element.coeffs.items():
                    accumulate(grown, key + (label,), value * coeff)
            coeffs = grown
        return cls(tuple(element.algebra for element in elements), coeffs)

    @property
    def rank(self) -> int:
        return len(self.algebras)

    def items(self) -> List[Tuple[Tuple[Any, ...], Scalar]]:
        def key(item):
            return tuple(algebra.sort_key(label) for algebra, label in zip(self.algebras, item[0]))
        return sorted(self.coeffs.items(), key=key)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __iter__(self) -> Iterator[Tuple[Tuple[Any, ...], Scalar]]:
        return iter(self.coeffs.items())

    def __add__(self, other: 'TensorElem') -> 'TensorElem':
        result = dict(self.coeffs)
        for key, value in other.coeffs.items():
            accumulate(result, key, value)
        return TensorElem(self.algebras, result)

    def __sub__(self, other: 'TensorElem') -> 'TensorElem':
        return self + other.scale(-1)

    def scale(self, factor) -> 'TensorElem':
        factor = Scalar(factor)
        return TensorElem(self.algebras, {key: value * factor for key, value in self.coeffs.items()})

    def restrict(self, predicate) -> 'TensorElem':
        """Keep only the components whose label tuple satisfies predicate."""
        return TensorElem(self.algebras, {
            key: value for key, value in self.coeffs.items() if predicate(key)
        })

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        terms = " + ".join(
            f"{value.to_text()}*{'⊗'.join(str(label) for label in key)}"
            for key, value in self.items()
        )
        return f"TensorElem({terms or '0'})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebras": [algebra.name for algebra in self.algebras],
            "coeffs": [
                [[algebra.label_to_text(label) for algebra, label in zip(self.algebras, key)],
                 value.to_text()]
                for key, value in self.items()
            ],
        }


class PairingTable:
    """Bilinear pairing between two algebras, tabulated on basis labels."""

    def __init__(self, left, right, table: Dict[Tuple[Any, Any], Scalar]):
        self.left = left
        self.right = right
        self.table = table

    def value(self, left_label: Any, right_label: Any) -> Scalar:
        return self.table.get((left_label, right_label), Scalar(0))

    def matrix(self, left_labels: Iterable[Any] = None, right_labels: Iterable[Any] = None) -> List[List[Scalar]]:
        rows = list(left_labels if left_labels is not None else self.left.basis)
        cols = list(right_labels if right_labels is not None else self.right.basis)
        return [[self.value(row, col) for col in cols] for row in rows]
