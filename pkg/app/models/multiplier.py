"""
Multiplier Model
----------------

Elements of the multiplier algebra M(A), given by their left and right
actions on basis labels. Diagonal multipliers (modular elements, K_lambda,
gamma) only need a scaling per label.
"""

from typing import Any, Callable, Dict, Iterable

from app.models.elements import AlgElem, accumulate
from app.models.scalar import Scalar

Action = Callable[[Any], Dict[Any, Scalar]]


class Multiplier:
    def __init__(self, algebra, left_act: Action, right_act: Action, name: str = ""):
        self.algebra = algebra
        self.left_act = left_act
        self.right_act = right_act
        self.name = name

    @classmethod
    def identity(cls, algebra) -> 'Multiplier':
        def act(label):
            return {label: Scalar(1)}
        return cls(algebra, act, act, name="1")

    @classmethod
    def diagonal(cls, algebra, left_scale: Callable[[Any], Scalar],
                 right_scale: Callable[[Any], Scalar], name: str = "") -> 'Multiplier':
        """Multiplier acting on each basis label by a scalar, from each side."""
        def left(label):
            return {label: left_scale(label)}

        def right(label):
            return {label: right_scale(label)}
        return cls(algebra, left, right, name=name)

    @classmethod
    def from_element(cls, element: AlgElem, name: str = "") -> 'Multiplier':
        from app.services.hopf_core import mul_basis_element

        algebra = element.algebra

        def left(label):
            return mul_basis_element(element, AlgElem.basis(algebra, label)).coeffs

        def right(label):
            return mul_basis_element(AlgElem.basis(algebra, label), element).coeffs
        return cls(algebra, left, right, name=name or "element")

    @classmethod
    def from_tables(cls, algebra, left_table: Dict[Any, Dict[Any, Scalar]],
                    right_table: Dict[Any, Dict[Any, Scalar]], name: str = "") -> 'Multiplier':
        return cls(
            algebra,
            lambda label: left_table.get(label, {}),
            lambda label: right_table.get(label, {}),
            name=name,
        )

    def act_left(self, f: AlgElem) -> AlgElem:
        """Return m·f."""
        result: Dict[Any, Scalar] = {}
        for label, value in f.coeffs.items():
            for out, coeff in self.left_act(label).items():
                accumulate(result, out, coeff * value)
        return AlgElem(self.algebra, result)

    def act_right(self, f: AlgElem) -> AlgElem:
        """Return f·m."""
        result: Dict[Any, Scalar] = {}
        for label, value in f.coeffs.items():
            for out, coeff in self.right_act(label).items():
                accumulate(result, out, coeff * value)
        return AlgElem(self.algebra, result)

    def compose(self, other: 'Multiplier') -> 'Multiplier':
        """Product self·other in M(A)."""
        def left(label):
            return self.act_left(AlgElem(self.algebra, other.left_act(label))).coeffs

        def right(label):
            return other.act_right(AlgElem(self.algebra, self.right_act(label))).coeffs
        return Multiplier(self.algebra, left, right, name=f"{self.name}·{other.name}")

    def equals_on(self, other: 'Multiplier', labels: Iterable[Any]) -> bool:
        for label in labels:
            if AlgElem(self.algebra, self.left_act(label)) != AlgElem(self.algebra, other.left_act(label)):
                return False
            if AlgElem(self.algebra, self.right_act(label)) != AlgElem(self.algebra, other.right_act(label)):
                return False
        return True

    def to_tables(self, labels: Iterable[Any]) -> Dict[str, Any]:
        labels = list(labels)
        to_text = self.algebra.label_to_text
        return {
            "name": self.name,
            "left": {to_text(label): {to_text(k): v.to_text() for k, v in self.left_act(label).items()}
                     for label in labels},
            "right": {to_text(label): {to_text(k): v.to_text() for k, v in self.right_act(label).items()}
                      for label in labels},
        }

    def __repr__(self) -> str:
        return f"Multiplier[{self.algebra.name}]({self.name})"
