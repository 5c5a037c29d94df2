"""
Subgroup Map Model
------------------

A closed quantum subgroup given by a surjective *-Hopf morphism
π: A(G) -> A(B), together with the element γ that turns π into the
conditional expectation E(f) = π(f)γ.
"""

from typing import Any, Callable, Dict, Optional

from app.models.elements import AlgElem, accumulate
from app.models.multiplier import Multiplier
from app.models.scalar import Scalar

LabelMap = Callable[[Any], Dict[Any, Scalar]]


class SubgroupMap:
    def __init__(self, source, target, pi: LabelMap, gamma: Optional[Multiplier] = None,
                 name: str = ""):
        self.source = source
        self.target = target
        self.pi = pi
        self.gamma = gamma or Multiplier.identity(target)
        self.name = name or f"{source.name}->{target.name}"

    def apply_pi(self, f: AlgElem) -> AlgElem:
        if f.algebra is not self.source and f.algebra.name != self.source.name:
            raise ValueError(f"Element of {f.algebra.name} is not in {self.source.name}")
        result: Dict[Any, Scalar] = {}
        for label, value in f.coeffs.items():
            for out, coeff in self.pi(label).items():
                accumulate(result, out, coeff * value)
        return AlgElem(self.target, result)

    def pi_matrix(self):
        """Rows indexed by target labels, columns by source labels."""
        rows = {label: i for i, label in enumerate(self.target.basis)}
        matrix = [[Scalar(0)] * len(self.source.basis) for _ in self.target.basis]
        for j, label in enumerate(self.source.basis):
            for out, coeff in self.pi(label).items():
                matrix[rows[out]][j] = coeff
        return matrix

    def __repr__(self) -> str:
        return f"SubgroupMap({self.name})"
