"""
Representation Models
---------------------

Finite-dimensional corepresentations and *-representations of convolution
algebras, and the induced representations built from them.
"""

from typing import Any, Dict, List, Optional, Tuple

from jsonschema import validate

from app.models.scalar import Scalar

INDUCED_REP_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer"},
        "algebra": {"type": "string"},
        "subgroup": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 0},
        "gram": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        "actions": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "string"}},
            },
        },
        "character": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["algebra", "dimension", "gram", "actions"],
}

Matrix = List[List[Scalar]]


def identity_matrix(dim: int) -> Matrix:
    return [[Scalar(1) if i == j else Scalar(0) for j in range(dim)] for i in range(dim)]


class Coaction:
    """Left coaction V -> A(G)⊗V on a space with basis 0..dim-1."""

    def __init__(self, algebra, dim: int, table: Dict[int, Dict[Tuple[Any, int], Scalar]]):
        self.algebra = algebra
        self.dim = dim
        self.table = table

    @classmethod
    def trivial(cls, algebra, dim: int = 1) -> 'Coaction':
        one = algebra.unit_coeffs()
        return cls(algebra, dim, {
            i: {(label, i): value for label, value in one.items()} for i in range(dim)
        })

    def apply(self, index: int) -> Dict[Tuple[Any, int], Scalar]:
        return self.table.get(index, {})


class RepOnSpace:
    """
    A representation of a convolution algebra D(G) on C^dim.

    ``actions`` maps basis labels of the algebra to matrices; ``inner`` is the
    Gram matrix of the inner product on V (identity when omitted).
    """

    def __init__(self, algebra, dim: int, actions: Dict[Any, Matrix],
                 inner: Optional[Matrix] = None, name: str = ""):
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        self.algebra = algebra
        self.dim = dim
        self.actions = actions
        self.inner = inner if inner is not None else identity_matrix(dim)
        self.name = name

    def matrix(self, element) -> Matrix:
        """Matrix of the action of an AlgElem."""
        result = [[Scalar(0)] * self.dim for _ in range(self.dim)]
        for label, value in element.coeffs.items():
            block = self.actions.get(label)
            if block is None:
                continue
            for i in range(self.dim):
                for j in range(self.dim):
                    if not block[i][j].is_zero():
                        result[i][j] = result[i][j] + value * block[i][j]
        return result

    def act(self, element, vector: List[Scalar]) -> List[Scalar]:
        matrix = self.matrix(element)
        return [sum((matrix[i][j] * vector[j] for j in range(self.dim)), Scalar(0))
                for i in range(self.dim)]


class InducedRep:
    """
    Induced representation at desk scale: representatives f⊗v, their Gram
    matrix, and the D(G)-action on the quotient by the null space.
    """

    def __init__(self, algebra, subgroup: str, representatives: List[Tuple[Any, int]],
                 gram: Matrix, basis: List[List[Scalar]], actions: Dict[Any, Matrix],
                 reduced_gram: Matrix, character: Optional[List[Scalar]] = None):
        self.algebra = algebra
        self.subgroup = subgroup
        self.representatives = representatives
        self.gram = gram
        self.basis = basis
        self.actions = actions
        self.reduced_gram = reduced_gram
        self.character = character

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def as_rep(self) -> RepOnSpace:
        """The quotient module as a representation with the reduced Gram matrix."""
        return RepOnSpace(self.algebra, self.dimension, self.actions,
                          inner=self.reduced_gram, name=f"Ind[{self.subgroup}]")

    def to_dict(self) -> Dict[str, Any]:
        def text(matrix: Matrix) -> List[List[str]]:
            return [[entry.to_text() for entry in row] for row in matrix]

        data = {
            "schema_version": 1,
            "algebra": self.algebra.name,
            "subgroup": self.subgroup,
            "dimension": self.dimension,
            "gram": text(self.reduced_gram),
            "actions": {self.algebra.label_to_text(label): text(matrix)
                        for label, matrix in self.actions.items()},
        }
        if self.character is not None:
            data["character"] = [value.to_text() for value in self.character]
        validate(instance=data, schema=INDUCED_REP_SCHEMA)
        return data
