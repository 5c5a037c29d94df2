"""
Quantum Group Descriptor
------------------------

Structure tables of a finite or truncated algebraic quantum group. The base
class stores explicit tables (finite backends, JSON files); truncated
backends subclass it and compute entries on demand.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

from jsonschema import ValidationError, validate

from app.errors import DescriptorValidationError
from app.models.multiplier import Multiplier
from app.models.scalar import Scalar

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_SPARSE_VECTOR = {
    "type": "object",
    "additionalProperties": {"type": "string"},
}

_MULTIPLIER = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "left": {"type": "object", "additionalProperties": _SPARSE_VECTOR},
        "right": {"type": "object", "additionalProperties": _SPARSE_VECTOR},
    },
    "required": ["left", "right"],
}

DESCRIPTOR_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer"},
        "name": {"type": "string"},
        "basis": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "unit": _SPARSE_VECTOR,
        "mult": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "string"}, _SPARSE_VECTOR],
                "minItems": 3,
                "maxItems": 3,
            },
        },
        "comult": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "array",
                    "prefixItems": [{"type": "string"}, {"type": "string"}, {"type": "string"}],
                    "minItems": 3,
                    "maxItems": 3,
                },
            },
        },
        "counit": _SPARSE_VECTOR,
        "antipode": {"type": "object", "additionalProperties": _SPARSE_VECTOR},
        "antipode_inv": {"type": "object", "additionalProperties": _SPARSE_VECTOR},
        "star": {"type": "object", "additionalProperties": _SPARSE_VECTOR},
        "haar": _SPARSE_VECTOR,
        "modular": _MULTIPLIER,
        "modular_sqrt": _MULTIPLIER,
        "modular_inv_sqrt": _MULTIPLIER,
        "unimodular": {"type": "boolean"},
        "trusted": {"type": "boolean"},
    },
    "required": ["name", "basis", "mult", "comult", "counit", "antipode",
                 "antipode_inv", "star", "haar", "unimodular"],
}

Sparse = Dict[Any, Scalar]


class QGroupDescriptor:
    """
    A quantum group given by structure tables.

    Subclasses with an infinite (truncated) basis override the ``*_basis``
    lookups, ``grade`` and ``comul_window``; everything in app.services works
    through these lookups only.
    """

    def __init__(
        self,
        name: str,
        basis: List[Any],
        mult: Dict[Tuple[Any, Any], Sparse] = None,
        comult: Dict[Any, Dict[Tuple[Any, Any], Scalar]] = None,
        counit: Dict[Any, Scalar] = None,
        antipode: Dict[Any, Sparse] = None,
        antipode_inv: Dict[Any, Sparse] = None,
        star: Dict[Any, Sparse] = None,
        haar: Dict[Any, Scalar] = None,
        unit: Optional[Sparse] = None,
        modular: Optional[Multiplier] = None,
        modular_sqrt: Optional[Multiplier] = None,
        modular_inv_sqrt: Optional[Multiplier] = None,
        unimodular: bool = False,
        truncation: Optional[Dict[str, Any]] = None,
    ):
        self.name = name
        self.basis = list(basis)
        self._basis_set = set(self.basis)
        self._index = {label: i for i, label in enumerate(self.basis)}
        self.mult = mult or {}
        self.comult = comult or {}
        self.counit = counit or {}
        self.antipode = antipode or {}
        self.antipode_inv = antipode_inv or {}
        self.star = star or {}
        self.haar = haar or {}
        self.unit = unit
        self.unimodular = unimodular
        self.truncation = truncation
        identity = Multiplier.identity(self)
        self.modular = modular or identity
        self.modular_sqrt = modular_sqrt or identity
        self.modular_inv_sqrt = modular_inv_sqrt or identity

    # label handling

    def validate_label(self, label: Any) -> None:
        if label not in self._basis_set:
            raise ValueError(f"Label {label!r} is not a basis element of {self.name}")

    def sort_key(self, label: Any):
        return self._index.get(label, len(self._index))

    def label_to_text(self, label: Any) -> str:
        return str(label)

    def text_to_label(self, text: str) -> Any:
        for label in self.basis:
            if self.label_to_text(label) == text:
                return label
        raise ValueError(f"Unknown basis label {text!r} for {self.name}")

    # truncation metadata

    @property
    def is_truncated(self) -> bool:
        return self.truncation is not None

    @property
    def comul_window(self) -> Optional[int]:
        """Largest grade kept in each leg of a coproduct, or None if exact."""
        return None

    @property
    def block_diagonal(self) -> bool:
        """True when products of labels with different grades vanish."""
        return False

    def grade(self, label: Any) -> int:
        return 0

    # structure lookups

    def mul_basis(self, left: Any, right: Any) -> Sparse:
        return self.mult.get((left, right), {})

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        table = self.comult.get(label, {})
        if right_grades is None:
            return table
        return {key: value for key, value in table.items() if self.grade(key[1]) in right_grades}

    def counit_basis(self, label: Any) -> Scalar:
        return self.counit.get(label, Scalar(0))

    def antipode_basis(self, label: Any) -> Sparse:
        return self.antipode.get(label, {})

    def antipode_inv_basis(self, label: Any) -> Sparse:
        return self.antipode_inv.get(label, {})

    def star_basis(self, label: Any) -> Sparse:
        return self.star.get(label, {})

    def haar_basis(self, label: Any) -> Scalar:
        return self.haar.get(label, Scalar(0))

    def haar_product(self, left: Any, right: Any) -> Scalar:
        """φ(left·right) for two basis labels."""
        total = Scalar(0)
        for label, value in self.mul_basis(left, right).items():
            total = total + value * self.haar_basis(label)
        return total

    def unit_coeffs(self, window: Optional[int] = None) -> Sparse:
        if self.unit is None:
            raise ValueError(f"{self.name} has no unit; pass a truncation window")
        return self.unit

    # serialization

    def to_dict(self) -> Dict[str, Any]:
        text = self.label_to_text

        def vector(sparse: Sparse) -> Dict[str, str]:
            return {text(label): value.to_text() for label, value in sparse.items()}

        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "basis": [text(label) for label in self.basis],
            "unit": vector(self.unit_coeffs()) if self.unit is not None else {},
            "mult": [
                [text(a), text(b), vector(self.mul_basis(a, b))]
                for a in self.basis for b in self.basis if self.mul_basis(a, b)
            ],
            "comult": {
                text(label): [[text(x), text(y), value.to_text()]
                              for (x, y), value in self.comul_basis(label).items()]
                for label in self.basis
            },
            "counit": {text(label): self.counit_basis(label).to_text() for label in self.basis},
            "antipode": {text(label): vector(self.antipode_basis(label)) for label in self.basis},
            "antipode_inv": {text(label): vector(self.antipode_inv_basis(label)) for label in self.basis},
            "star": {text(label): vector(self.star_basis(label)) for label in self.basis},
            "haar": {text(label): self.haar_basis(label).to_text() for label in self.basis},
            "modular": self.modular.to_tables(self.basis),
            "modular_sqrt": self.modular_sqrt.to_tables(self.basis),
            "modular_inv_sqrt": self.modular_inv_sqrt.to_tables(self.basis),
            "unimodular": self.unimodular,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], trusted: Optional[bool] = None) -> 'QGroupDescriptor':
        """
        Build a descriptor from its JSON form.

        Args:
            data: Parsed JSON document
            trusted: Skip the axioms suite; defaults to the document's own flag

        Raises:
            DescriptorValidationError: On schema violation or a failing axiom
        """
        try:
            validate(instance=data, schema=DESCRIPTOR_SCHEMA)
        except ValidationError as e:
            logger.error(f"Descriptor schema validation failed: {type(e).__name__}: {str(e)}")
            raise DescriptorValidationError(f"Descriptor failed schema validation: {e.message}") from e

        basis = list(data["basis"])
        known = set(basis)

        def label(name: str) -> str:
            if name not in known:
                raise DescriptorValidationError(f"Unknown basis label {name!r} in {data['name']}")
            return name

        def vector(raw: Dict[str, str]) -> Sparse:
            try:
                return {label(k): Scalar.from_text(v) for k, v in raw.items()}
            except ValueError as e:
                raise DescriptorValidationError(f"Malformed scalar in {data['name']}: {e}") from e

        try:
            mult = {(label(a), label(b)): vector(out) for a, b, out in data["mult"]}
            comult = {
                label(k): {(label(x), label(y)): Scalar.from_text(v) for x, y, v in entries}
                for k, entries in data["comult"].items()
            }
            counit = {label(k): Scalar.from_text(v) for k, v in data["counit"].items()}
            haar = {label(k): Scalar.from_text(v) for k, v in data["haar"].items()}
        except ValueError as e:
            raise DescriptorValidationError(f"Malformed scalar in {data['name']}: {e}") from e

        descriptor = cls(
            name=data["name"],
            basis=basis,
            mult=mult,
            comult=comult,
            counit=counit,
            antipode={label(k): vector(v) for k, v in data["antipode"].items()},
            antipode_inv={label(k): vector(v) for k, v in data["antipode_inv"].items()},
            star={label(k): vector(v) for k, v in data["star"].items()},
            haar=haar,
            unit=vector(data["unit"]) if data.get("unit") else None,
            unimodular=data["unimodular"],
        )
        for key in ("modular", "modular_sqrt", "modular_inv_sqrt"):
            if data.get(key):
                tables = data[key]
                setattr(descriptor, key, Multiplier.from_tables(
                    descriptor,
                    {label(k): vector(v) for k, v in tables["left"].items()},
                    {label(k): vector(v) for k, v in tables["right"].items()},
                    name=tables.get("name") or key,
                ))

        if trusted is None:
            trusted = bool(data.get("trusted", False))
        if not trusted:
            from app.services.axioms import run_axioms_suite

            failures = [check for check in run_axioms_suite(descriptor) if check.status == "fail"]
            if failures:
                names = ", ".join(check.name for check in failures)
                logger.error(f"Descriptor {descriptor.name} failed axioms: {names}")
                raise DescriptorValidationError(f"Descriptor {descriptor.name} failed axioms: {names}")
        return descriptor

    def __repr__(self) -> str:
        return f"QGroupDescriptor({self.name}, dim={len(self.basis)})"

