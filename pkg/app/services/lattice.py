"""
Lattice Quantum Groups
----------------------

The abelian quantum groups indexed by the weight lattice P = Zω of SU_q(2):
group-like bases (A(T) = span{e^n}, D(A_q)) and delta bases (A(A_q),
D(T)), plus the untwisted tensor product of two descriptors.

Lattice labels are plain integers n, standing for the weight nω.
"""

import logging
from typing import Any, Dict, Optional, Tuple

from app.models.descriptor import QGroupDescriptor
from app.models.multiplier import Multiplier
from app.models.scalar import Scalar

logger = logging.getLogger(__name__)

VALID_KINDS = ("group", "delta")

ONE = Scalar(1)


class LatticeDescriptor(QGroupDescriptor):
    """
    Abelian quantum group on the weight lattice.

    kind "group": e^a e^b = e^{a+b}, Δ(e^n) = e^n⊗e^n, φ(e^n) = [n = 0].
    kind "delta": δ_a δ_b = [a = b]δ_a, Δ(δ_n) = Σ_a δ_a⊗δ_{n-a}, φ(δ_n) = 1.

    ``bound`` limits the enumerated basis; ``window`` limits the legs of a
    delta coproduct.
    """

    def __init__(self, name: str, kind: str, bound: int, prefix: str = "e^",
                 window: Optional[int] = None):
        if kind not in VALID_KINDS:
            raise ValueError(f"kind must be one of: {', '.join(VALID_KINDS)}")
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        self.kind = kind
        self.bound = bound
        self.prefix = prefix
        self.window = bound if window is None else window
        super().__init__(
            name=name,
            basis=list(range(-bound, bound + 1)),
            unimodular=True,
            truncation={"bound": bound},
        )

    def validate_label(self, label: Any) -> None:
        if not isinstance(label, int):
            raise ValueError(f"Label {label!r} of {self.name} must be an integer weight")

    def sort_key(self, label: Any):
        return (abs(label), label)

    def label_to_text(self, label: Any) -> str:
        return f"{self.prefix}{label}"

    def text_to_label(self, text: str) -> Any:
        if not text.startswith(self.prefix):
            raise ValueError(f"Label {text!r} of {self.name} must start with {self.prefix!r}")
        return int(text[len(self.prefix):])

    @property
    def comul_window(self) -> Optional[int]:
        return self.window if self.kind == "delta" else None

    @property
    def block_diagonal(self) -> bool:
        return self.kind == "delta"

    def grade(self, label: Any) -> int:
        return abs(label)

    def mul_basis(self, left: Any, right: Any) -> Dict[Any, Scalar]:
        if self.kind == "group":
            return {left + right: ONE}
        return {left: ONE} if left == right else {}

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        if self.kind == "group":
            return {(label, label): ONE}
        table = {}
        for a in range(-self.window, self.window + 1):
            b = label - a
            if abs(b) > self.window:
                continue
            if right_grades is not None and abs(b) not in right_grades:
                continue
            table[(a, b)] = ONE
        return table

    def counit_basis(self, label: Any) -> Scalar:
        if self.kind == "group":
            return ONE
        return ONE if label == 0 else Scalar(0)

    def antipode_basis(self, label: Any) -> Dict[Any, Scalar]:
        return {-label: ONE}

    antipode_inv_basis = antipode_basis

    def star_basis(self, label: Any) -> Dict[Any, Scalar]:
        return {-label: ONE} if self.kind == "group" else {label: ONE}

    def haar_basis(self, label: Any) -> Scalar:
        if self.kind == "group":
            return ONE if label == 0 else Scalar(0)
        return ONE

    def unit_coeffs(self, window: Optional[int] = None) -> Dict[Any, Scalar]:
        if self.kind == "group":
            return {0: ONE}
        window = self.window if window is None else window
        return {n: ONE for n in range(-window, window + 1)}

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "kind": self.kind, "bound": self.bound, "window": self.window}


def torus_algebra(bound: int) -> LatticeDescriptor:
    """A(T): trigonometric polynomials on the maximal torus."""
    return LatticeDescriptor("A(T)", "group", bound, prefix="e^")


def weight_algebra(bound: int, window: Optional[int] = None) -> LatticeDescriptor:
    """A(A_q): finitely supported functions on the weight lattice."""
    return LatticeDescriptor("A(A_q)", "delta", bound, prefix="d_", window=window)


def k_lambda_lattice(descriptor: LatticeDescriptor, k: int) -> Multiplier:
    """K_{kω} acting on a delta lattice algebra: δ_n ↦ q^{kn/2}δ_n."""
    def scale(label):
        return Scalar.q_power(k * label)
    return Multiplier.diagonal(descriptor, scale, scale, name=f"K[{k}w]")


class TensorDescriptor(QGroupDescriptor):
    """
    Untwisted tensor product A⊗B of two descriptors.

    Labels are pairs (a, b). The grade of a pair is the larger of the two
    grades, and the coproduct window is the smaller of the two windows.
    """

    def __init__(self, left: QGroupDescriptor, right: QGroupDescriptor, name: Optional[str] = None,
                 basis: Optional[list] = None):
        self.left = left
        self.right = right
        truncation = None
        if left.is_truncated or right.is_truncated:
            truncation = {"left": left.truncation, "right": right.truncation}
        super().__init__(
            name=name or f"{left.name}⊗{right.name}",
            basis=basis if basis is not None else [(a, b) for a in left.basis for b in right.basis],
            unimodular=left.unimodular and right.unimodular,
            truncation=truncation,
        )
        self.modular = tensor_multiplier(self, left.modular, right.modular)
        self.modular_sqrt = tensor_multiplier(self, left.modular_sqrt, right.modular_sqrt)
        self.modular_inv_sqrt = tensor_multiplier(self, left.modular_inv_sqrt, right.modular_inv_sqrt)

    def validate_label(self, label: Any) -> None:
        if not (isinstance(label, tuple) and len(label) == 2):
            raise ValueError(f"Label {label!r} of {self.name} must be a pair")
        self.left.validate_label(label[0])
        self.right.validate_label(label[1])

    def sort_key(self, label: Any):
        return (self.left.sort_key(label[0]), self.right.sort_key(label[1]))

    def label_to_text(self, label: Any) -> str:
        return f"{self.left.label_to_text(label[0])}⊗{self.right.label_to_text(label[1])}"

    def text_to_label(self, text: str) -> Any:
        first, _, second = text.partition("⊗")
        return (self.left.text_to_label(first), self.right.text_to_label(second))

    @property
    def comul_window(self) -> Optional[int]:
        windows = [w for w in (self.left.comul_window, self.right.comul_window) if w is not None]
        return min(windows) if windows else None

    def grade(self, label: Any) -> int:
        return max(self.left.grade(label[0]), self.right.grade(label[1]))

    def mul_basis(self, left: Any, right: Any) -> Dict[Any, Scalar]:
        second = self.right.mul_basis(left[1], right[1])
        if not second:
            return {}
        return _combine(self.left.mul_basis(left[0], right[0]), second)

    def comul_basis(self, label: Any, right_grades=None) -> Dict[Tuple[Any, Any], Scalar]:
        table = {}
        first = self.left.comul_basis(label[0])
        second = self.right.comul_basis(label[1])
        for (a1, a2), x in first.items():
            for (b1, b2), y in second.items():
                if right_grades is not None and self.grade((a2, b2)) not in right_grades:
                    continue
                table[((a1, b1), (a2, b2))] = x * y
        return table

    def counit_basis(self, label: Any) -> Scalar:
        return self.left.counit_basis(label[0]) * self.right.counit_basis(label[1])

    def antipode_basis(self, label: Any) -> Dict[Any, Scalar]:
        return _combine(self.left.antipode_basis(label[0]), self.right.antipode_basis(label[1]))

    def antipode_inv_basis(self, label: Any) -> Dict[Any, Scalar]:
        return _combine(self.left.antipode_inv_basis(label[0]), self.right.antipode_inv_basis(label[1]))

    def star_basis(self, label: Any) -> Dict[Any, Scalar]:
        return _combine(self.left.star_basis(label[0]), self.right.star_basis(label[1]))

    def haar_basis(self, label: Any) -> Scalar:
        return self.left.haar_basis(label[0]) * self.right.haar_basis(label[1])

    def haar_product(self, left: Any, right: Any) -> Scalar:
        first = self.left.haar_product(left[0], right[0])
        if first.is_zero():
            return first
        return first * self.right.haar_product(left[1], right[1])

    def unit_coeffs(self, window: Optional[int] = None) -> Dict[Any, Scalar]:
        return _combine(self.left.unit_coeffs(window), self.right.unit_coeffs(window))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "left": self.left.to_dict(), "right": self.right.to_dict()}


def _combine(first: Dict[Any, Scalar], second: Dict[Any, Scalar]) -> Dict[Any, Scalar]:
    return {(a, b): x * y for a, x in first.items() for b, y in second.items()}


def tensor_multiplier(descriptor: TensorDescriptor, first: Multiplier, second: Multiplier) -> Multiplier:
    def left(label):
        return _combine(first.left_act(label[0]), second.left_act(label[1]))

    def right(label):
        return _combine(first.right_act(label[0]), second.right_act(label[1]))

    return Multiplier(descriptor, left, right, name=f"{first.name}⊗{second.name}")
