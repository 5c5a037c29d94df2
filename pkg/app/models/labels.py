"""
Basis Labels
------------

Hashable labels for the SU_q(2) backends. Spins and weights are stored
doubled so that every label is integral: a spin l is ``twice_l = 2l`` and
the weight of the basis vector v_k of V_l is ``2l - 2k``.
"""

import re
from typing import NamedTuple


def spin_text(twice_l: int) -> str:
    return str(twice_l // 2) if twice_l % 2 == 0 else f"{twice_l}/2"


def parse_spin(text: str) -> int:
    """Return 2l for a spin written as '1', '3/2' or '1.5'."""
    text = text.strip()
    if text.endswith("/2"):
        return int(text[:-2])
    value = float(text)
    twice = round(2 * value)
    if abs(2 * value - twice) > 1e-12 or twice < 0:
        raise ValueError(f"Spin must be a nonnegative half-integer, got {text!r}")
    return twice


class SpinLabel(NamedTuple):
    twice_l: int

    @property
    def dim(self) -> int:
        return self.twice_l + 1

    def weights(self):
        return [self.twice_l - 2 * k for k in range(self.twice_l + 1)]

    def __str__(self) -> str:
        return spin_text(self.twice_l)


def _check_indices(twice_l: int, i: int, j: int) -> None:
    if twice_l < 0:
        raise ValueError("twice_l must be nonnegative")
    if not (0 <= i <= twice_l and 0 <= j <= twice_l):
        raise ValueError(f"Weight indices ({i}, {j}) out of range for spin {spin_text(twice_l)}")


class PWLabel(NamedTuple):
    """Matrix coefficient u^{(l)}_{ij} of the weight basis."""
    twice_l: int
    i: int
    j: int

    @classmethod
    def make(cls, twice_l: int, i: int, j: int) -> 'PWLabel':
        _check_indices(twice_l, i, j)
        return cls(twice_l, i, j)

    def weight_i(self) -> int:
        return self.twice_l - 2 * self.i

    def weight_j(self) -> int:
        return self.twice_l - 2 * self.j

    def __str__(self) -> str:
        return f"u[{spin_text(self.twice_l)};{self.i},{self.j}]"


class DualLabel(NamedTuple):
    """Matrix unit ω^{(l)}_{ij} of the block End(V_l)."""
    twice_l: int
    i: int
    j: int

    @classmethod
    def make(cls, twice_l: int, i: int, j: int) -> 'DualLabel':
        _check_indices(twice_l, i, j)
        return cls(twice_l, i, j)

    def weight_i(self) -> int:
        return self.twice_l - 2 * self.i

    def weight_j(self) -> int:
        return self.twice_l - 2 * self.j

    def __str__(self) -> str:
        return f"w[{spin_text(self.twice_l)};{self.i},{self.j}]"


_LABEL_RE = re.compile(r"^([uw])\[([0-9/]+);(\d+),(\d+)\]$")


def parse_block_label(text: str):
    match = _LABEL_RE.match(text.strip())
    if not match:
        raise ValueError(f"Label must look like u[l;i,j] or w[l;i,j], got {text!r}")
    kind, spin, i, j = match.groups()
    cls = PWLabel if kind == "u" else DualLabel
    return cls.make(parse_spin(spin), int(i), int(j))
