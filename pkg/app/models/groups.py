"""
Finite Group Models
-------------------

Cayley-table groups and their subgroups. Presets are generated from sympy's
permutation groups; other groups are read from JSON Cayley files.
"""

from itertools import product
from typing import Any, Dict, List, Optional, Sequence

from jsonschema import validate
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import CyclicGroup, DihedralGroup, SymmetricGroup

GROUP_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "elements": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "cayley": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        },
    },
    "required": ["name", "elements", "cayley"],
}


def _permutation_name(perm: Permutation) -> str:
    cycles = perm.cyclic_form
    if not cycles:
        return "e"
    return "".join("(" + " ".join(str(point) for point in cycle) + ")" for cycle in cycles)


class FiniteGroupTable:
    def __init__(self, name: str, elements: Sequence[str], cayley: Sequence[Sequence[int]]):
        self.name = name
        self.elements = list(elements)
        self.cayley = [list(row) for row in cayley]
        self._validate()
        self.identity = self._find_identity()
        self.inverse = [self._find_inverse(i) for i in range(self.order)]
        self.index = {name: i for i, name in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def _validate(self) -> None:
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError(f"Group {self.name} has duplicate element names")
        if len(self.cayley) != n or any(len(row) != n for row in self.cayley):
            raise ValueError(f"Cayley table of {self.name} must be {n}x{n}")
        if any(entry >= n for row in self.cayley for entry in row):
            raise ValueError(f"Cayley table of {self.name} has out-of-range entries")
        for a, b, c in product(range(n), repeat=3):
            if self.cayley[self.cayley[a][b]][c] != self.cayley[a][self.cayley[b][c]]:
                raise ValueError(f"Cayley table of {self.name} is not associative")

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(self.cayley[e][g] == g and self.cayley[g][e] == g for g in range(self.order)):
                return e
        raise ValueError(f"Group {self.name} has no identity")

    def _find_inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.cayley[g][h] == self.identity and self.cayley[h][g] == self.identity:
                return h
        raise ValueError(f"Element {self.elements[g]} of {self.name} has no inverse")

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def conjugate(self, x: int, g: int) -> int:
        """x⁻¹ g x."""
        return self.mul(self.mul(self.inverse[x], g), x)

    def element_order(self, g: int) -> int:
        power, k = g, 1
        while power != self.identity:
            power = self.mul(power, g)
            k += 1
        return k

    def conjugacy_classes(self) -> List[List[int]]:
        """Classes sorted by element order, then size, then first element."""
        seen, classes = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({self.conjugate(x, g) for x in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return sorted(classes, key=lambda c: (self.element_order(c[0]), len(c), c[0]))

    def rational_class_count(self) -> int:
        """Number of classes of cyclic subgroups up to conjugacy."""
        seen, count = set(), 0
        for g in range(self.order):
            if g in seen:
                continue
            count += 1
            n = self.element_order(g)
            power = self.identity
            generators = []
            for k in range(1, n + 1):
                power = self.mul(power, g)
                if _gcd(k, n) == 1:
                    generators.append(power)
            for h in generators:
                seen.update(self.conjugate(x, h) for x in range(self.order))
        return count

    def subgroups(self) -> List['SubgroupSpec']:
        """All subgroups, found as closures of element pairs."""
        found: Dict[frozenset, SubgroupSpec] = {}
        for a in range(self.order):
            for b in range(a, self.order):
                members = self.closure([a, b])
                if members not in found:
                    found[members] = SubgroupSpec(self, members)
        return sorted(found.values(), key=lambda s: (s.order, sorted(s.members)))

    def closure(self, generators: Sequence[int]) -> frozenset:
        members = {self.identity, *generators}
        frontier = list(members)
        while frontier:
            new = []
            for a in frontier:
                for b in list(members):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in members:
                            members.add(c)
                            new.append(c)
            frontier = new
        return frozenset(members)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "elements": self.elements, "cayley": self.cayley}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FiniteGroupTable':
        validate(instance=data, schema=GROUP_SCHEMA)
        return cls(data["name"], data["elements"], data["cayley"])

    @classmethod
    def from_permutation_group(cls, name: str, group) -> 'FiniteGroupTable':
        elements = sorted(group.elements, key=lambda p: (p.order(), p.array_form))
        index = {tuple(p.array_form): i for i, p in enumerate(elements)}
        # composition: (a*b)(x) = a(b(x)), matching left-to-right action on points
        cayley = [[index[tuple((b * a).array_form)] for b in elements] for a in elements]
        return cls(name, [_permutation_name(p) for p in elements], cayley)

    def __repr__(self) -> str:
        return f"FiniteGroupTable({self.name}, order={self.order})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class SubgroupSpec:
    def __init__(self, parent: FiniteGroupTable, members):
        self.parent = parent
        self.members = frozenset(members)
        if parent.identity not in self.members:
            raise ValueError("Subgroup must contain the identity")
        for a in self.members:
            if parent.inverse[a] not in self.members:
                raise ValueError(f"Subset is not closed under inverses at {parent.elements[a]}")
            for b in self.members:
                if parent.mul(a, b) not in self.members:
                    raise ValueError(
                        f"Subset is not closed under products at "
                        f"{parent.elements[a]}, {parent.elements[b]}"
                    )

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def name(self) -> str:
        names = ",".join(self.parent.elements[i] for i in sorted(self.members))
        return f"{self.parent.name}<{names}>"

    def as_group(self) -> FiniteGroupTable:
        members = sorted(self.members)
        local = {g: i for i, g in enumerate(members)}
        cayley = [[local[self.parent.mul(a, b)] for b in members] for a in members]
        return FiniteGroupTable(self.name, [self.parent.elements[g] for g in members], cayley)

    @classmethod
    def from_names(cls, parent: FiniteGroupTable, names: Sequence[str]) -> 'SubgroupSpec':
        try:
            generators = [parent.index[name] for name in names]
        except KeyError as e:
            raise ValueError(f"Unknown element {e.args[0]!r} of {parent.name}") from e
        return cls(parent, parent.closure(generators))


def quaternion_group() -> FiniteGroupTable:
    # units ±1, ±i, ±j, ±k encoded as (sign, unit) with unit in 1, i, j, k
    units = ["1", "i", "j", "k"]
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, u) for u in units for s in (1, -1)]
    names = [("" if s == 1 else "-") + u for s, u in elements]
    index = {element: i for i, element in enumerate(elements)}
    cayley = []
    for sa, ua in elements:
        row = []
        for sb, ub in elements:
            sign, unit = table[(ua, ub)]
            row.append(index[(sa * sb * sign, unit)])
        cayley.append(row)
    return FiniteGroupTable("Q8", names, cayley)


def preset_group(name: str) -> FiniteGroupTable:
    """
    Build a preset group: Z<n>, S3, S4, D4 or Q8.

    Raises:
        ValueError: For an unknown preset
    """
    key = name.strip()
    if key.upper().startswith("Z") and key[1:].isdigit():
        n = int(key[1:])
        if n < 1:
            raise ValueError("Cyclic group order must be positive")
        return FiniteGroupTable.from_permutation_group(f"Z{n}", CyclicGroup(n))
    if key.upper() in ("S3", "S4"):
        return FiniteGroupTable.from_permutation_group(key.upper(), SymmetricGroup(int(key[1])))
    if key.upper() == "D4":
        return FiniteGroupTable.from_permutation_group("D4", DihedralGroup(4))
    if key.upper() == "Q8":
        return quaternion_group()
    raise ValueError(f"Preset must be one of: Z<n>, S3, S4, D4, Q8 (got {name!r})")
