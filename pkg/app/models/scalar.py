"""
Scalar Models
-------------

Exact coefficients in the field Q(q^{1/2}) and the numeric context used for
positivity checks. A Scalar wraps an element of the sympy rational function
field in t = q^{1/2}; its canonical form (reduced, monic denominator with
lowest exponent 0) is exposed as a pair of LaurentPoly objects.
"""

import re
from typing import Dict, Iterable, Tuple, Union

from sympy import QQ, Rational
from sympy.polys.fields import field

from app.errors import DivisionByZeroError

# t = q^{1/2}; every exponent below is an exponent of t
FIELD, T = field("t", QQ)

Number = Union[int, Rational, "Scalar"]


class LaurentPoly:
    """Sparse Laurent polynomial in q^{1/2} with rational coefficients."""

    def __init__(self, terms: Dict[int, Rational] = None):
        self.terms: Dict[int, Rational] = {
            int(e): Rational(c) for e, c in (terms or {}).items() if c != 0
        }

    @classmethod
    def from_poly(cls, poly, shift: int = 0, scale=1) -> 'LaurentPoly':
        terms = {}
        for (exponent,), coeff in poly.terms():
            terms[exponent + shift] = QQ.to_sympy(coeff) * scale
        return cls(terms)

    def exponents(self) -> Tuple[int, ...]:
        return tuple(sorted(self.terms, reverse=True))

    def is_zero(self) -> bool:
        return not self.terms

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exponent in self.exponents():
            coeff = self.terms[exponent]
            parts.append(_format_term(coeff, exponent, first=not parts))
        return "".join(parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()})"


def _format_exponent(exponent: int) -> str:
    if exponent % 2 == 0:
        return str(exponent // 2)
    return f"{exponent}/2"


def _format_term(coeff: Rational, exponent: int, first: bool) -> str:
    sign = "-" if coeff < 0 else ("" if first else "+")
    magnitude = abs(coeff)
    if exponent == 0:
        return f"{sign}{magnitude}"
    power = "q" if exponent == 2 else f"q^{_format_exponent(exponent)}"
    if magnitude == 1:
        return f"{sign}{power}"
    return f"{sign}{magnitude}*{power}"


_TERM_RE = re.compile(
    r"^(?P<sign>[+-]?)(?P<coeff>\d+(?:/\d+)?)?\*?(?P<q>q(?:\^(?P<exp>-?\d+(?:/2)?))?)?$"
)


def _parse_laurent(text: str) -> Dict[int, Rational]:
    text = text.strip()
    if text == "0":
        return {}
    terms: Dict[int, Rational] = {}
    for chunk in re.split(r"(?<=[^\^*(])(?=[+-])", text):
        match = _TERM_RE.match(chunk.strip())
        if not match or not (match.group("coeff") or match.group("q")):
            raise ValueError(f"Malformed Laurent term: {chunk!r}")
        coeff = Rational(match.group("coeff") or 1)
        if match.group("sign") == "-":
            coeff = -coeff
        exponent = 0
        if match.group("q"):
            raw = match.group("exp")
            if raw is None:
                exponent = 2
            elif raw.endswith("/2"):
                exponent = int(raw[:-2])
            else:
                exponent = 2 * int(raw)
        terms[exponent] = terms.get(exponent, 0) + coeff
    return terms


class Scalar:
    """Exact element of Q(q^{1/2}); immutable."""

    __slots__ = ("_value", "_canonical")

    def __init__(self, value: Union[int, Rational, "Scalar", object] = 0):
        if isinstance(value, Scalar):
            value = value._value
        elif isinstance(value, Rational) and not isinstance(value, int):
            value = FIELD(QQ.from_sympy(value))
        elif not hasattr(value, "numer"):
            value = FIELD(value)
        self._value = value
        self._canonical = None

    # constructors

    @classmethod
    def q(cls) -> 'Scalar':
        return cls(T ** 2)

    @classmethod
    def q_power(cls, half_exponent: int) -> 'Scalar':
        """Return q^{half_exponent/2}."""
        return cls(T ** half_exponent)

    @classmethod
    def from_laurent(cls, num: LaurentPoly, den: LaurentPoly) -> 'Scalar':
        if den.is_zero():
            raise DivisionByZeroError("Denominator of a Scalar must be nonzero")
        return cls(_laurent_to_field(num)) / cls(_laurent_to_field(den))

    @classmethod
    def from_text(cls, text: str) -> 'Scalar':
        match = re.match(r"^\((.*)\)/\((.*)\)$", text.strip())
        if not match:
            raise ValueError(f"Scalar text must look like (num)/(den), got {text!r}")
        return cls.from_laurent(
            LaurentPoly(_parse_laurent(match.group(1))),
            LaurentPoly(_parse_laurent(match.group(2))),
        )

    # canonical form

    def _canonicalize(self) -> Tuple[LaurentPoly, LaurentPoly]:
        if self._canonical is None:
            numer, denom = self._value.numer, self._value.denom
            if not numer:
                self._canonical = (LaurentPoly(), LaurentPoly({0: 1}))
            else:
                low = min(e for (e,), _ in denom.terms())
                lead = QQ.to_sympy(denom.LC)
                self._canonical = (
                    LaurentPoly.from_poly(numer, shift=-low, scale=1 / lead),
                    LaurentPoly.from_poly(denom, shift=-low, scale=1 / lead),
                )
        return self._canonical

    @property
    def num(self) -> LaurentPoly:
        return self._canonicalize()[0]

    @property
    def den(self) -> LaurentPoly:
        return self._canonicalize()[1]

    @property
    def value(self):
        return self._value

    def to_text(self) -> str:
        num, den = self._canonicalize()
        return f"({num.to_text()})/({den.to_text()})"

    def is_zero(self) -> bool:
        return not self._value

    def is_rational(self) -> bool:
        num, den = self._canonicalize()
        return set(num.terms) <= {0} and set(den.terms) == {0}

    def rational_value(self) -> Rational:
        if not self.is_rational():
            raise ValueError(f"Scalar {self.to_text()} is not a rational constant")
        return self.num.terms.get(0, Rational(0))

    # arithmetic

    def __add__(self, other: Number) -> 'Scalar':
        return Scalar(self._value + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Number) -> 'Scalar':
        return Scalar(self._value - _coerce(other))

    def __rsub__(self, other: Number) -> 'Scalar':
        return Scalar(_coerce(other) - self._value)

    def __mul__(self, other: Number) -> 'Scalar':
        return Scalar(self._value * _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> 'Scalar':
        divisor = _coerce(other)
        if not divisor:
            raise DivisionByZeroError(f"Division of {self.to_text()} by zero")
        return Scalar(self._value / divisor)

    def __rtruediv__(self, other: Number) -> 'Scalar':
        return Scalar(other) / self

    def __neg__(self) -> 'Scalar':
        return Scalar(-self._value)

    def __pow__(self, exponent: int) -> 'Scalar':
        if exponent < 0 and not self._value:
            raise DivisionByZeroError("Negative power of zero")
        return Scalar(self._value ** exponent)

    def __bool__(self) -> bool:
        return bool(self._value)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Scalar, int, Rational)):
            return not (self._value - _coerce(other))
        return NotImplemented

    def __hash__(self) -> int:
        num, den = self._canonicalize()
        return hash((num, den))

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()})"


def _coerce(value: Number):
    if isinstance(value, Scalar):
        return value._value
    return Scalar(value)._value


def _laurent_to_field(poly: LaurentPoly):
    total = FIELD(0)
    for exponent, coeff in poly.terms.items():
        total += FIELD(QQ.from_sympy(coeff)) * T ** exponent
    return total


ZERO = Scalar(0)
ONE = Scalar(1)


def scalar_sum(values: Iterable[Scalar]) -> Scalar:
    total = FIELD(0)
    for value in values:
        total += value._value
    return Scalar(total)


class NumericContext:
    """A numeric sample of q together with a comparison tolerance."""

    def __init__(self, q_value: complex = 0.5, tolerance: float = 1e-9):
        if q_value == 0:
            raise ValueError("q_value must be nonzero")
        if tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        self.q_value = complex(q_value)
        self.tolerance = float(tolerance)

    def to_dict(self) -> Dict[str, object]:
        return {
            "q_value": [self.q_value.real, self.q_value.imag],
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> 'NumericContext':
        real, imag = data["q_value"]
        return cls(q_value=complex(real, imag), tolerance=data.get("tolerance", 1e-9))
