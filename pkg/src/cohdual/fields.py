"""Exact coefficient scalars: arbitrary-precision rationals and prime fields.

Rational coefficients are plain ``fractions.Fraction`` values (a bare ``int``
is accepted anywhere a rational is, and compares and hashes consistently with
the equal Fraction).  Prime-field coefficients are ``Fp`` residues.  The two
kinds never mix inside one element; the field is chosen once per computation
and carried by the scalars themselves, so the element layer stays
field-agnostic.
"""

from __future__ import annotations

from fractions import Fraction
import re

_SCALAR_RE = re.compile(r"^-?\d+(/\d+)?$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Fp:
    """Residue modulo a prime p, normalised to the range [0, p).

    Supports mixed arithmetic with ``int`` (coerced mod p).  Equality with an
    ``int`` also reduces mod p; the hash is that of the normalised residue,
    so only the canonical small representative hashes consistently.
    """

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "value", value % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, val):  # immutable
        raise AttributeError("Fp values are immutable")

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixed prime fields: {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return Fp(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return Fp(pow(self.value, exponent, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"


class RationalField:
    """Descriptor for exact rational coefficients."""

    descriptor = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def from_int(value: int) -> Fraction:
        return Fraction(value)

    @staticmethod
    def parse_scalar(text: str) -> Fraction:
        if not _SCALAR_RE.match(text):
            raise ValueError(f"not an integer or integer fraction: {text!r}")
        return Fraction(text)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalField()"


class PrimeField:
    """Descriptor for coefficients in the prime field of ``p`` elements."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"not a prime: {p}")
        self.p = p

    @property
    def descriptor(self) -> str:
        return f"prime:{self.p}"

    @property
    def zero(self) -> Fp:
        return Fp(0, self.p)

    @property
    def one(self) -> Fp:
        return Fp(1, self.p)

    def from_int(self, value: int) -> Fp:
        return Fp(value, self.p)

    def parse_scalar(self, text: str) -> Fp:
        if not _SCALAR_RE.match(text):
            raise ValueError(f"not an integer or integer fraction: {text!r}")
        if "/" in text:
            num, den = text.split("/")
            d = Fp(int(den), self.p)
            if not d:
                raise ValueError(f"denominator {den} vanishes mod {self.p}")
            return Fp(int(num), self.p) * d.inverse()
        return Fp(int(text), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


RATIONAL = RationalField()

Field = RationalField | PrimeField


def field_from_descriptor(text: str) -> Field:
    """Rebuild a field from its descriptor string ("rational" or "prime:p")."""
    if text == "rational":
        return RATIONAL
    if text.startswith("prime:"):
        return PrimeField(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown field descriptor: {text!r}")
