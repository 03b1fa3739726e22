"""Shaped sparse elements over a truncation box, with exact scalars.

Every module handled by this package is a product of one-variable directions.
A variable either carries a *series* role (exponents run over 0, 1, 2, ...)
or an *inverse* role (exponents run over 0, -1, -2, ...).  Choosing a role
for each variable fixes a monomial basis, and the classical modules over the
power-series ring R = k[[X_1, ..., X_n]] that we compute with are all of this
form:

* the ring R itself: every role series;
* the injective hull of the residue field, realised as inverse polynomials
  with the socle at exponent zero: every role inverse;
* local cohomology of R supported in the ideal of the first i variables:
  inverse on those i variables, series on the rest;
* the Matlis dual of that local cohomology module: the roles flipped.

Multiplication by a variable raises the matching exponent by one.  In a
series direction that is the ordinary product.  In an inverse direction a
term whose exponent would become positive is annihilated; this contraction
is the module structure on inverse polynomials, not an approximation error.

A :class:`TruncationBox` clips every direction to a finite window so that
elements stay finite objects.  Any operation that pushes a genuinely nonzero
term through a series-side wall records the loss by clearing the element's
``exact`` flag.  Contraction kills on the inverse side keep ``exact`` set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

SERIES = "series"
INVERSE = "inverse"

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class ModuleShape:
    """Role assignment for the variables, one of SERIES/INVERSE per slot."""

    roles: tuple[str, ...]

    def __post_init__(self):
        for r in self.roles:
            if r not in (SERIES, INVERSE):
                raise ValueError(f"unknown role: {r!r}")

    @property
    def nvars(self) -> int:
        return len(self.roles)

    def role(self, j: int) -> str:
        return self.roles[j]

    def dual(self) -> "ModuleShape":
        """Flip every role; applying it twice gives the shape back."""
        flip = {SERIES: INVERSE, INVERSE: SERIES}
        return ModuleShape(tuple(flip[r] for r in self.roles))

    def drop(self, j: int) -> "ModuleShape":
        return ModuleShape(self.roles[:j] + self.roles[j + 1:])

    @classmethod
    def series_shape(cls, n: int) -> "ModuleShape":
        """All-series shape: the ring of power series itself."""
        return cls((SERIES,) * n)

    @classmethod
    def inverse_shape(cls, n: int) -> "ModuleShape":
        """All-inverse shape: inverse polynomials with socle at zero."""
        return cls((INVERSE,) * n)

    @classmethod
    def cohomology_shape(cls, n: int, i: int) -> "ModuleShape":
        """Inverse on the first i variables, series on the remaining n - i."""
        if not 1 <= i <= n:
            raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
        return cls((INVERSE,) * i + (SERIES,) * (n - i))


@dataclass(frozen=True)
class TruncationBox:
    """Per-variable exponent bounds.

    A series exponent e is admissible when 0 <= e <= bound; an inverse
    exponent when -bound <= e <= 0.  Bounds are nonnegative integers.
    """

    bounds: tuple[int, ...]

    def __post_init__(self):
        for b in self.bounds:
            if not isinstance(b, int) or b < 0:
                raise ValueError(f"box bounds must be nonnegative integers: {self.bounds}")

    @classmethod
    def uniform(cls, n: int, bound: int) -> "TruncationBox":
        return cls((bound,) * n)

    @property
    def nvars(self) -> int:
        return len(self.bounds)

    def bound(self, j: int) -> int:
        return self.bounds[j]

    def drop(self, j: int) -> "TruncationBox":
        return TruncationBox(self.bounds[:j] + self.bounds[j + 1:])

    def __add__(self, other: "TruncationBox") -> "TruncationBox":
        if len(other.bounds) != len(self.bounds):
            raise ValueError("cannot add boxes over different variable counts")
        return TruncationBox(tuple(a + b for a, b in zip(self.bounds, other.bounds)))

    @staticmethod
    def coordinate_ok(role: str, bound: int, e: int) -> bool:
        if role == SERIES:
            return 0 <= e <= bound
        return -bound <= e <= 0

    def admits(self, shape: ModuleShape, exponents: Exponents) -> bool:
        return all(
            self.coordinate_ok(r, b, e)
            for r, b, e in zip(shape.roles, self.bounds, exponents)
        )


@dataclass(frozen=True, eq=False)
class Element:
    """A finite sum of scaled monomials inside one shape and box.

    ``terms`` is kept sorted lexicographically by exponent vector and never
    contains zero coefficients; two elements are equal exactly when their
    shapes, boxes and term lists agree.  The ``exact`` flag is bookkeeping,
    not part of the value: it is true while no operation has discarded an
    out-of-box term.
    """

    shape: ModuleShape
    box: TruncationBox
    terms: tuple[tuple[Exponents, object], ...]
    exact: bool = True

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.box == other.box
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.shape, self.box, self.terms))

    @classmethod
    def from_terms(
        cls,
        shape: ModuleShape,
        box: TruncationBox,
        terms: Mapping[Exponents, object] | Iterable[tuple[Exponents, object]],
        exact: bool = True,
    ) -> "Element":
        """Validating constructor: checks arity, roles and box membership."""
        if shape.nvars != box.nvars:
            raise ValueError("shape and box disagree on the variable count")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponents, object] = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != shape.nvars:
                raise ValueError(f"exponent vector {exps} has wrong length")
            if not box.admits(shape, exps):
                raise ValueError(f"exponent vector {exps} violates the shape or box")
            if exps in acc:
                acc[exps] = acc[exps] + coeff
            else:
                acc[exps] = coeff
        return cls._collect(shape, box, acc, exact)

    @classmethod
    def _collect(cls, shape, box, mapping, exact) -> "Element":
        # internal fast path: inputs already validated
        items = tuple(sorted(((e, c) for e, c in mapping.items() if c),
                             key=lambda item: item[0]))
        return cls(shape, box, items, exact)

    @classmethod
    def zero(cls, shape: ModuleShape, box: TruncationBox) -> "Element":
        return cls._collect(shape, box, {}, True)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponents: Exponents):
        """Coefficient at an exponent vector, 0 when the monomial is absent."""
        target = tuple(exponents)
        for e, c in self.terms:
            if e == target:
                return c
        return 0

    def term_map(self) -> dict[Exponents, object]:
        return dict(self.terms)

    def scale(self, scalar) -> "Element":
        if not scalar:
            return Element._collect(self.shape, self.box, {}, self.exact)
        return Element._collect(
            self.shape, self.box, {e: scalar * c for e, c in self.terms}, self.exact
        )

    def __add__(self, other: "Element") -> "Element":
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other: "Element") -> "Element":
        return linear_combine([(1, self), (-1, other)])

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def __repr__(self):
        body = " + ".join(f"{c}*x^{list(e)}" for e, c in self.terms) or "0"
        flag = "" if self.exact else ", inexact"
        return f"<Element {body}{flag}>"


def monomial(shape: ModuleShape, box: TruncationBox, exponents: Exponents,
             coefficient=1) -> Element:
    return Element.from_terms(shape, box, {tuple(exponents): coefficient})


def linear_combine(pairs: Iterable[tuple[object, Element]]) -> Element:
    """Sum of scalar multiples of elements sharing one shape and box.

    The result is exact only when every input is exact.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty linear combination (shape unknown)")
    shape = pairs[0][1].shape
    box = pairs[0][1].box
    acc: dict[Exponents, object] = {}
    exact = True
    for scalar, elem in pairs:
        if elem.shape != shape or elem.box != box:
            raise ValueError("linear_combine requires a common shape and box")
        exact = exact and elem.exact
        if not scalar:
            continue
        for e, c in elem.terms:
            v = scalar * c
            if e in acc:
                acc[e] = acc[e] + v
            else:
                acc[e] = v
    return Element._collect(shape, box, acc, exact)


def ring_act(r: Element, m: Element) -> Element:
    """Act by a polynomial r (all exponents >= 0) on a shaped element m.

    Monomials multiply by adding exponent vectors.  On an inverse-role
    coordinate a positive result annihilates the term (contraction); that is
    exact module arithmetic.  On a series-role coordinate a result beyond the
    box is discarded and clears the ``exact`` flag of the output.

    The result lives in m's shape and box.  r may be declared over any
    shape; what matters is that its stored exponents are nonnegative.
    """
    if r.shape.nvars != m.shape.nvars:
        raise ValueError("operands disagree on the variable count")
    for e, _ in r.terms:
        if any(x < 0 for x in e):
            raise ValueError(f"ring element has a negative exponent: {e}")
    roles = m.shape.roles
    bounds = m.box.bounds
    acc: dict[Exponents, object] = {}
    dropped = False
    for re_, rc in r.terms:
        for me, mc in m.terms:
            coeff = rc * mc
            if not coeff:
                continue
            out = tuple(a + b for a, b in zip(re_, me))
            killed = False
            for j, ej in enumerate(out):
                if roles[j] == INVERSE:
                    if ej > 0:
                        killed = True
                        break
                elif ej > bounds[j]:
                    killed = True
                    dropped = True
                    break
            if killed:
                continue
            if out in acc:
                acc[out] = acc[out] + coeff
            else:
                acc[out] = coeff
    exact = r.exact and m.exact and not dropped
    return Element._collect(m.shape, m.box, acc, exact)


def derivation_act(j: int, m: Element) -> Element:
    """Formal partial derivative along variable j.

    On a series direction the usual rule applies: c*X^e maps to (c*e)*X^(e-1)
    and constants die.  On an inverse direction the labels carry the socle at
    exponent zero, so the monomial labelled e is the Laurent monomial of
    degree e - 1 in the standard quotient presentation of inverse
    polynomials; differentiating there multiplies by e - 1 and lowers the
    label.  With this rule multiplication and differentiation satisfy the
    Weyl relation on every direction, and the compatibility law
    d(r.m) = d(r).m + r.d(m) holds wherever no truncation loss occurs.

    A term pushed below the inverse-side wall of the box is discarded and
    clears ``exact`` (unless its derived coefficient already vanished, as can
    happen over a prime field).
    """
    if not 0 <= j < m.shape.nvars:
        raise ValueError(f"variable index out of range: {j}")
    role = m.shape.role(j)
    bound = m.box.bound(j)
    acc: dict[Exponents, object] = {}
    dropped = False
    for e, c in m.terms:
        factor = e[j] if role == SERIES else e[j] - 1
        coeff = factor * c
        if not coeff:
            continue
        out = e[:j] + (e[j] - 1,) + e[j + 1:]
        if role == INVERSE and out[j] < -bound:
            dropped = True
            continue
        if out in acc:
            acc[out] = acc[out] + coeff
        else:
            acc[out] = coeff
    return Element._collect(m.shape, m.box, acc, m.exact and not dropped)


def quotient_by_series_var(j: int, m: Element) -> Element:
    """Quotient by the submodule generated by a series variable.

    Keeps the terms with exponent zero at position j and deletes that
    coordinate, producing an element over one variable fewer.  Only a
    series-role coordinate may be divided out.
    """
    if not 0 <= j < m.shape.nvars:
        raise ValueError(f"variable index out of range: {j}")
    if m.shape.role(j) != SERIES:
        raise ValueError(f"variable {j} has inverse role; cannot form this quotient")
    shape = m.shape.drop(j)
    box = m.box.drop(j)
    acc = {
        e[:j] + e[j + 1:]: c
        for e, c in m.terms
        if e[j] == 0
    }
    return Element._collect(shape, box, acc, m.exact)
