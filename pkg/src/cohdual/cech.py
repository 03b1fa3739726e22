"""Multigraded cohomology of the standard localization complex.

For the ideal generated by the first i of n variables, the complex carries,
in homological position l, one localization of the power-series ring for
every size-l subset S of those variables.  Fixing a multidegree a cuts every
localization down to a vector space of dimension 0 or 1: the piece for S is
nonzero exactly when a_j >= 0 for every variable j outside S (variables
beyond position i are never inverted, so their coordinates must always be
nonnegative).  The alternating-sign face maps become explicit 0/±1 integer
matrices and cohomology is exact linear algebra.

Ranks are taken by fraction-free integer elimination; for these inclusion
complexes the outcome does not depend on the coefficient field, so the
dimensions reported here are valid over the rationals and over every prime
field alike.

The expected answer, verified by :func:`verify_realization` over a finite
window of multidegrees, is concentrated in position i, with a dimension-one
piece exactly at the degrees whose first i coordinates are all <= -1 and
whose remaining coordinates are all >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .algebra import Element, ModuleShape, TruncationBox, monomial, ring_act
from .linalg import integer_rank


@dataclass(frozen=True)
class CechDegreePiece:
    """One multidegree slice of the complex: dimensions and face matrices.

    ``boundaries[l]`` maps position l to position l + 1; rows are indexed by
    the alive size-(l+1) subsets, columns by the alive size-l subsets, both
    in lexicographic order.
    """

    n: int
    i: int
    degree: tuple[int, ...]
    dims: tuple[int, ...]
    boundaries: tuple[tuple[tuple[int, ...], ...], ...]

    def cohomology(self) -> tuple[int, ...]:
        ranks = [integer_rank([list(row) for row in mat]) for mat in self.boundaries]
        out = []
        for l in range(self.i + 1):
            below = ranks[l - 1] if l > 0 else 0
            above = ranks[l] if l < self.i else 0
            out.append(self.dims[l] - below - above)
        return tuple(out)


def build_degree_piece(n: int, i: int, a: tuple[int, ...]) -> CechDegreePiece:
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    a = tuple(a)
    if len(a) != n:
        raise ValueError(f"degree {a} has wrong length for n={n}")
    tail_ok = all(a[j] >= 0 for j in range(i, n))
    alive: list[list[tuple[int, ...]]] = []
    for l in range(i + 1):
        level = []
        if tail_ok:
            for subset in combinations(range(i), l):
                inside = set(subset)
                if all(a[j] >= 0 for j in range(i) if j not in inside):
                    level.append(subset)
        alive.append(level)
    boundaries = []
    for l in range(i):
        sources = alive[l]
        targets = alive[l + 1]
        index = {s: k for k, s in enumerate(targets)}
        matrix = [[0] * len(sources) for _ in targets]
        for c, subset in enumerate(sources):
            for t in range(i):
                if t in subset:
                    continue
                bigger = tuple(sorted(subset + (t,)))
                row = index.get(bigger)
                if row is None:
                    continue
                sign = (-1) ** bigger.index(t)
                matrix[row][c] = sign
        boundaries.append(tuple(tuple(row) for row in matrix))
    dims = tuple(len(level) for level in alive)
    return CechDegreePiece(n, i, a, dims, tuple(boundaries))


@lru_cache(maxsize=None)
def _dims_by_signs(i: int, head_negative: tuple[bool, ...], tail_ok: bool) -> tuple[int, ...]:
    # dimensions depend only on which of the first i coordinates are negative
    # and on whether some later coordinate is negative
    n = i + 1
    head = tuple(-1 if neg else 0 for neg in head_negative)
    rep = head + ((0,) if tail_ok else (-1,))
    return build_degree_piece(n, i, rep).cohomology()


def cech_dims_at_degree(n: int, i: int, a: tuple[int, ...]) -> tuple[int, ...]:
    """Cohomology dimensions (positions 0..i) of the slice at multidegree a."""
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    a = tuple(a)
    if len(a) != n:
        raise ValueError(f"degree {a} has wrong length for n={n}")
    head = tuple(a[j] < 0 for j in range(i))
    tail_ok = all(a[j] >= 0 for j in range(i, n))
    return _dims_by_signs(i, head, tail_ok)


def realization_support(n: int, i: int, a: tuple[int, ...]) -> bool:
    """Predicted support: top cohomology is one-dimensional exactly here."""
    return all(a[j] <= -1 for j in range(i)) and all(a[j] >= 0 for j in range(i, n))


@dataclass
class CohomologyTable:
    """Per-multidegree dimensions over a finite window, sorted by degree."""

    n: int
    i: int
    window: int
    entries: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def dims_at(self, a: tuple[int, ...]) -> tuple[int, ...]:
        target = tuple(a)
        for degree, dims in self.entries:
            if degree == target:
                return dims
        raise KeyError(f"degree {target} not in the table window")


@dataclass
class RealizationReport:
    table: CohomologyTable
    passed: bool
    nonzero_count: int
    mismatches: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


def verify_realization(n: int, i: int, window: int) -> RealizationReport:
    """Sweep the window [-window, window]^n and compare against the prediction.

    Passes when every slice is zero away from position i and the position-i
    dimension is 1 exactly on the predicted support, 0 elsewhere.
    """
    if window < 1:
        raise ValueError("window must cover both signs; need window >= 1")
    entries = []
    mismatches = []
    nonzero = 0
    for a in product(range(-window, window + 1), repeat=n):
        dims = cech_dims_at_degree(n, i, a)
        entries.append((a, dims))
        expected = tuple(
            (1 if (l == i and realization_support(n, i, a)) else 0)
            for l in range(i + 1)
        )
        if dims != expected:
            mismatches.append((a, dims))
        if dims[i] == 1:
            nonzero += 1
    table = CohomologyTable(n, i, window, tuple(entries))
    return RealizationReport(table, not mismatches, nonzero, tuple(mismatches))


def identify_basis(n: int, i: int, a: tuple[int, ...],
                   box: TruncationBox | None = None) -> Element:
    """The basis monomial of the rank-one slice at degree a, as an Element.

    The identification shifts the first i coordinates by one unit (the
    inverse-polynomial labels carry the socle at zero while the complex
    itself is graded one step lower) and keeps the remaining coordinates.
    """
    a = tuple(a)
    dims = cech_dims_at_degree(n, i, a)
    if dims[i] != 1:
        raise ValueError(f"degree {a} carries no top cohomology")
    labels = tuple(a[j] + 1 if j < i else a[j] for j in range(n))
    if box is None:
        box = TruncationBox(tuple(abs(v) for v in labels))
    shape = ModuleShape.cohomology_shape(n, i)
    return monomial(shape, box, labels)


def equivariance_mismatches(n: int, i: int, window: int) -> list[tuple]:
    """Check that variable action commutes with the basis identification.

    For every in-window degree a with a rank-one top slice and every
    variable j, multiplying the identified basis monomial by X_j must give
    the basis monomial of a + e_j when that slice is rank one, and zero when
    it is not (the contraction kill).  Returns the offending triples.
    """
    bad = []
    box = TruncationBox.uniform(n, window + 2)
    shape = ModuleShape.series_shape(n)
    for a in product(range(-window, window + 1), repeat=n):
        if cech_dims_at_degree(n, i, a)[i] != 1:
            continue
        base = identify_basis(n, i, a, box)
        for j in range(n):
            shifted = tuple(a[k] + (1 if k == j else 0) for k in range(n))
            expect_nonzero = cech_dims_at_degree(n, i, shifted)[i] == 1
            xj = monomial(shape, TruncationBox.uniform(n, 1),
                          tuple(1 if k == j else 0 for k in range(n)))
            acted = ring_act(xj, base)
            if expect_nonzero:
                if acted != identify_basis(n, i, shifted, box):
                    bad.append((a, j, "expected the shifted basis monomial"))
            elif not acted.is_zero:
                bad.append((a, j, "expected the kill rule to apply"))
    return bad
