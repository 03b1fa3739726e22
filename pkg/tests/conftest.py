"""Shared helpers for the test suite.

The oracle functions here are deliberately independent reimplementations,
written the slow and obvious way on plain dicts and Fractions, so the
package's sparse paths can be checked against something with no shared
code.
"""

from fractions import Fraction

from cohdual.algebra import Element, ModuleShape, SERIES, TruncationBox


def oracle_product(poly_terms, elem_terms, roles, bounds):
    """Multiply a polynomial into a shaped element term by term.

    Returns (terms, exact).  Inverse coordinates that climb past zero are
    annihilated without loss; exponents escaping the box on the far side
    are dropped and recorded as a loss of exactness.
    """
    out = {}
    exact = True
    for pe, pc in poly_terms.items():
        for me, mc in elem_terms.items():
            exps = tuple(a + b for a, b in zip(pe, me))
            keep = True
            for role, bound, e in zip(roles, bounds, exps):
                if role == SERIES:
                    if e > bound:
                        keep = False
                        exact = False
                        break
                else:
                    if e > 0:
                        keep = False
                        break
                    if e < -bound:
                        keep = False
                        exact = False
                        break
            if keep:
                out[exps] = out.get(exps, 0) + pc * mc
    return {e: c for e, c in out.items() if c}, exact


def oracle_min_profile(terms, lo, hi):
    """Per-X-degree minimum of the Y-exponent, None where nothing survives."""
    entries = []
    for l in range(lo, hi + 1):
        ys = [e[1] for e in terms if e[0] == l]
        entries.append(min(ys) if ys else None)
    return tuple(entries)


def oracle_rank(rows):
    """Row-reduce over Fractions and count the pivots."""
    matrix = [[Fraction(x) for x in row] for row in rows]
    if not matrix:
        return 0
    rank = 0
    row = 0
    for col in range(len(matrix[0])):
        pivot = next((r for r in range(row, len(matrix)) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
        lead = matrix[row][col]
        matrix[row] = [x / lead for x in matrix[row]]
        for r in range(len(matrix)):
            if r != row and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b
                             for a, b in zip(matrix[r], matrix[row])]
        row += 1
        rank += 1
        if row == len(matrix):
            break
    return rank


def random_sample(rng, shape: ModuleShape, box: TruncationBox,
                  margin: int = 0, max_terms: int = 4) -> Element:
    """A small random element staying margin steps inside the box."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = []
        for j in range(shape.nvars):
            reach = max(box.bound(j) - margin, 0)
            e = rng.randint(0, reach)
            exps.append(e if shape.role(j) == SERIES else -e)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + rng.choice((1, -1, 2, -2))
    return Element.from_terms(shape, box, terms)
