"""Matlis pairing, torsion functors, and the regular-sequence check.

The dual of a shaped module flips every role.  Pairing an element of the
dual shape with an element of the original shape multiplies them into the
all-inverse module (the injective hull): monomial exponents add, and any
result with a positive coordinate dies by contraction.  Evaluating at the
socle (the coefficient at exponent zero) turns the pairing into a scalar,
and on box-monomial bases that scalar pairing is a permutation matrix,
which :func:`pairing_perfection_check` verifies directly.

The remaining helpers answer support questions (is an element killed by a
power of a coordinate ideal; is the whole shape torsion for it) and verify
that the first i variables act as a regular sequence on the dual shape,
with the final quotient landing back in an all-inverse module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .algebra import (
    INVERSE,
    SERIES,
    Element,
    ModuleShape,
    TruncationBox,
    monomial,
    ring_act,
)
from .linalg import sparse_kernel_dimension

GAMMA_FULL = "full"
GAMMA_ZERO = "zero"


def dual_shape(shape: ModuleShape) -> ModuleShape:
    """Flip every role; an involution."""
    return shape.dual()


def matlis_pair(d: Element, m: Element,
                out_box: TruncationBox | None = None) -> Element:
    """Multiply an element of the dual shape against one of the shape.

    Exponent vectors add; a term with any positive coordinate is annihilated
    (exactly).  The result is all-inverse.  By default the output box is the
    componentwise sum of the input boxes, which holds every surviving
    product, so exact inputs give an exact output; a narrower ``out_box``
    may drop terms and then clears the flag.
    """
    if d.shape.nvars != m.shape.nvars or d.shape != m.shape.dual():
        raise ValueError("pairing requires mutually dual shapes")
    n = d.shape.nvars
    box = out_box if out_box is not None else d.box + m.box
    if box.nvars != n:
        raise ValueError("output box has the wrong variable count")
    bounds = box.bounds
    acc: dict[tuple[int, ...], object] = {}
    dropped = False
    for de, dc in d.terms:
        for me, mc in m.terms:
            coeff = dc * mc
            if not coeff:
                continue
            out = tuple(a + b for a, b in zip(de, me))
            if any(e > 0 for e in out):
                continue
            if any(e < -b for e, b in zip(out, bounds)):
                dropped = True
                continue
            if out in acc:
                acc[out] = acc[out] + coeff
            else:
                acc[out] = coeff
    exact = d.exact and m.exact and not dropped
    return Element._collect(ModuleShape.inverse_shape(n), box, acc, exact)


def socle_functional(d: Element, m: Element):
    """Scalar pairing: the coefficient of the pairing at exponent zero."""
    paired = matlis_pair(d, m)
    return paired.coefficient((0,) * d.shape.nvars)


def _box_monomial_exponents(shape: ModuleShape, box: TruncationBox):
    ranges = []
    for role, bound in zip(shape.roles, box.bounds):
        if role == SERIES:
            ranges.append(range(0, bound + 1))
        else:
            ranges.append(range(-bound, 1))
    return product(*ranges)


@dataclass
class PairingReport:
    """Outcome of pairing the two box-monomial bases against each other."""

    n: int
    i: int
    bound: int
    records: tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...] | None], ...]
    permutation: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    passed: bool


def pairing_perfection_check(n: int, i: int, bound: int) -> PairingReport:
    """Pair every dual-shape box monomial with every shape box monomial.

    The socle pairing must be 1 exactly when the exponents sum to zero and 0
    otherwise, i.e. the matrix of the pairing is a permutation matrix.
    """
    shape = ModuleShape.cohomology_shape(n, i)
    dual = shape.dual()
    box = TruncationBox.uniform(n, bound)
    zero = (0,) * n
    records = []
    permutation = []
    passed = True
    for de in _box_monomial_exponents(dual, box):
        d = monomial(dual, box, de)
        for me in _box_monomial_exponents(shape, box):
            m = monomial(shape, box, me)
            paired = matlis_pair(d, m)
            if paired.is_zero:
                records.append((de, me, None))
                product_exp = None
            else:
                (product_exp, coeff), = paired.terms
                records.append((de, me, product_exp))
                if coeff != 1:
                    passed = False
            value = socle_functional(d, m)
            matched = tuple(a + b for a, b in zip(de, me)) == zero
            if matched:
                permutation.append((de, me))
            if bool(value) != matched or (matched and value != 1):
                passed = False
    return PairingReport(n, i, bound, tuple(records), tuple(permutation), passed)


def tensor_surjectivity_witness(target: tuple[int, ...], n: int, i: int
                                ) -> tuple[Element, Element]:
    """Split an all-inverse monomial into a (shape, dual-shape) monomial pair.

    The first i coordinates of the target go to the shape factor and the
    rest to the dual factor; pairing the two returns exactly the target
    monomial, which exhibits the pairing map as surjective on monomials.
    Returns ``(m, d)`` with m in the shaped module and d in its dual.
    """
    target = tuple(target)
    if len(target) != n:
        raise ValueError(f"target {target} has wrong length for n={n}")
    if any(e > 0 for e in target):
        raise ValueError(f"target {target} is not an all-inverse monomial")
    shape = ModuleShape.cohomology_shape(n, i)
    m_exp = tuple(target[j] if j < i else 0 for j in range(n))
    d_exp = tuple(0 if j < i else target[j] for j in range(n))
    box = TruncationBox(tuple(abs(e) for e in target))
    m = monomial(shape, box, m_exp)
    d = monomial(shape.dual(), box, d_exp)
    return m, d


def is_torsion(e: Element, gens: tuple[int, ...], vmax: int | None = None) -> bool:
    """Is some power of the ideal generated by the listed variables zero on e?

    Searches v = 1..vmax and asks whether every degree-v monomial in the
    generators annihilates e.  Annihilation must be certified: the acted
    element has to be empty *and* exact, since an empty-but-inexact result
    only means the information left the box.  With vmax at least the largest
    box bound plus one the search is conclusive for shaped modules.
    """
    gens = tuple(sorted(set(gens)))
    if not gens:
        raise ValueError("need at least one generator index")
    n = e.shape.nvars
    if any(not 0 <= g < n for g in gens):
        raise ValueError(f"generator index out of range: {gens}")
    if e.is_zero:
        return True
    if vmax is None:
        vmax = max(e.box.bounds, default=0) + 1
    rshape = ModuleShape.series_shape(n)
    for v in range(1, vmax + 1):
        rbox = TruncationBox.uniform(n, v)
        all_kill = True
        for combo in combinations_with_replacement(gens, v):
            exps = [0] * n
            for g in combo:
                exps[g] += 1
            acted = ring_act(monomial(rshape, rbox, tuple(exps)), e)
            if not (acted.is_zero and acted.exact):
                all_kill = False
                break
        if all_kill:
            return True
    return False


def gamma_of_shape(shape: ModuleShape, gens: tuple[int, ...]) -> str:
    """Torsion functor of a coordinate ideal on a whole shaped module.

    Every monomial is killed by a high power of an inverse-role variable
    and by no power of a series-role one, so the answer is all-or-nothing:
    ``"full"`` when every generator has inverse role (for the empty ideal
    the functor is the identity, also full), else ``"zero"``.
    """
    gens = tuple(sorted(set(gens)))
    if any(not 0 <= g < shape.nvars for g in gens):
        raise ValueError(f"generator index out of range: {gens}")
    if all(shape.role(g) == INVERSE for g in gens):
        return GAMMA_FULL
    return GAMMA_ZERO


@dataclass
class RegularityStep:
    variable: int
    domain_dim: int
    kernel_dim: int


@dataclass
class RegularityReport:
    n: int
    i: int
    bound: int
    steps: tuple[RegularityStep, ...]
    final_roles: tuple[str, ...]
    final_dim: int
    final_nonzero: bool
    passed: bool


def regular_on_dual_check(n: int, i: int, bound: int) -> RegularityReport:
    """Check the first i variables form a regular sequence on the dual shape.

    Step j acts by the j-th variable on the truncated quotient of the dual
    shape by the previous variables and certifies injectivity as a vanishing
    kernel, computed by exact sparse elimination on the sub-box where the
    shift loses no information (series exponent at most bound - 1).  After i
    steps the quotient must be the all-inverse shape on the remaining
    variables, nonzero because it contains the socle monomial.
    """
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    shape = ModuleShape.cohomology_shape(n, i).dual()
    box = TruncationBox.uniform(n, bound)
    steps = []
    ok = True
    for step in range(i):
        nvars = shape.nvars
        targets = list(_box_monomial_exponents(shape, box))
        target_index = {t: k for k, t in enumerate(targets)}
        xj = monomial(ModuleShape.series_shape(nvars),
                      TruncationBox.uniform(nvars, 1),
                      (1,) + (0,) * (nvars - 1))
        columns = []
        domain = 0
        for exps in targets:
            if exps[0] > bound - 1:
                continue
            domain += 1
            acted = ring_act(xj, monomial(shape, box, exps))
            column = {target_index[e]: Fraction(c) if isinstance(c, int) else c
                      for e, c in acted.terms}
            columns.append(column)
        kernel = sparse_kernel_dimension(columns)
        steps.append(RegularityStep(step, domain, kernel))
        if kernel != 0:
            ok = False
        # pass to the quotient by the variable just tested
        shape = shape.drop(0)
        box = box.drop(0)
    final_roles = shape.roles
    final_dim = 1
    for b in box.bounds:
        final_dim *= b + 1
    final_nonzero = final_dim > 0
    if any(r != INVERSE for r in final_roles) or not final_nonzero:
        ok = False
    return RegularityReport(n, i, bound, tuple(steps), final_roles,
                            final_dim, final_nonzero, ok)
