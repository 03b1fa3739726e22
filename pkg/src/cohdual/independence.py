"""Minimal-exponent profiles and linear-independence certificates.

Everything here lives over two variables, with the dual-module shape: X is
the series direction, Y the inverse direction.  The family under study is

    d_power = sum over l >= 0 of Y^(-l^power) * X^l,

truncated at a chosen X-degree.  The gap between consecutive Y-exponents
grows at a rate that separates the different powers, and that separation
survives multiplication by nonzero polynomials.  The certificate below
makes this quantitative for a finite truncation window:

* ``delta`` records, for each X-degree l, the minimal Y-exponent of the
  coefficient (or the fact that the coefficient vanishes);
* ``decompose_r`` splits a polynomial r into X^(a+1) * h + X^a * g with g a
  nonzero polynomial in Y alone and b the Y-order of g;
* for a combination s = sum of r_j . d_j with top nonzero index m0, once l
  clears an explicit dominance threshold every competing contribution to
  the X^l coefficient sits strictly above b - (l-a)^m0, so the profile of s
  on the tail is forced to be exactly that polynomial in l.  The threshold
  accounts for the h-part of the top coefficient, for every lower-index
  d_j, and for the contraction kill on positive Y-exponents.

A verified tail plus the pigeonhole on distinct growth rates is what the
equivalence search over shifted windows (:func:`shift_equiv_window`)
consumes: profiles of distinct powers admit no shift witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    INVERSE,
    SERIES,
    Element,
    ModuleShape,
    TruncationBox,
    linear_combine,
    monomial,
    ring_act,
)

D_SHAPE = ModuleShape((SERIES, INVERSE))


class InexactElementError(ValueError):
    """Raised when an operation needs an exact element but got a lossy one."""


class DegenerateInputError(ValueError):
    """Raised when every coefficient polynomial of a combination is zero."""


class InconclusiveWindowError(Exception):
    """The truncation window ends before the dominance tail can be verified.

    ``required_lmax`` estimates the window that would suffice, or is None
    when no finite window can help (the dominance inequality fails for
    every l, as happens for a top index of 1 with a large Y-order).
    """

    def __init__(self, required_lmax: int | None):
        self.required_lmax = required_lmax
        if required_lmax is None:
            msg = "dominance never takes hold for this combination"
        else:
            msg = f"window too short; an X-window of {required_lmax} would do"
        super().__init__(msg)


class CertificateError(RuntimeError):
    """Internal inconsistency: the verified tail contradicts the analysis."""


@dataclass(frozen=True)
class DeltaSequence:
    """Minimal Y-exponent per X-degree over a window of degrees.

    ``entries[k]`` belongs to X-degree ``start + k`` and is either an
    integer (the minimal exponent among the surviving terms) or None when
    the coefficient at that degree vanishes.  The two cases are distinct:
    a minimal exponent of 0 is a nonzero coefficient touching the socle.
    """

    start: int
    entries: tuple[int | None, ...]

    @property
    def end(self) -> int:
        return self.start + len(self.entries) - 1

    def value(self, l: int) -> int | None:
        if not self.start <= l <= self.end:
            raise IndexError(f"degree {l} outside window [{self.start}, {self.end}]")
        return self.entries[l - self.start]


@dataclass(frozen=True)
class ShiftWitness:
    """Certifies first[shift_left + l] = second[shift_right + l] + offset for l >= 1."""

    shift_left: int
    shift_right: int
    offset: int


@dataclass(frozen=True)
class ShiftSearch:
    """Outcome of a bounded search for a shift witness.

    ``status`` is "witness" (with the lexicographically least witness),
    "none" (every candidate pair had enough overlap and all failed), or
    "inconclusive" (some candidate pairs overlapped in fewer than 3 points
    and could not be tested).
    """

    status: str
    witness: ShiftWitness | None = None


@dataclass(frozen=True)
class RDecomposition:
    """r = X^(a+1) * h + X^a * g with g nonzero in Y alone, b = ord_Y(g)."""

    a: int
    h: Element
    g: Element
    b: int


@dataclass(frozen=True)
class IndependenceCertificate:
    """A verified dominance tail for one combination of the d-family.

    Records the top nonzero index m0, the shifts (a, b) read off the top
    coefficient, the window and tail actually verified, the full profile,
    the decomposition they came from, and the nonzero confirmation.
    """

    m0: int
    a: int
    b: int
    lmax: int
    tail_start: int
    delta: DeltaSequence
    decomposition: RDecomposition
    nonzero: bool
    box: TruncationBox


def make_d(power: int, lmax: int, box: TruncationBox | None = None) -> Element:
    """Truncation of sum_l Y^(-l^power) X^l at X-degree lmax.

    The default box is exactly wide enough; an explicit box must contain
    every term (X-bound at least lmax, Y-bound at least lmax^power).
    """
    if power < 1:
        raise ValueError(f"power must be a positive integer, got {power}")
    if lmax < 0:
        raise ValueError(f"lmax must be nonnegative, got {lmax}")
    if box is None:
        box = TruncationBox((lmax, lmax ** power))
    if box.bounds[0] < lmax or box.bounds[1] < lmax ** power:
        raise ValueError(
            f"box {box.bounds} too small for power={power}, lmax={lmax}")
    terms = {(l, -(l ** power)): 1 for l in range(lmax + 1)}
    return Element.from_terms(D_SHAPE, box, terms)


def delta(d: Element, window: tuple[int, int] | None = None) -> DeltaSequence:
    """Minimal Y-exponent profile of a dual-shape element over two variables.

    Within the window of X-degrees, each entry is the least Y-exponent of
    the X^l coefficient, or None when that coefficient is empty.  The input
    must be exact: on a lossy element the true minimum may have left the
    box, and the profile would silently lie.
    """
    if d.shape != D_SHAPE:
        raise ValueError("profile requires the two-variable dual shape (series, inverse)")
    if not d.exact:
        raise InexactElementError("cannot read a minimal-exponent profile off a lossy element")
    lo, hi = window if window is not None else (0, d.box.bounds[0])
    if not 0 <= lo <= hi <= d.box.bounds[0]:
        raise ValueError(f"window [{lo}, {hi}] outside the element's X-range")
    mins: dict[int, int] = {}
    for (x, y), _ in d.terms:
        if x in mins:
            if y < mins[x]:
                mins[x] = y
        else:
            mins[x] = y
    return DeltaSequence(lo, tuple(mins.get(l) for l in range(lo, hi + 1)))


def decompose_r(r: Element) -> RDecomposition:
    """Split a nonzero polynomial along its X-order.

    With a the least X-exponent present, g collects the X^a layer as a
    polynomial in Y alone, b is the Y-order of g, and h is what remains
    after dividing the higher layers by X^(a+1).
    """
    if r.shape != ModuleShape.series_shape(2):
        raise ValueError("decomposition expects a polynomial over two series variables")
    if r.is_zero:
        raise ValueError("cannot decompose the zero polynomial")
    if not r.exact:
        raise InexactElementError("refusing to decompose a lossy polynomial")
    a = min(e[0] for e, _ in r.terms)
    g_terms = {}
    h_terms = {}
    for (x, y), c in r.terms:
        if x == a:
            g_terms[(0, y)] = c
        else:
            h_terms[(x - a - 1, y)] = c
    g = Element.from_terms(r.shape, r.box, g_terms)
    h = Element.from_terms(r.shape, r.box, h_terms)
    b = min(e[1] for e, _ in g.terms)
    return RDecomposition(a, h, g, b)


def fit_shift_form(seq: DeltaSequence, power: int, tail_start: int
                   ) -> tuple[int, int] | None:
    """Fit seq(l) = b - (l - a)^power on the tail, or report that none fits.

    Searches a in [0, tail_start] with b >= 0 derived from the first tail
    entry, checking every window point from tail_start on.  Returns the
    lexicographically least fitting pair; for power 1 only a + b is
    identifiable, so ties are real there and the least pair is a
    convention.  Any vanishing coefficient in the tail rules out a fit.
    """
    if power < 1:
        raise ValueError(f"power must be a positive integer, got {power}")
    if tail_start < seq.start:
        raise ValueError("tail_start precedes the window")
    points = [(l, seq.value(l)) for l in range(tail_start, seq.end + 1)]
    if len(points) < 3:
        raise ValueError("window must extend at least 3 points past tail_start")
    if any(v is None for _, v in points):
        return None
    l0, v0 = points[0]
    fits = []
    for a in range(0, tail_start + 1):
        b = v0 + (l0 - a) ** power
        if b < 0:
            continue
        if all(v == b - (l - a) ** power for l, v in points):
            fits.append((a, b))
    return min(fits) if fits else None


def shift_equiv_window(s1: DeltaSequence, s2: DeltaSequence, search_bound: int
                       ) -> ShiftSearch:
    """Search for shifts aligning two profiles up to a constant offset.

    Tries every pair of start shifts up to the bound; a pair is testable
    when the shifted windows overlap in at least 3 compared points
    (comparison starts one past the shifts).  Vanishing coefficients must
    line up and impose no constraint on the offset; if the whole overlap
    vanishes the offset defaults to 0.  Returns the first (hence
    lexicographically least) witness, or "none" when every pair was
    testable and failed, or "inconclusive" when some untestable pair
    remains.
    """
    if search_bound < 0:
        raise ValueError("search bound must be nonnegative")
    saw_short = False
    for left in range(search_bound + 1):
        for right in range(search_bound + 1):
            l_lo = max(1, s1.start - left, s2.start - right)
            l_hi = min(s1.end - left, s2.end - right)
            if l_hi - l_lo + 1 < 3:
                saw_short = True
                continue
            offset = None
            ok = True
            for l in range(l_lo, l_hi + 1):
                av = s1.value(left + l)
                bv = s2.value(right + l)
                if (av is None) != (bv is None):
                    ok = False
                    break
                if av is None:
                    continue
                diff = av - bv
                if offset is None:
                    offset = diff
                elif offset != diff:
                    ok = False
                    break
            if ok:
                return ShiftSearch("witness",
                                   ShiftWitness(left, right, offset or 0))
    return ShiftSearch("inconclusive" if saw_short else "none")


def auto_truncation(r_list: tuple[Element, ...], lmax: int) -> TruncationBox:
    """Box wide enough that forming sum r_j . d_j loses nothing.

    X-bound lmax plus the largest X-degree among the coefficients; Y-bound
    lmax^m0 plus the largest Y-degree plus one, with m0 the top nonzero
    index (an empty or all-zero list gets the minimal box for m0 = 1).
    """
    m0 = 0
    max_x = 0
    max_y = 0
    for j, r in enumerate(r_list, start=1):
        if r.is_zero:
            continue
        m0 = j
        max_x = max(max_x, max(e[0] for e, _ in r.terms))
        max_y = max(max_y, max(e[1] for e, _ in r.terms))
    if m0 == 0:
        m0 = 1
    return TruncationBox((lmax + max_x, lmax ** m0 + max_y + 1))


def _min_y_degree(r: Element) -> int:
    return min(e[1] for e, _ in r.terms)


def independence_certificate(r_list: tuple[Element, ...], lmax: int
                             ) -> IndependenceCertificate:
    """Certify that sum r_j . d_j is nonzero with the forced tail profile.

    Builds the combination inside an automatically sized box (so it is
    exact), reads (a, b) off the top nonzero coefficient, computes the
    first degree from which every competing contribution is strictly
    dominated, and then verifies the profile equals b - (l-a)^m0 on the
    whole tail.  At least 3 tail points are demanded; fewer raises
    :class:`InconclusiveWindowError` with a window estimate.  All-zero
    input raises :class:`DegenerateInputError`.
    """
    r_list = tuple(r_list)
    if not r_list:
        raise DegenerateInputError("no coefficient polynomials given")
    for r in r_list:
        if r.shape != ModuleShape.series_shape(2):
            raise ValueError("coefficients must be polynomials over two series variables")
        if not r.exact:
            raise InexactElementError("coefficient polynomials must be exact")
    if all(r.is_zero for r in r_list):
        raise DegenerateInputError("every coefficient polynomial is zero")
    m0 = max(j for j, r in enumerate(r_list, start=1) if not r.is_zero)

    box = auto_truncation(r_list, lmax)
    parts = [
        (1, ring_act(r, make_d(j, lmax, box)))
        for j, r in enumerate(r_list, start=1)
        if not r.is_zero
    ]
    s = linear_combine(parts)
    if not s.exact:
        raise CertificateError("the automatically sized box lost terms")

    dec = decompose_r(r_list[m0 - 1])
    a, b = dec.a, dec.b
    h_margin = None if dec.h.is_zero else _min_y_degree(dec.h)
    lower = [
        (j, _min_y_degree(r))
        for j, r in enumerate(r_list[: m0 - 1], start=1)
        if not r.is_zero
    ]

    def dominated(l: int) -> bool:
        t = l - a
        if t < 1:
            return False
        lead = t ** m0
        if b - lead > 0:
            return False  # the witness term itself would be killed
        if h_margin is not None and not lead - (t - 1) ** m0 > b - h_margin:
            return False
        for j, margin in lower:
            if not lead - l ** j > b - margin:
                return False
        return True

    flags = [dominated(l) for l in range(a + 1, lmax + 1)]
    suffix = 0
    while suffix < len(flags) and flags[-1 - suffix]:
        suffix += 1
    if suffix < 3:
        required = None
        cap = max(4 * lmax, 1000) + a
        run = 0
        for l in range(a + 1, cap + 1):
            run = run + 1 if dominated(l) else 0
            if run == 3:
                required = l
                break
        raise InconclusiveWindowError(required)
    tail_start = lmax - suffix + 1

    profile = delta(s, (0, lmax))
    for l in range(tail_start, lmax + 1):
        expected = b - (l - a) ** m0
        if profile.value(l) != expected:
            raise CertificateError(
                f"profile at degree {l} is {profile.value(l)}, expected {expected}")
    if s.is_zero:
        raise CertificateError("combination vanished despite a verified tail")

    return IndependenceCertificate(
        m0=m0, a=a, b=b, lmax=lmax, tail_start=tail_start,
        delta=profile, decomposition=dec, nonzero=True, box=box,
    )
