"""Degreewise covering-complex cohomology and its predicted support."""

from itertools import product

import pytest

from cohdual.cech import (
    CohomologyTable,
    build_degree_piece,
    cech_dims_at_degree,
    equivariance_mismatches,
    identify_basis,
    realization_support,
    verify_realization,
)
from conftest import oracle_rank


def test_dims_frozen_values():
    assert cech_dims_at_degree(2, 1, (0, 0)) == (0, 0)
    assert cech_dims_at_degree(2, 1, (-1, 0)) == (0, 1)
    assert cech_dims_at_degree(2, 1, (-2, 3)) == (0, 1)
    assert cech_dims_at_degree(2, 1, (-1, -1)) == (0, 0)
    assert cech_dims_at_degree(3, 2, (-1, -1, 0)) == (0, 0, 1)
    assert cech_dims_at_degree(3, 2, (-1, 0, 0)) == (0, 0, 0)
    assert cech_dims_at_degree(1, 1, (-1,)) == (0, 1)
    assert cech_dims_at_degree(1, 1, (0,)) == (0, 0)


def test_memoized_dims_agree_with_direct_pieces():
    for a in product(range(-2, 3), repeat=2):
        piece = build_degree_piece(2, 1, a)
        assert piece.cohomology() == cech_dims_at_degree(2, 1, a)
    for a in product(range(-2, 2), repeat=3):
        piece = build_degree_piece(3, 2, a)
        assert piece.cohomology() == cech_dims_at_degree(3, 2, a)


def test_cohomology_matches_fraction_elimination():
    """Fraction-free ranks inside cohomology() against plain row reduction.

    Recomputes every dimension as dim - rank(incoming) - rank(outgoing)
    with an independent Fraction-based rank.
    """
    for n, i in ((1, 1), (2, 1), (2, 2), (3, 2), (3, 3)):
        for a in product(range(-2, 3), repeat=n):
            piece = build_degree_piece(n, i, a)
            ranks = [oracle_rank(matrix) if matrix else 0
                     for matrix in piece.boundaries]
            dims = []
            for l in range(i + 1):
                below = ranks[l - 1] if l > 0 else 0
                above = ranks[l] if l < i else 0
                dims.append(piece.dims[l] - below - above)
            assert tuple(dims) == piece.cohomology()


def test_support_predicate():
    assert realization_support(2, 1, (-1, 0))
    assert realization_support(2, 1, (-5, 2))
    assert not realization_support(2, 1, (0, 0))
    assert not realization_support(2, 1, (-1, -1))
    assert realization_support(3, 2, (-1, -2, 4))
    assert not realization_support(3, 2, (-1, 0, 4))


def test_verify_realization_two_vars():
    report = verify_realization(2, 1, 3)
    assert report.passed
    assert not report.mismatches
    assert len(report.table.entries) == 49
    assert report.nonzero_count == 12


def test_verify_realization_one_var():
    report = verify_realization(1, 1, 2)
    assert report.passed
    assert report.nonzero_count == 2
    assert report.table.dims_at((-1,)) == (0, 1)


def test_verify_realization_window_validation():
    with pytest.raises(ValueError):
        verify_realization(2, 1, 0)


def test_table_lookup_misses():
    table = CohomologyTable(1, 1, 1, (((-1,), (0, 1)),))
    assert table.dims_at((-1,)) == (0, 1)
    with pytest.raises(KeyError):
        table.dims_at((5,))


def test_identify_basis_label_shift():
    """Slice labels shift the first block of coordinates by one unit."""
    e = identify_basis(2, 1, (-1, 0))
    assert e.shape.roles == ("inverse", "series")
    assert e.term_map() == {(0, 0): 1}
    e = identify_basis(2, 1, (-3, 2))
    assert e.term_map() == {(-2, 2): 1}
    e = identify_basis(3, 2, (-1, -2, 1))
    assert e.term_map() == {(0, -1, 1): 1}


def test_identify_basis_needs_rank_one_slice():
    with pytest.raises(ValueError):
        identify_basis(2, 1, (0, 0))


def test_shift_action_matches_slices():
    for n in (1, 2):
        for i in range(1, n + 1):
            assert equivariance_mismatches(n, i, 2) == []
