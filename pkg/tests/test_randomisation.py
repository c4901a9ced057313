import pytest

from circuitrand.contrast import to_contrast_form
from circuitrand.design_catalog import digraph_design, factorial_two_level
from circuitrand.randomisation import (
    DimensionMismatchError,
    NotARandomisationVectorError,
    RandomisationSystem,
    enumerate_circuit_randomisations,
    is_decomposable,
    is_valid_randomisation,
    randomisation_vectors,
    refines,
    shared_blocks,
)
from circuitrand.unimodular import DirectedGraph

import oracles


def blocks1(system):
    """Blocks as 1-based tuples, for comparing against printed schemes."""
    return tuple(tuple(i + 1 for i in b) for b in system.blocks)


def system_from_1based(n, blocks):
    return RandomisationSystem.from_blocks(n, [[i - 1 for i in b] for b in blocks])


def test_system_validation():
    with pytest.raises(ValueError):
        RandomisationSystem.from_blocks(4, [[0, 1], [1, 2, 3]])  # overlap
    with pytest.raises(ValueError):
        RandomisationSystem.from_blocks(4, [[0], [1, 2, 3]])  # size-1 block
    with pytest.raises(ValueError):
        RandomisationSystem.from_blocks(4, [[0, 1]])  # does not cover
    with pytest.raises(ValueError):
        RandomisationSystem.from_blocks(3, [[0, 1, 4]])  # out of range


def test_from_blocks_canonicalises_order():
    s = RandomisationSystem.from_blocks(6, [[5, 4], [3, 2], [1, 0]])
    assert s.blocks == ((0, 1), (2, 3), (4, 5))
    t = RandomisationSystem.from_blocks(6, [[2, 3, 4, 5], [0, 1]])
    assert t.blocks == ((0, 1), (2, 3, 4, 5))


def test_shape_descending():
    s = RandomisationSystem.from_blocks(7, [[0, 1], [2, 3, 4], [5, 6]])
    assert s.shape == (3, 2, 2)


def test_indicator_matrix():
    s = RandomisationSystem.from_blocks(4, [[0, 3], [1, 2]])
    z = s.indicator_matrix()
    assert z.n_rows == 4 and z.n_cols == 2
    assert z.columns() == [(1, 0, 0, 1), (0, 1, 1, 0)]
    assert s.indicator(1) == (0, 1, 1, 0)


def test_is_valid_randomisation(model_2cubed):
    good = system_from_1based(8, [[1, 4, 6, 7], [2, 3, 5, 8]])
    bad = system_from_1based(8, [[1, 2, 3, 4], [5, 6, 7, 8]])
    assert is_valid_randomisation(model_2cubed, good)
    assert not is_valid_randomisation(model_2cubed, bad)
    with pytest.raises(DimensionMismatchError):
        is_valid_randomisation(model_2cubed, RandomisationSystem.from_blocks(4, [[0, 1], [2, 3]]))


def test_randomisation_vectors_two_cubed(model_2cubed):
    vectors = randomisation_vectors(model_2cubed)
    supports = {tuple(i + 1 for i, x in enumerate(v) if x) for v in vectors}
    assert supports == {(1, 8), (2, 7), (3, 6), (4, 5), (1, 4, 6, 7), (2, 3, 5, 8)}


def test_enumeration_two_cubed(catalog_2cubed):
    assert [blocks1(s) for s in catalog_2cubed.systems] == [
        ((1, 4, 6, 7), (2, 3, 5, 8)),
        ((1, 8), (2, 7), (3, 6), (4, 5)),
    ]
    assert catalog_2cubed.shape_counts == {(4, 4): 1, (2, 2, 2, 2): 1}
    assert catalog_2cubed.refinement_edges == ()


def test_enumeration_include_full(model_2cubed):
    catalog = enumerate_circuit_randomisations(model_2cubed, include_full=True)
    assert len(catalog.systems) == 3
    full_idx = next(i for i, s in enumerate(catalog.systems) if s.shape == (8,))
    shape_edges = {
        (catalog.systems[i].shape, catalog.systems[j].shape)
        for i, j in catalog.refinement_edges
    }
    assert full_idx is not None
    assert shape_edges == {((8,), (4, 4)), ((8,), (2, 2, 2, 2))}
    for coarser, finer in catalog.refinement_edges:
        assert refines(catalog.systems[finer], catalog.systems[coarser])


def test_catalog_equals_partition_brute_force(model_2cubed):
    """Partitions into minimal orthogonal binary blocks, found independently."""
    contrast_rows = [list(c) for c in model_2cubed.contrast.columns()]
    kernel = oracles.binary_kernel_supports(contrast_rows, 8)
    minimal = oracles.minimal_supports(kernel)
    expected = set()
    for part in oracles.set_partitions(range(8)):
        blocks = [frozenset(b) for b in part]
        if all(len(b) >= 2 and b in minimal for b in blocks) and len(blocks) >= 2:
            expected.add(frozenset(blocks))
    catalog = enumerate_circuit_randomisations(model_2cubed)
    got = {frozenset(frozenset(b) for b in s.blocks) for s in catalog.systems}
    assert got == expected


def test_refines_and_shared_blocks():
    fine = RandomisationSystem.from_blocks(6, [[0, 1], [2, 3], [4, 5]])
    coarse = RandomisationSystem.from_blocks(6, [[0, 1], [2, 3, 4, 5]])
    other = RandomisationSystem.from_blocks(6, [[0, 2], [1, 3], [4, 5]])
    assert refines(fine, coarse)
    assert not refines(coarse, fine)
    assert refines(fine, fine)
    assert not refines(other, coarse)
    assert shared_blocks(fine, coarse) == [(0, 1)]
    assert shared_blocks(fine, other) == [(4, 5)]


def test_refinement_edges_cover_relation():
    # Three disjoint 2-cycles: the partition lattice of cycle families.
    g = DirectedGraph.from_edges([(0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)], 6)
    model = to_contrast_form(digraph_design(g))
    catalog = enumerate_circuit_randomisations(model)
    assert [s.shape for s in catalog.systems] == [(2, 2, 2)]
    assert catalog.refinement_edges == ()


def test_is_decomposable(model_2cubed):
    assert not is_decomposable(model_2cubed, [1, 0, 0, 0, 0, 0, 0, 1])
    assert not is_decomposable(model_2cubed, [1, 0, 0, 1, 0, 1, 1, 0])
    union = [1, 1, 0, 0, 0, 0, 1, 1]  # {1,8} plus {2,7}
    assert is_decomposable(model_2cubed, union)


def test_is_decomposable_input_checks(model_2cubed):
    with pytest.raises(ValueError):
        is_decomposable(model_2cubed, [2, 0, 0, 0, 0, 0, 0, 2])
    with pytest.raises(NotARandomisationVectorError):
        is_decomposable(model_2cubed, [1, 1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(NotARandomisationVectorError):
        is_decomposable(model_2cubed, [0] * 8)
    with pytest.raises(DimensionMismatchError):
        is_decomposable(model_2cubed, [1, 1])
