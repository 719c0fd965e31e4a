import itertools
import random

import pytest
from hypothesis import given, strategies as st

from symcp.symmetry import (AffineMap, GroupTooLarge, PermMap, PiecewisePartitions, PiecewiseSymmetry, Symmetry,
                            ais_group, apply_to_assignment, class_counts, compose, invert, orbit,
                            piecewise_generators, sample_piecewise, symmetry_classes)


def test_reversal_and_inversion_of_series():
    a = (3, 7, 4, 6, 5, 0, 10, 1, 9, 2, 8)
    g = ais_group(11)
    assert g["rev"](a) == (8, 2, 9, 1, 10, 0, 5, 6, 4, 7, 3)
    assert g["inv"](a) == (7, 3, 6, 4, 5, 10, 0, 9, 1, 8, 2)
    assert g["inv_rev"](a) == (2, 8, 1, 9, 0, 10, 5, 4, 6, 3, 7)


def test_group_is_closed():
    g = ais_group(7)
    pts = list(itertools.permutations(range(7)))[:50]
    elems = list(g.values())
    for a, b in itertools.product(elems, repeat=2):
        c = compose(a, b)
        assert any(all(c(p) == e(p) for p in pts) for e in elems)


perm5 = st.permutations(range(5))


@given(perm5, perm5, st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_compose_and_invert(p, q, a):
    g = Symmetry(tuple(p), PermMap.of(dict(zip(range(5), q))))
    h = Symmetry(tuple(q), AffineMap(1, 0))
    a = tuple(a)
    assert compose(g, h)(a) == g(h(a))
    assert invert(g)(g(a)) == a


def test_affine_map_must_be_bijective():
    with pytest.raises(ValueError):
        AffineMap(2, 0)


def test_orbit_budget():
    n = 8
    gens = [Symmetry(tuple(range(1, n)) + (0,), AffineMap(1, 0)),
            Symmetry((1, 0) + tuple(range(2, n)), AffineMap(1, 0))]
    with pytest.raises(GroupTooLarge):
        orbit(tuple(range(n)), gens, bound=1000)


def test_classes_of_four_element_group():
    sols = [(0, 3, 1, 2), (1, 2, 0, 3), (2, 1, 3, 0), (3, 0, 2, 1)]
    gens = [g for g in ais_group(4).values() if not g.is_identity]
    table = symmetry_classes(sols, gens)
    assert len(table) == 1 and len(next(iter(table.values()))) == 4
    assert class_counts(table, sols[:1]) == {min(sols): 1}


def test_piecewise_partitions():
    parts = PiecewisePartitions.from_boundaries((0, 2, 5), (0, 1, 3), (1, 2, 3))
    assert parts.var_parts == ((0, 1), (2, 3, 4)) and parts.val_parts == ((1,), (2, 3))
    assert parts.var_block(3) == 1 and parts.val_block(3) == 1
    with pytest.raises(ValueError):
        PiecewisePartitions.from_boundaries((0, 3, 2), (0, 3), (1, 2, 3))


def test_piecewise_symmetry_stays_in_blocks():
    parts = PiecewisePartitions.from_boundaries((0, 2, 5), (0, 1, 3), (1, 2, 3))
    rng = random.Random(3)
    for _ in range(20):
        g = sample_piecewise(parts, rng).as_symmetry()
        for i in range(5):
            assert parts.var_block(g.var(i)) == parts.var_block(i)
        for v in (1, 2, 3):
            assert parts.val_block(g.val(v)) == parts.val_block(v)
    with pytest.raises(ValueError):
        PiecewiseSymmetry(parts, ((0, 2), (1, 3, 4)), parts.val_parts)


def test_pair_generators_generate_full_group():
    parts = PiecewisePartitions.from_boundaries((0, 3), (0, 2), (1, 2))
    gens = piecewise_generators(parts)
    assert len(gens) == 3
    assert len(orbit((1, 1, 2), gens)) == 6  # 3 positions for the odd value, 2 value swaps
    a = (1, 2, 2)
    assert all(apply_to_assignment(g, a) != a or g.name.startswith("swap_x") for g in gens)
