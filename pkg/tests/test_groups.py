"""Group collections: coverage/partition validation, membership vectors,
cell decomposition, block layouts, and overlap bookkeeping."""

import random

import pytest

from repgen.groups import (BlockPartition, FiniteGroups, finite_support_size,
                           require_finite)
from repgen.hypotheses import Hypothesis
from repgen.periodic import (ALL, EVENS, ODDS, PeriodicSet, from_finite,
                             from_threshold, multiples, parse_set)
from oracles import brute_support_size, scan_bound


def test_validate_worked():
    r = FiniteGroups([EVENS, multiples(4)]).validate()
    assert not r.covers
    a1 = parse_set("ap:4,2,{0},{0,1}")  # {0,1} plus evens from 4
    a2 = parse_set("ap:3,2,{1},{2}")    # {2} plus odds from 3
    r2 = FiniteGroups([a1, a2]).validate()
    assert r2.covers and r2.partition
    r3 = FiniteGroups([EVENS, ODDS]).validate()
    assert r3.covers and r3.partition
    r4 = FiniteGroups([EVENS, ALL]).validate()
    assert r4.covers and not r4.partition


def test_membership_vector_worked():
    c = FiniteGroups([ODDS, from_threshold(1)])
    assert c.membership_vector(1) == (1, 1)
    assert c.membership_vector(0) == (0, 0)
    assert c.membership_vector(2) == (0, 1)


def test_groups_containing():
    c = FiniteGroups([EVENS, ALL])
    assert c.groups_containing(2) == [1, 2]
    assert c.groups_containing(3) == [2]


def test_cells_worked():
    c = FiniteGroups([from_finite([0, 1]) | from_threshold(2), ALL])
    # first group is everything here, so only the (1,1) cell is nonempty
    cells = dict(c.cells())
    assert cells[(1, 1)] == ALL
    c2 = FiniteGroups([from_finite([0, 1]), ALL])
    cells2 = dict(c2.cells())
    assert cells2[(1, 1)] == from_finite([0, 1])
    assert cells2[(0, 1)] == from_threshold(2)
    assert (1, 0) not in cells2


def test_cells_partition_universe():
    rng = random.Random(47)
    for _ in range(60):
        k = rng.randrange(1, 4)
        groups = [_random_set(rng) for _ in range(k)]
        c = FiniteGroups(groups)
        cells = c.cells()
        bound, period = scan_bound(groups)
        for x in range(bound + period):
            hits = [vec for vec, cell in cells if x in cell]
            v = c.membership_vector(x)
            if any(v):
                assert hits == [v]
            else:
                assert hits == []  # uncovered elements live in no cell
        # every listed cell is nonempty and its vector matches its members
        for vec, cell in cells:
            assert not cell.is_empty()
            wit = next(iter(cell.members()))
            assert c.membership_vector(wit) == vec


def test_cells_order_is_product_order():
    c = FiniteGroups([EVENS, ODDS])
    vecs = [vec for vec, _ in c.cells()]
    assert vecs == [(1, 0), (0, 1)]  # (1,1) and (0,0) are empty here


def test_block_partition_layout():
    b = BlockPartition(base=2, prefix_sizes=(1, 2, 4))
    assert b.size(1) == 1 and b.size(2) == 2 and b.size(3) == 4
    assert b.size(4) == 8  # geometric tail continues
    assert b.block_range(1) == (0, 1)
    assert b.block_range(2) == (1, 3)
    assert b.block_range(3) == (3, 7)
    assert b.group_index(5) == 3
    assert b.group_index(0) == 1
    assert b.group_index(7) == 4


def test_block_partition_defaults_to_pure_geometric():
    b = BlockPartition(base=3)
    assert b.size(1) == 3 and b.size(2) == 9
    assert b.block_range(1) == (0, 3)
    assert b.group_index(2) == 1
    assert b.group_index(3) == 2


def test_block_partition_validation():
    with pytest.raises(ValueError):
        BlockPartition(base=1)
    with pytest.raises(ValueError):
        BlockPartition(base=2, prefix_sizes=(0,))
    r = BlockPartition(base=2).validate()
    assert r.covers and r.partition


def test_block_group_index_monotone_and_consistent():
    rng = random.Random(53)
    for _ in range(20):
        base = rng.randrange(2, 5)
        sizes = tuple(rng.randrange(1, 6)
                      for _ in range(rng.randrange(0, 3)))
        b = BlockPartition(base=base, prefix_sizes=sizes)
        prev = 1
        for x in range(200):
            g = b.group_index(x)
            assert g in (prev, prev + 1)
            prev = g
            lo, hi = b.block_range(g)
            assert lo <= x < hi
            assert x in b.block_set(g)
        # boundaries are the running sums of the block sizes
        total = 0
        for k in range(1, 6):
            lo, hi = b.block_range(k)
            assert lo == total
            total += b.size(k)
            assert hi == total


def test_require_finite():
    c = FiniteGroups([EVENS, ODDS])
    assert require_finite(c, "test") is c
    with pytest.raises(Exception):
        require_finite(BlockPartition(base=2), "test")


def test_finite_support_size_worked():
    h = Hypothesis("all", ALL)
    assert finite_support_size(h, FiniteGroups([EVENS, ODDS])) == 0
    c2 = FiniteGroups([from_finite([0, 1, 2]), from_threshold(3)])
    assert finite_support_size(h, c2) == 3
    a1 = from_finite([0, 1])
    a2 = from_finite([1, 2])
    a3 = from_threshold(3) | from_finite([0, 1, 2])
    assert finite_support_size(h, FiniteGroups([a1, a2, a3])) == 10


def test_finite_support_size_matches_brute_force():
    rng = random.Random(59)
    for _ in range(40):
        k = rng.randrange(1, 4)
        groups = [_random_set(rng) for _ in range(k)]
        c = FiniteGroups(groups)
        support = _random_infinite(rng)
        h = Hypothesis("h", support)
        assert finite_support_size(h, c) == brute_support_size(h, c)


def _random_set(rng):
    t = rng.randrange(0, 6)
    m = rng.randrange(1, 5)
    rs = tuple(r for r in range(m) if rng.random() < 0.45)
    fs = tuple(x for x in range(t) if rng.random() < 0.45)
    return PeriodicSet(t, m, rs, fs)


def _random_infinite(rng):
    while True:
        s = _random_set(rng)
        if not s.is_finite():
            return s
