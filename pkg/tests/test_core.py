from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clustsim import (
    AllocationCount,
    DataMatrix,
    Partition,
    PartitionError,
    canonicalize,
    cluster_leaders,
    count_assignments,
    format_partition,
    parse_partition,
    partitions_equal,
    pattern,
)
from clustsim.core import PATTERN_IDS, default_col_names


def part(*clusters):
    return Partition(tuple(tuple(c) for c in clusters))


# --- partitions -------------------------------------------------------------

def test_canonicalize_sorts_members_and_clusters():
    assert canonicalize(part([2], [1, 0])).clusters == ((0, 1), (2,))
    assert canonicalize(part([4, 5], [3, 2], [1, 0])).clusters == ((0, 1), (2, 3), (4, 5))


def test_canonicalize_is_identity_on_canonical_input():
    p = part([0, 1], [2])
    assert canonicalize(p).clusters == p.clusters


@st.composite
def partitions(draw, max_p=9):
    p = draw(st.integers(2, max_p))
    labels = draw(st.lists(st.integers(0, 3), min_size=p, max_size=p))
    groups: dict[int, list[int]] = {}
    for i, g in enumerate(labels):
        groups.setdefault(g, []).append(i)
    clusters = [draw(st.permutations(c)) for c in groups.values()]
    clusters = draw(st.permutations(clusters))
    return Partition(tuple(tuple(c) for c in clusters))


@given(partitions())
def test_canonicalize_idempotent(p):
    once = canonicalize(p)
    assert canonicalize(once) == once


@given(partitions())
def test_partitions_equal_reflexive_and_ignores_order(p):
    assert partitions_equal(p, p)
    assert partitions_equal(p, canonicalize(p))


@given(partitions(), partitions())
def test_partitions_equal_symmetric(a, b):
    if a.p != b.p:
        with pytest.raises(PartitionError):
            partitions_equal(a, b)
    else:
        assert partitions_equal(a, b) == partitions_equal(b, a)


def test_partitions_equal_examples():
    assert partitions_equal(part([0, 1], [2, 3], [4, 5]), part([4, 5], [0, 1], [2, 3]))
    assert not partitions_equal(part([0, 1], [2, 3], [4, 5]), part([0, 1, 2], [3, 4], [5]))


def test_partition_validation():
    with pytest.raises(PartitionError):
        part([0, 1], [1, 2])  # overlap
    with pytest.raises(PartitionError):
        part([0], [2])  # gap
    with pytest.raises(PartitionError):
        part([0], [])  # empty cluster
    with pytest.raises(PartitionError):
        Partition(())


def test_partition_shape_properties():
    p = part([0, 1, 4, 5], [2], [3])
    assert p.k == 3
    assert p.p == 6
    assert p.as_sets() == frozenset(
        [frozenset([0, 1, 4, 5]), frozenset([2]), frozenset([3])]
    )


# --- text form --------------------------------------------------------------

def test_format_partition_canonical_order():
    p = part([4, 5], [3, 2], [1, 0])
    assert format_partition(p) == "{X1,X2}|{X3,X4}|{X5,X6}"


def test_parse_partition_roundtrip_and_whitespace():
    names = default_col_names(6)
    text = " { X1 ,X2 } | {X3,X4}\n|{ X5,X6 } "
    p = parse_partition(text, names)
    assert format_partition(p, names) == "{X1,X2}|{X3,X4}|{X5,X6}"


@given(partitions(max_p=8))
def test_parse_format_roundtrip(p):
    names = default_col_names(p.p)
    assert partitions_equal(parse_partition(format_partition(p, names), names), p)


def test_parse_partition_errors():
    names = default_col_names(4)
    with pytest.raises(PartitionError):
        parse_partition("{X1,X9}|{X2,X3,X4}", names)
    with pytest.raises(PartitionError):
        parse_partition("{X1,X2}", names)  # does not cover X3, X4
    with pytest.raises(PartitionError):
        parse_partition("X1,X2|{X3,X4}", names)  # missing braces
    with pytest.raises(PartitionError):
        parse_partition("{X1,,X2}|{X3,X4}", names)


# --- patterns ---------------------------------------------------------------

@pytest.mark.parametrize("pid,expected", [
    (1, ((0, 1), (2, 3), (4, 5))),
    (2, ((0, 1, 2), (3, 4), (5,))),
    (3, ((0, 1, 2, 3), (4,), (5,))),
])
def test_pattern_clusters(pid, expected):
    assert pattern(pid).clusters.clusters == expected


def test_pattern_links_hang_off_lowest_index_leader():
    for pid in PATTERN_IDS:
        pat = pattern(pid)
        leaders = cluster_leaders(pat.clusters)
        targets = [link.target for link in pat.links]
        assert len(targets) == len(set(targets))
        assert sorted(set(leaders) | set(targets)) == list(range(6))
        for link in pat.links:
            assert link.source in leaders
            assert (link.intercept, link.slope) == (0.0, 1.0)
        # links induce exactly the pattern's clusters
        induced = {leader: {leader} for leader in leaders}
        for link in pat.links:
            induced[link.source].add(link.target)
        got = Partition(tuple(tuple(sorted(c)) for c in induced.values()))
        assert partitions_equal(got, pat.clusters)


def test_pattern_one_pairs_fifth_and_sixth_columns():
    # the third pair is (X5, X6): its link runs 4 -> 5, not 0 -> 5
    links = {(l.source, l.target) for l in pattern(1).links}
    assert links == {(0, 1), (2, 3), (4, 5)}


def test_pattern_rejects_unknown_id():
    with pytest.raises(ValueError):
        pattern(4)


# --- allocation counting ----------------------------------------------------

def test_count_assignments_examples():
    assert count_assignments(AllocationCount(20, 10)) == 10_015_005
    assert count_assignments(AllocationCount(5, 1)) == 1
    assert count_assignments(AllocationCount(1, 7)) == 7


@given(st.integers(1, 400), st.integers(1, 400))
def test_count_assignments_binomial_symmetry(n, g):
    assert count_assignments(AllocationCount(n, g)) == math.comb(n + g - 1, n)


@given(st.integers(2, 80), st.integers(2, 80))
def test_count_assignments_multiset_recurrence(n, g):
    f = lambda a, b: count_assignments(AllocationCount(a, b))
    assert f(n, g) == f(n - 1, g) + f(n, g - 1)


def test_allocation_count_validation():
    with pytest.raises(ValueError):
        AllocationCount(0, 3)


# --- data matrix ------------------------------------------------------------

def test_data_matrix_validation():
    with pytest.raises(ValueError):
        DataMatrix([[1.0, 2.0]])  # n < 2
    with pytest.raises(ValueError):
        DataMatrix([[1.0], [2.0]])  # p < 2
    with pytest.raises(ValueError):
        DataMatrix([[1.0, float("nan")], [2.0, 3.0]])
    with pytest.raises(ValueError):
        DataMatrix([[1.0, 2.0], [3.0, 4.0]], col_names=("A",))


def test_data_matrix_defaults_and_immutability():
    m = DataMatrix([[1.0, 2.0], [3.0, 4.0]])
    assert m.col_names == ("X1", "X2")
    assert (m.n, m.p) == (2, 2)
    with pytest.raises(ValueError):
        m.values[0, 0] = 9.0
    assert np.array_equal(m.column(1), [2.0, 4.0])
