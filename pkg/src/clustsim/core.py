"""Core domain types: data matrices, partitions, and ground-truth patterns.

Throughout the package the *columns* of a data matrix are the objects being
clustered; a partition groups column indices (0-based), and a pattern
describes how dependent columns are built from their cluster leader.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AllocationCount",
    "DataMatrix",
    "LinearLink",
    "Partition",
    "PartitionError",
    "Pattern",
    "PATTERN_IDS",
    "canonicalize",
    "cluster_leaders",
    "count_assignments",
    "default_col_names",
    "format_partition",
    "parse_partition",
    "partitions_equal",
    "pattern",
]


class PartitionError(ValueError):
    """Structurally invalid partition: overlap, gap, or empty cluster."""


@functools.lru_cache(maxsize=256)
def default_col_names(p: int) -> tuple[str, ...]:
    return tuple(f"X{j + 1}" for j in range(p))


@dataclass(frozen=True)
class DataMatrix:
    """An n x p grid of finite reals; rows are observations, columns variables."""

    values: np.ndarray
    col_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got {arr.ndim}-d")
        n, p = arr.shape
        if n < 2:
            raise ValueError(f"need at least 2 observations, got {n}")
        if p < 2:
            raise ValueError(f"need at least 2 columns, got {p}")
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must all be finite")
        names = tuple(self.col_names) if self.col_names else default_col_names(p)
        if len(names) != p:
            raise ValueError(f"got {len(names)} column names for {p} columns")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "col_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


@dataclass(frozen=True)
class Partition:
    """Disjoint, nonempty clusters of column indices covering 0..p-1.

    Cluster and member order are preserved as given; `canonicalize` produces
    the sorted normal form used for display and equality.
    """

    clusters: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        clusters = tuple(tuple(int(i) for i in c) for c in self.clusters)
        if not clusters:
            raise PartitionError("a partition needs at least one cluster")
        seen: set[int] = set()
        for c in clusters:
            if not c:
                raise PartitionError("clusters must be nonempty")
            for i in c:
                if i in seen:
                    raise PartitionError(f"column {i} appears in two clusters")
                seen.add(i)
        if seen != set(range(len(seen))):
            raise PartitionError("clusters must cover 0..p-1 with no gaps")
        object.__setattr__(self, "clusters", clusters)

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def p(self) -> int:
        return sum(len(c) for c in self.clusters)

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.clusters)


def canonicalize(partition: Partition) -> Partition:
    """Members sorted within clusters, clusters ordered by smallest member."""
    return Partition(tuple(sorted(tuple(sorted(c)) for c in partition.clusters)))


def partitions_equal(a: Partition, b: Partition) -> bool:
    """Set-of-sets equality: ignores cluster order and member order."""
    if a.p != b.p:
        raise PartitionError(f"partitions over different universes: {a.p} vs {b.p} columns")
    return a.as_sets() == b.as_sets()


def format_partition(partition: Partition, col_names: Sequence[str] | None = None) -> str:
    """Render as `{X1,X2}|{X3,X4}|{X5,X6}` in canonical order."""
    names = tuple(col_names) if col_names else default_col_names(partition.p)
    if len(names) != partition.p:
        raise PartitionError(f"got {len(names)} column names for {partition.p} columns")
    canon = canonicalize(partition)
    return "|".join("{" + ",".join(names[i] for i in c) + "}" for c in canon.clusters)


_GROUP_RE = re.compile(r"^\s*\{\s*(.*?)\s*\}\s*$", re.S)


def parse_partition(text: str, col_names: Sequence[str]) -> Partition:
    """Parse the `{A,B}|{C}` grammar; whitespace is ignored everywhere."""
    names = tuple(col_names)
    index = {name: i for i, name in enumerate(names)}
    clusters: list[tuple[int, ...]] = []
    for group in text.split("|"):
        match = _GROUP_RE.match(group)
        if match is None:
            raise PartitionError(f"malformed cluster {group.strip()!r}: expected '{{A,B,...}}'")
        members = []
        for token in match.group(1).split(","):
            label = token.strip()
            if not label:
                raise PartitionError(f"empty member in cluster {group.strip()!r}")
            if label not in index:
                raise PartitionError(f"unknown column label {label!r}")
            members.append(index[label])
        clusters.append(tuple(members))
    partition = Partition(tuple(clusters))
    if partition.p != len(names):
        missing = sorted(set(names) - {names[i] for c in partition.clusters for i in c})
        raise PartitionError(f"partition does not cover all columns; missing {missing}")
    return partition


@dataclass(frozen=True)
class LinearLink:
    """target = intercept + slope * source + noise with sd noise_sd."""

    source: int
    target: int
    intercept: float
    slope: float
    noise_sd: float

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ValueError("a link cannot point a column at itself")
        if not (math.isfinite(self.noise_sd) and self.noise_sd >= 0.0):
            raise ValueError(f"noise_sd must be finite and >= 0, got {self.noise_sd}")


@dataclass(frozen=True)
class Pattern:
    """A ground-truth grouping of six columns.

    Each cluster's lowest-index member is its leader; every other member
    carries one unit link (intercept 0, slope 1, unit noise scale) from the
    leader.  Generation rescales the unit noise by the experiment's sigma.
    """

    id: int
    clusters: Partition
    links: tuple[LinearLink, ...]


PATTERN_IDS = (1, 2, 3)

_PATTERN_CLUSTERS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: ((0, 1), (2, 3), (4, 5)),
    2: ((0, 1, 2), (3, 4), (5,)),
    3: ((0, 1, 2, 3), (4,), (5,)),
}


@functools.cache
def pattern(pattern_id: int) -> Pattern:
    """The three 3-cluster layouts over six columns: 2+2+2, 3+2+1, 4+1+1."""
    try:
        shape = _PATTERN_CLUSTERS[pattern_id]
    except KeyError:
        raise ValueError(f"pattern id must be one of {PATTERN_IDS}, got {pattern_id}") from None
    links = tuple(
        LinearLink(source=c[0], target=m, intercept=0.0, slope=1.0, noise_sd=1.0)
        for c in shape
        for m in c[1:]
    )
    return Pattern(pattern_id, Partition(shape), links)


@functools.lru_cache(maxsize=256)
def cluster_leaders(partition: Partition) -> tuple[int, ...]:
    """Lowest-index member of each cluster, in canonical cluster order."""
    return tuple(c[0] for c in canonicalize(partition).clusters)


@dataclass(frozen=True)
class AllocationCount:
    """How many objects go into how many categories."""

    n_objects: int
    g_categories: int

    def __post_init__(self) -> None:
        if self.n_objects < 1 or self.g_categories < 1:
            raise ValueError("both counts must be >= 1")


def count_assignments(q: AllocationCount) -> int:
    """Number of ways to allocate n objects to g categories: C(n+g-1, g-1).

    Exact arbitrary-precision arithmetic; never overflows.
    """
    return math.comb(q.n_objects + q.g_categories - 1, q.g_categories - 1)
