"""Single-linkage, DIANA, and PAM over a precomputed distance matrix.

All three methods are deterministic: every tie breaks toward the lowest
column index, so repeated runs and permutation checks are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import Partition
from .distance import DistanceMatrix

__all__ = [
    "ALGORITHMS",
    "Dendrogram",
    "Merge",
    "PamState",
    "cluster_columns",
    "cut",
    "diana",
    "pam",
    "single_linkage",
]

ALGORITHMS = ("single_linkage", "diana", "pam")


class Merge(NamedTuple):
    a: tuple[int, ...]  # first cluster's members; a's smallest index < b's
    b: tuple[int, ...]
    height: float


@dataclass(frozen=True)
class Dendrogram:
    """Full agglomerative merge history over leaf_count columns."""

    merges: tuple[Merge, ...]
    leaf_count: int


def _linkage_run(dm: DistanceMatrix, stop_at: int) -> tuple[list[Merge], list[tuple[int, ...]]]:
    """Shared single-linkage loop: merge until stop_at clusters remain.

    Returns the merges performed and the surviving clusters' members.
    """
    p = dm.p
    dist = [row[:] for row in dm.d.tolist()]
    members: list[tuple[int, ...]] = [(i,) for i in range(p)]
    # slot index == smallest member of the cluster stored there, so scanning
    # `alive` in order realizes the lexicographic tie-break
    alive = list(range(p))
    merges: list[Merge] = []
    while len(alive) > stop_at:
        best_h = math.inf
        best_i = best_j = -1
        for ai, i in enumerate(alive):
            di = dist[i]
            for j in alive[ai + 1 :]:
                if di[j] < best_h:
                    best_h = di[j]
                    best_i, best_j = i, j
        merges.append(Merge(members[best_i], members[best_j], best_h))
        dj = dist[best_j]
        di = dist[best_i]
        for k in alive:
            if k != best_i and k != best_j:
                m = dj[k] if dj[k] < di[k] else di[k]
                di[k] = m
                dist[k][best_i] = m
        members[best_i] = tuple(sorted(members[best_i] + members[best_j]))
        alive.remove(best_j)
    return merges, [members[i] for i in alive]


def single_linkage(dm: DistanceMatrix) -> Dendrogram:
    """Merge the two nearest clusters until one remains.

    Cluster distance is the minimum over cross pairs, maintained with the
    update d(A+B, C) = min(d(A, C), d(B, C)).  Ties pick the pair whose
    (smaller, larger) leading members sort first.
    """
    merges, _ = _linkage_run(dm, 1)
    return Dendrogram(tuple(merges), dm.p)


def cut(dendro: Dendrogram, k: int) -> Partition:
    """Partition obtained by undoing the last k - 1 merges."""
    p = dendro.leaf_count
    if not 1 <= k <= p:
        raise ValueError(f"k must be in 1..{p}, got {k}")
    parent = list(range(p))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b, _ in dendro.merges[: p - k]:
        ra, rb = find(a[0]), find(b[0])
        parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in range(p):
        groups.setdefault(find(i), []).append(i)
    return Partition(tuple(tuple(g) for g in groups.values()))


def diana(dm: DistanceMatrix, k: int) -> Partition:
    """Divisive clustering: split the widest cluster until k clusters exist.

    Each step selects the cluster of maximum diameter, seeds a splinter
    group with the member of largest average dissimilarity to its peers,
    then repeatedly moves over the member that most prefers the splinter
    (strictly smaller average dissimilarity) until no member does or only
    one remains behind.
    """
    p = dm.p
    if not 1 <= k <= p:
        raise ValueError(f"k must be in 1..{p}, got {k}")
    d = dm.d.tolist()
    clusters: list[list[int]] = [list(range(p))]
    while len(clusters) < k:
        widest: list[int] | None = None
        widest_diam = -1.0
        for c in clusters:  # ordered by smallest member: ties keep the first
            if len(c) < 2:
                continue
            diam = 0.0
            for ai in range(len(c) - 1):
                row = d[c[ai]]
                for bj in range(ai + 1, len(c)):
                    v = row[c[bj]]
                    if v > diam:
                        diam = v
            if diam > widest_diam:
                widest, widest_diam = c, diam
        assert widest is not None  # k <= p guarantees a splittable cluster
        old = list(widest)
        seed = -1
        seed_avg = -1.0
        for i in old:
            row = d[i]
            avg = sum(row[j] for j in old if j != i) / (len(old) - 1)
            if avg > seed_avg:
                seed, seed_avg = i, avg
        splinter = [seed]
        old.remove(seed)
        while len(old) > 1:
            mover = -1
            mover_gap = 0.0
            scale = 1.0 / (len(old) - 1)
            for i in old:
                row = d[i]
                to_old = sum(row[j] for j in old) * scale  # row[i] is 0
                to_new = sum(row[j] for j in splinter) / len(splinter)
                gap = to_old - to_new
                if gap > mover_gap:
                    mover, mover_gap = i, gap
            if mover < 0:
                break
            splinter.append(mover)
            old.remove(mover)
        clusters.remove(widest)
        clusters.extend([sorted(splinter), old])
        clusters.sort(key=lambda c: c[0])
    return Partition(tuple(tuple(c) for c in clusters))


@dataclass(frozen=True)
class PamState:
    """A k-medoid solution: medoids, per-column assignment, and its cost."""

    medoids: tuple[int, ...]
    assignment: tuple[int, ...]  # assignment[i] = medoid column serving i
    objective: float


def pam(dm: DistanceMatrix, k: int) -> tuple[Partition, PamState]:
    """Greedy medoid seeding (BUILD) then steepest-descent swaps (SWAP).

    BUILD starts from the column minimizing total distance and adds the
    column giving the largest objective decrease; SWAP repeatedly applies
    the single best medoid/non-medoid exchange while it strictly lowers
    the objective.  The result is swap-local-optimal.
    """
    p = dm.p
    if not 1 <= k <= p:
        raise ValueError(f"k must be in 1..{p}, got {k}")
    d = dm.d.tolist()
    cols = range(p)

    first = -1
    first_total = math.inf
    for c in cols:
        total = sum(d[c])  # column == row by symmetry
        if total < first_total:
            first, first_total = c, total
    medoids = [first]
    nearest = list(d[first])
    while len(medoids) < k:
        best_c = -1
        best_obj = math.inf
        for c in cols:
            if c in medoids:
                continue
            obj = sum(a if a < b else b for a, b in zip(d[c], nearest))
            if obj < best_obj:
                best_c, best_obj = c, obj
        medoids.append(best_c)
        nearest = [a if a < b else b for a, b in zip(d[best_c], nearest)]

    objective = sum(nearest)
    while True:
        best_obj = math.inf
        best_m = best_h = -1
        for m in sorted(medoids):
            rest = [x for x in medoids if x != m]
            if rest:
                base = d[rest[0]]
                for x in rest[1:]:
                    base = [a if a < b else b for a, b in zip(d[x], base)]
            else:
                base = [math.inf] * p
            for h in cols:
                if h in medoids:
                    continue
                obj = sum(a if a < b else b for a, b in zip(d[h], base))
                if obj < best_obj:
                    best_obj, best_m, best_h = obj, m, h
        if best_m < 0 or best_obj >= objective:
            break
        medoids.remove(best_m)
        medoids.append(best_h)
        objective = best_obj

    med = sorted(medoids)
    assignment = list(range(p))
    for i in cols:
        if i in medoids:
            continue  # medoids serve themselves at distance 0
        nearest_m = med[0]
        nearest_d = d[i][med[0]]
        for m in med[1:]:
            if d[i][m] < nearest_d:
                nearest_m, nearest_d = m, d[i][m]
        assignment[i] = nearest_m
    objective = sum(d[i][assignment[i]] for i in cols)

    groups: dict[int, list[int]] = {}
    for i in cols:
        groups.setdefault(assignment[i], []).append(i)
    part = Partition(tuple(tuple(groups[m]) for m in med))
    return part, PamState(tuple(med), tuple(assignment), objective)


def cluster_columns(algorithm: str, dm: DistanceMatrix, k: int) -> Partition:
    """Run one of the three methods and return its k-cluster partition."""
    if algorithm == "single_linkage":
        # same loop as cut(single_linkage(dm), k), stopped at k clusters
        if not 1 <= k <= dm.p:
            raise ValueError(f"k must be in 1..{dm.p}, got {k}")
        _, clusters = _linkage_run(dm, k)
        return Partition(tuple(clusters))
    if algorithm == "diana":
        return diana(dm, k)
    if algorithm == "pam":
        return pam(dm, k)[0]
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
