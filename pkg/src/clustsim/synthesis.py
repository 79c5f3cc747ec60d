"""Seeded generation of linked-column data sets.

Independent columns are i.i.d. draws from a unit-variance family (standard
normal or standardized Student t with 3 df); each dependent column is an
affine image of its source plus scaled noise from the same family.  All
randomness flows through explicit substreams derived from a master seed
with a 64-bit avalanche mixer, so any iteration can be regenerated in
isolation and parallel schedules cannot change results.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import DataMatrix, LinearLink, Pattern, cluster_leaders

__all__ = [
    "FAMILIES",
    "NoiseSpec",
    "Seed",
    "family_code",
    "generate",
    "generate_general",
    "mix64",
    "sample_standardized",
    "sigma_bits",
    "substream",
]

FAMILIES = ("normal", "student_t3")

_MASK64 = (1 << 64) - 1

# stream-domain tags keep the pattern generator, the general generator, the
# sweep harness, and the posterior estimator on disjoint substreams
TAG_PATTERN = 0x50
TAG_GENERAL = 0x47
TAG_SWEEP = 0x53
TAG_BAYES = 0x42


@dataclass(frozen=True)
class Seed:
    """Master seed from which all substreams are derived."""

    master: int


@dataclass(frozen=True)
class NoiseSpec:
    """Noise family and standard deviation for one experiment."""

    distribution: str
    sigma: float

    def __post_init__(self) -> None:
        if self.distribution not in FAMILIES:
            raise ValueError(f"distribution must be one of {FAMILIES}, got {self.distribution!r}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma}")


def family_code(distribution: str) -> int:
    try:
        return FAMILIES.index(distribution)
    except ValueError:
        raise ValueError(f"distribution must be one of {FAMILIES}, got {distribution!r}") from None


def mix64(*parts: int) -> int:
    """Fold integers into one 64-bit key, one splitmix64 avalanche per part."""
    h = 0
    for part in parts:
        h = (h + (part & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
        h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


def sigma_bits(x: float) -> int:
    """IEEE-754 bit pattern of x, so distinct grid values key distinct streams."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def substream(seed: Seed, *key: int) -> np.random.Generator:
    """Independent generator for one (master seed, key) combination."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(mix64(seed.master, *key)))
    )


def _draw(distribution: str, shape, rng: np.random.Generator) -> np.ndarray:
    if distribution == "normal":
        return rng.standard_normal(shape)
    if distribution == "student_t3":
        # raw t(3) has variance 3; dividing by sqrt(3) standardizes it
        return rng.standard_t(3, shape) / math.sqrt(3.0)
    raise ValueError(f"distribution must be one of {FAMILIES}, got {distribution!r}")


def sample_standardized(distribution: str, count: int, rng: np.random.Generator) -> np.ndarray:
    """count i.i.d. draws with mean 0 and variance 1 from the given family."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return _draw(distribution, count, rng)


def _generate_values(
    links: Sequence[LinearLink],
    independents: Sequence[int],
    p: int,
    n: int,
    distribution: str,
    rng: np.random.Generator,
) -> np.ndarray:
    """Shared generation core: one (n, p) standardized draw, then the links
    applied in topological order.  Column j of the draw serves as column j's
    own randomness (leader value or link noise), so draw order is fixed."""
    targets = [link.target for link in links]
    columns = sorted(set(independents) | set(targets))
    if len(targets) != len(set(targets)):
        raise ValueError("each column may be the target of at most one link")
    if set(independents) & set(targets):
        raise ValueError("independent columns cannot also be link targets")
    if columns != list(range(p)):
        raise ValueError("independents plus link targets must cover columns 0..p-1 exactly")
    draws = _draw(distribution, (n, p), rng)
    values = np.empty((n, p))
    for j in independents:
        values[:, j] = draws[:, j]
    produced = set(independents)
    pending = list(links)
    while pending:
        rest = []
        for link in pending:
            if link.source not in produced:
                rest.append(link)
                continue
            col = link.intercept + link.slope * values[:, link.source]
            if link.noise_sd:
                col = col + link.noise_sd * draws[:, link.target]
            values[:, link.target] = col
            produced.add(link.target)
        if len(rest) == len(pending):
            raise ValueError("links do not form a forest rooted at the independent columns")
        pending = rest
    return values


def generate(pat: Pattern, n: int, noise: NoiseSpec, seed: Seed) -> DataMatrix:
    """One data set under a pattern: leaders i.i.d., links add sigma-scaled noise."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = substream(seed, TAG_PATTERN, pat.id, n, family_code(noise.distribution))
    links = tuple(
        LinearLink(link.source, link.target, 0.0, 1.0, noise.sigma) for link in pat.links
    )
    leaders = cluster_leaders(pat.clusters)
    values = _generate_values(links, leaders, pat.clusters.p, n, noise.distribution, rng)
    return DataMatrix(values)


def generate_general(
    links: Iterable[LinearLink],
    independents: Iterable[int],
    n: int,
    distribution: str,
    seed: Seed,
) -> DataMatrix:
    """One data set from explicit links (per-link intercept, slope, noise sd)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    links = tuple(links)
    independents = tuple(independents)
    p = len(links) + len(independents)
    rng = substream(seed, TAG_GENERAL, p, n, family_code(distribution))
    values = _generate_values(links, independents, p, n, distribution, rng)
    return DataMatrix(values)
