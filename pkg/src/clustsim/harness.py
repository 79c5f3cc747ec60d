"""Monte Carlo noise sweeps: generate, cluster, score binary correctness.

A sweep runs B independent iterations at every noise level on a grid and
reports the fraction whose recovered partition differs from the generating
one.  Correctness is all-or-nothing set equality; there is no partial
credit.  Every iteration owns a substream keyed by the data-shaping
parameters only (pattern, n, distribution, sigma, iteration), so all three
algorithms see identical matrices for a given seed and results do not
depend on worker count or scheduling.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import NamedTuple

from .algorithms import ALGORITHMS, cluster_columns
from .core import (
    DataMatrix,
    LinearLink,
    Partition,
    PartitionError,
    canonicalize,
    pattern,
    partitions_equal,
)
from .distance import DegenerateColumnError, distance_matrix
from .synthesis import (
    FAMILIES,
    TAG_SWEEP,
    NoiseSpec,
    Seed,
    family_code,
    generate,
    mix64,
    sigma_bits,
)

__all__ = [
    "SweepConfig",
    "SweepPoint",
    "SweepResult",
    "default_sigma_grid",
    "estimate_noise_sd",
    "iteration_seed",
    "run_iteration",
    "sweep",
]


@dataclass(frozen=True)
class SweepConfig:
    """Full parameterization of one Monte Carlo error-rate experiment."""

    algorithm: str
    pattern_id: int
    n: int
    distribution: str
    sigma_grid: tuple[float, ...]
    iterations: int
    seed: Seed
    k: int = 3

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        pat = pattern(self.pattern_id)  # validates the id
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.distribution not in FAMILIES:
            raise ValueError(f"distribution must be one of {FAMILIES}, got {self.distribution!r}")
        grid = tuple(float(s) for s in self.sigma_grid)
        if not grid:
            raise ValueError("sigma grid must not be empty")
        if grid[0] < 0.0 or any(not math.isfinite(s) for s in grid):
            raise ValueError("sigma values must be finite and nonnegative")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sigma values must be strictly increasing")
        if self.iterations < 1:
            raise ValueError(f"need at least one iteration, got {self.iterations}")
        if not 1 <= self.k <= pat.clusters.p:
            raise ValueError(f"k must be in 1..{pat.clusters.p}, got {self.k}")
        object.__setattr__(self, "sigma_grid", grid)


class SweepPoint(NamedTuple):
    sigma: float
    error_count: int
    error_rate: float


@dataclass(frozen=True)
class SweepResult:
    """Error-rate curve: one point per grid sigma, plus the config echo."""

    config: SweepConfig
    points: tuple[SweepPoint, ...]


def default_sigma_grid(steps: int = 30) -> tuple[float, ...]:
    """steps equally spaced noise levels j/steps, j = 1..steps."""
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps}")
    return tuple(j / steps for j in range(1, steps + 1))


def iteration_seed(config: SweepConfig, sigma: float, index: int) -> Seed:
    """Substream seed for one iteration.

    Keyed by the data-shaping parameters only (not algorithm or k), so
    sweeps that differ only in algorithm cluster the same matrices.
    """
    return Seed(
        mix64(
            config.seed.master,
            TAG_SWEEP,
            config.pattern_id,
            config.n,
            family_code(config.distribution),
            sigma_bits(sigma),
            index,
        )
    )


def run_iteration(config: SweepConfig, sigma: float, index: int) -> bool:
    """Generate, cluster, and compare one data set; True means recovered.

    A degenerate generated column (possible only at extreme parameter
    choices) counts as incorrect rather than raising, keeping the error
    denominator at exactly B.
    """
    pat = pattern(config.pattern_id)
    m = generate(
        pat,
        config.n,
        NoiseSpec(config.distribution, sigma),
        iteration_seed(config, sigma, index),
    )
    try:
        dm = distance_matrix(m)
    except DegenerateColumnError:
        return False
    got = cluster_columns(config.algorithm, dm, config.k)
    return partitions_equal(got, pat.clusters)


def _count_errors(config: SweepConfig, sigma: float) -> int:
    return sum(not run_iteration(config, sigma, i) for i in range(config.iterations))


def sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Error rate at every grid sigma.

    Deterministic for a given config and seed no matter how many worker
    processes share the grid points.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(config.sigma_grid) == 1:
        counts = [_count_errors(config, s) for s in config.sigma_grid]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(partial(_count_errors, config), config.sigma_grid))
    b = config.iterations
    points = tuple(
        SweepPoint(s, c, c / b) for s, c in zip(config.sigma_grid, counts)
    )
    return SweepResult(config, points)


def estimate_noise_sd(m: DataMatrix, hypothesis: Partition) -> list[LinearLink]:
    """Least-squares fit of every non-leader column on its cluster leader.

    Returns one link per fitted column carrying the intercept, slope, and
    residual standard deviation sqrt(RSS / (n - 2)); singleton clusters
    contribute no links.
    """
    if hypothesis.p != m.p:
        raise PartitionError(
            f"hypothesis covers {hypothesis.p} columns but the data has {m.p}"
        )
    if m.n < 3:
        raise ValueError(f"residual sd needs n >= 3, got n = {m.n}")
    links: list[LinearLink] = []
    for cluster in canonicalize(hypothesis).clusters:
        if len(cluster) == 1:
            continue
        leader = cluster[0]
        x = m.values[:, leader]
        x_mean = float(x.mean())
        dx = x - x_mean
        sxx = float(dx @ dx)
        if sxx <= 0.0:
            name = m.col_names[leader]
            raise DegenerateColumnError(
                f"leader column {name} has zero variance", column=name
            )
        for member in cluster[1:]:
            y = m.values[:, member]
            y_mean = float(y.mean())
            slope = float(dx @ (y - y_mean)) / sxx
            intercept = y_mean - slope * x_mean
            r = y - (intercept + slope * x)
            rss = float(r @ r)
            links.append(
                LinearLink(leader, member, intercept, slope, math.sqrt(max(rss, 0.0) / (m.n - 2)))
            )
    return links
