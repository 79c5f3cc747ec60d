"""A-posteriori comparison of discordant clustering results.

Given one observed partition per algorithm and a candidate ground-truth
pattern paired with each, the criterion scores algorithm i by
P(pattern_i | observed_i), computed with Bayes' rule from Monte Carlo
conditionals: data are re-generated under each candidate pattern (leaders
standard normal, unit links) with the noise variance set to the pooled
variance of the least-squares residuals, re-clustered, and the fraction of
exact matches to the observed partition estimates P(observed | pattern).
The algorithm with the largest posterior wins.  The per-algorithm scores
are not a shared likelihood: each is computed under its own algorithm.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .algorithms import ALGORITHMS, cluster_columns
from .core import DataMatrix, LinearLink, Partition, PartitionError, canonicalize
from .distance import DegenerateColumnError, distance_matrix
from .harness import estimate_noise_sd
from .synthesis import TAG_BAYES, Seed, generate_general, mix64, sigma_bits

__all__ = [
    "AlgorithmPosterior",
    "ClusteringResult",
    "ConditionalEstimate",
    "Hypothesis",
    "PosteriorReport",
    "UndefinedPosteriorError",
    "combine_posteriors",
    "conditional",
    "pooled_noise_sd",
    "posterior",
]

PRIOR_SUM_TOLERANCE = 1e-9


class UndefinedPosteriorError(ValueError):
    """Every hypothesis gave conditional probability 0 for some observation."""


@dataclass(frozen=True)
class Hypothesis:
    """A candidate ground-truth partition with its prior probability."""

    partition: Partition
    prior: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.prior) and 0.0 <= self.prior <= 1.0):
            raise ValueError(f"prior must be in [0, 1], got {self.prior}")


@dataclass(frozen=True)
class ClusteringResult:
    """One algorithm's observed partition of the data columns."""

    algorithm: str
    observed: Partition

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")


@dataclass(frozen=True)
class ConditionalEstimate:
    """Monte Carlo estimate of P(observed | hypothesis) with its binomial se."""

    probability: float
    stderr: float
    iterations: int


@dataclass(frozen=True)
class AlgorithmPosterior:
    """Posterior row for one (algorithm, observed partition) pair."""

    algorithm: str
    observed: Partition
    conditionals: tuple[ConditionalEstimate, ...]  # one per hypothesis
    posteriors: tuple[float, ...]  # P(hypothesis_j | this observation)
    posterior: float  # P(paired hypothesis | this observation)
    recommended: bool


@dataclass(frozen=True)
class PosteriorReport:
    rows: tuple[AlgorithmPosterior, ...]
    hypotheses: tuple[Hypothesis, ...]
    iterations: int
    seed: Seed
    recommendation: str


def combine_posteriors(conditionals, priors) -> tuple[float, ...]:
    """Bayes-rule posteriors over hypotheses for one observation.

    posterior_j = conditional_j * prior_j / sum_i conditional_i * prior_i.
    Raises UndefinedPosteriorError when every weight is zero.
    """
    weights = [c * p for c, p in zip(conditionals, priors, strict=True)]
    denom = sum(weights)
    if denom <= 0.0:
        raise UndefinedPosteriorError(
            "all conditional-times-prior weights are zero; the posterior is undefined"
        )
    return tuple(w / denom for w in weights)


def pooled_noise_sd(m: DataMatrix, hypothesis: Partition) -> float:
    """Standard deviation of all least-squares residuals under the hypothesis.

    Pools every fitted link's residual sum of squares and divides by the
    total residual count (L links x n rows); 0.0 when the hypothesis has
    only singleton clusters.
    """
    links = estimate_noise_sd(m, hypothesis)
    if not links:
        return 0.0
    rss = sum(link.noise_sd ** 2 * (m.n - 2) for link in links)
    return math.sqrt(rss / (len(links) * m.n))


def _unit_links(hypothesis: Partition, noise_sd: float) -> tuple[LinearLink, ...]:
    return tuple(
        LinearLink(cluster[0], member, 0.0, 1.0, noise_sd)
        for cluster in canonicalize(hypothesis).clusters
        for member in cluster[1:]
    )


def _hypothesis_key(hypothesis: Partition) -> int:
    masks = sorted(sum(1 << i for i in c) for c in hypothesis.clusters)
    return mix64(*masks)


def _match_counts(
    hypothesis: Partition,
    noise_sd: float,
    results: tuple[ClusteringResult, ...],
    n: int,
    master: int,
    start: int,
    stop: int,
) -> list[int]:
    """Matches per result over iterations [start, stop) under one hypothesis.

    Each iteration generates a single data set and clusters it once per
    distinct algorithm, so results sharing an algorithm share work.
    """
    k = hypothesis.k
    leaders = tuple(c[0] for c in canonicalize(hypothesis).clusters)
    links = _unit_links(hypothesis, noise_sd)
    key = _hypothesis_key(hypothesis)
    sig = sigma_bits(noise_sd)
    algorithms = sorted({r.algorithm for r in results})
    targets = [(r.algorithm, r.observed.as_sets()) for r in results]
    counts = [0] * len(results)
    for i in range(start, stop):
        seed = Seed(mix64(master, TAG_BAYES, key, sig, n, i))
        m = generate_general(links, leaders, n, "normal", seed)
        try:
            dm = distance_matrix(m)
        except DegenerateColumnError:
            continue  # scored as matching nothing
        outputs = {a: cluster_columns(a, dm, k).as_sets() for a in algorithms}
        for idx, (algo, observed) in enumerate(targets):
            if outputs[algo] == observed:
                counts[idx] += 1
    return counts


def conditional(
    observed: Partition,
    hypothesis: Hypothesis,
    algorithm: str,
    m: DataMatrix,
    iterations: int,
    seed: Seed,
) -> float:
    """Monte Carlo estimate of P(observed | hypothesis) for one algorithm."""
    if iterations < 1:
        raise ValueError(f"need at least one iteration, got {iterations}")
    if hypothesis.partition.p != m.p or observed.p != m.p:
        raise PartitionError("partitions must cover the data's columns")
    noise_sd = pooled_noise_sd(m, hypothesis.partition)
    results = (ClusteringResult(algorithm, observed),)
    counts = _match_counts(
        hypothesis.partition, noise_sd, results, m.n, seed.master, 0, iterations
    )
    return counts[0] / iterations


def posterior(
    results: list[ClusteringResult] | tuple[ClusteringResult, ...],
    hypotheses: list[Hypothesis] | tuple[Hypothesis, ...],
    m: DataMatrix,
    iterations: int,
    seed: Seed,
    workers: int = 1,
) -> PosteriorReport:
    """Full a-posteriori report: P(hypothesis_i | observed_i) per algorithm.

    results[i] is paired with hypotheses[i]; priors must sum to 1.  Raises
    UndefinedPosteriorError if some observation has conditional 0 under
    every hypothesis (the formula's denominator vanishes).
    """
    results = tuple(results)
    hypotheses = tuple(hypotheses)
    if len(results) < 2:
        raise ValueError("need at least two competing results")
    if len(results) != len(hypotheses):
        raise ValueError(
            f"{len(results)} results but {len(hypotheses)} hypotheses; they pair one-to-one"
        )
    if iterations < 1:
        raise ValueError(f"need at least one iteration, got {iterations}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    prior_sum = sum(h.prior for h in hypotheses)
    if abs(prior_sum - 1.0) > PRIOR_SUM_TOLERANCE:
        raise ValueError(f"priors must sum to 1, got {prior_sum!r}")
    for r in results:
        if r.observed.p != m.p:
            raise PartitionError("observed partitions must cover the data's columns")
    for h in hypotheses:
        if h.partition.p != m.p:
            raise PartitionError("hypothesis partitions must cover the data's columns")

    noise_sds = [pooled_noise_sd(m, h.partition) for h in hypotheses]
    tasks = []
    chunk = math.ceil(iterations / workers)
    for j, (hyp, noise_sd) in enumerate(zip(hypotheses, noise_sds)):
        for start in range(0, iterations, chunk):
            stop = min(start + chunk, iterations)
            tasks.append((j, hyp.partition, noise_sd, start, stop))

    totals = [[0] * len(results) for _ in hypotheses]
    if workers == 1:
        partials = [
            _match_counts(part, sd, results, m.n, seed.master, start, stop)
            for (_, part, sd, start, stop) in tasks
        ]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_match_counts, part, sd, results, m.n, seed.master, start, stop)
                for (_, part, sd, start, stop) in tasks
            ]
            partials = [f.result() for f in futures]
    for (j, *_), counts in zip(tasks, partials):
        for idx, c in enumerate(counts):
            totals[j][idx] += c

    rows = []
    for i, result in enumerate(results):
        conds = tuple(
            ConditionalEstimate(
                probability=totals[j][i] / iterations,
                stderr=math.sqrt(
                    (totals[j][i] / iterations) * (1.0 - totals[j][i] / iterations) / iterations
                ),
                iterations=iterations,
            )
            for j in range(len(hypotheses))
        )
        try:
            posteriors = combine_posteriors(
                [c.probability for c in conds], [h.prior for h in hypotheses]
            )
        except UndefinedPosteriorError:
            raise UndefinedPosteriorError(
                f"all conditionals are zero for {result.algorithm}; "
                "the posterior is undefined for this observation"
            ) from None
        rows.append(
            AlgorithmPosterior(
                algorithm=result.algorithm,
                observed=result.observed,
                conditionals=conds,
                posteriors=posteriors,
                posterior=posteriors[i],
                recommended=False,
            )
        )
    # max() keeps the first row among ties
    best = max(range(len(rows)), key=lambda i: rows[i].posterior)
    rows[best] = replace(rows[best], recommended=True)
    return PosteriorReport(
        rows=tuple(rows),
        hypotheses=hypotheses,
        iterations=iterations,
        seed=seed,
        recommendation=rows[best].algorithm,
    )
