"""Pearson correlation and the correlation distance d = sqrt(2*(1 - rho)).

The distance lives in [0, 2]: 0 at perfect positive linear dependence,
sqrt(2) at zero correlation, 2 at perfect negative dependence.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .core import DataMatrix

__all__ = [
    "DegenerateColumnError",
    "DistanceMatrix",
    "RHO_TOLERANCE",
    "corr_distance",
    "distance_matrix",
    "pearson",
]

# |rho| may overshoot 1 by at most this much (floating-point noise) before
# it is treated as corruption rather than roundoff.
RHO_TOLERANCE = 1e-9


class DegenerateColumnError(ValueError):
    """A column with zero sample variance has no defined correlation."""

    def __init__(self, message: str, column: str | int | None = None) -> None:
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric p x p grid of correlation distances with a zero diagonal."""

    d: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.d, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("distance matrix must be square")
        if arr.shape[0] < 2:
            raise ValueError("distance matrix needs at least two columns")
        if not np.isfinite(arr).all():
            raise ValueError("distances must all be finite")
        if (arr != arr.T).any():
            raise ValueError("distance matrix must be symmetric")
        if (np.diagonal(arr) != 0.0).any():
            raise ValueError("diagonal entries must be exactly zero")
        if float(arr.min()) < 0.0 or float(arr.max()) > 2.0:
            raise ValueError("distances must lie in [0, 2]")
        arr.flags.writeable = False
        object.__setattr__(self, "d", arr)

    @classmethod
    def _from_values(cls, arr: np.ndarray) -> "DistanceMatrix":
        # fast path for arrays that satisfy the invariants by construction
        arr.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "d", arr)
        return obj

    @property
    def p(self) -> int:
        return self.d.shape[0]


def pearson(x, y) -> float:
    """Two-pass sample correlation of two columns, clipped to [-1, 1].

    The two-pass (mean-subtracted) form is required for stability at the
    tiny sample sizes this package targets.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("inputs must be 1-d and the same length")
    if x.size < 2:
        raise ValueError("correlation needs at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx <= 0.0:
        raise DegenerateColumnError("first column has zero variance")
    if syy <= 0.0:
        raise DegenerateColumnError("second column has zero variance")
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, rho))


def corr_distance(rho: float) -> float:
    """Distance for a given correlation: sqrt(2*(1 - rho))."""
    rho = float(rho)
    if not -1.0 - RHO_TOLERANCE <= rho <= 1.0 + RHO_TOLERANCE:
        raise ValueError(f"correlation {rho!r} is outside [-1, 1]")
    rho = min(1.0, max(-1.0, rho))
    return math.sqrt(2.0 * (1.0 - rho))


def distance_matrix(m: DataMatrix) -> DistanceMatrix:
    """Correlation distance between every pair of columns of m.

    Raises DegenerateColumnError (naming the column) if any column is
    constant; a silent fallback would corrupt downstream error rates.
    """
    return DistanceMatrix._from_values(_distance_values(m.values, m.col_names))


@functools.lru_cache(maxsize=64)
def _mirror_indices(p: int):
    upper = np.triu_indices(p, 1)
    return upper, (upper[1], upper[0])


def _distance_values(values: np.ndarray, col_names: tuple[str, ...] | None = None) -> np.ndarray:
    z = np.ascontiguousarray((values - values.mean(axis=0)).T)
    gram = z @ z.T
    ss = np.diagonal(gram)
    if (ss <= 0.0).any():
        j = int(np.flatnonzero(ss <= 0.0)[0])
        name = col_names[j] if col_names else str(j)
        raise DegenerateColumnError(f"column {name} has zero variance", column=name)
    # identical columns keep rho == 1.0 exactly: the gram entry equals the
    # diagonal and sqrt(s * s) == s in IEEE round-to-nearest
    rho = gram / np.sqrt(np.outer(ss, ss))
    np.clip(rho, -1.0, 1.0, out=rho)
    d = np.sqrt(2.0 * (1.0 - rho))
    upper, lower = _mirror_indices(d.shape[0])
    d[lower] = d[upper]
    np.fill_diagonal(d, 0.0)
    return d
