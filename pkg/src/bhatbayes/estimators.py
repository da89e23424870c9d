"""Point estimators for multinomial parameters.

Four estimators are provided.  Under the loss 1 - B the Bayes rule is the
normalized square of the moment vector E[sqrt(p)]; under 1 - B^2 it is the
elementwise square of the leading eigenvector of the moment matrix
E[sqrt(p_i p_j)].  The posterior mean (Bayes for every Bregman divergence)
and the maximum-likelihood estimator n/N serve as the baselines they are
usually compared against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .eigen import top_eigenpair
from .errors import NumericError, ValidationError
from .posterior import (
    Posterior,
    moment_matrix,
    posterior_mean,
    posterior_update,
    sqrt_moment_vector,
)
from .simplex import ProbVector

_MONOTONE_SLACK = 1e-12


class EstimatorKind(Enum):
    BAYES_B1 = "bayes_b1"
    BAYES_B2 = "bayes_b2"
    POSTERIOR_MEAN = "mean"
    MLE = "mle"

    @property
    def needs_prior(self) -> bool:
        return self is not EstimatorKind.MLE


@dataclass(frozen=True, eq=False)
class EstimatorTable:
    """Estimates for every binomial outcome n = 0..N of one estimator.

    Materializing the map n -> estimate turns risk evaluation into plain
    weighted sums over outcomes.
    """

    N: int
    rows: tuple

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError(f"estimator table needs N >= 1, got {self.N}")
        rows = tuple(self.rows)
        if len(rows) != self.N + 1:
            raise ValidationError(f"expected {self.N + 1} rows, got {len(rows)}")
        dims = {row.dim for row in rows}
        if len(dims) != 1:
            raise ValidationError("all table rows must share one dimension")
        object.__setattr__(self, "rows", rows)
        first = np.array([row.entries[0] for row in rows])
        first.setflags(write=False)
        object.__setattr__(self, "_first", first)

    @property
    def dim(self) -> int:
        return self.rows[0].dim

    @property
    def first_components(self) -> np.ndarray:
        """First component of each row, as a read-only vector of length N+1."""
        return self._first


def bayes_b1(post: Posterior) -> ProbVector:
    """Bayes estimator under 1 - B: normalize E[sqrt(p)], square elementwise."""
    vec = sqrt_moment_vector(post)
    norm = float(np.sqrt(vec @ vec))
    if norm == 0.0:
        raise NumericError("square-root moment vector is zero; posterior is degenerate")
    unit = vec / norm
    return ProbVector(unit * unit)


def bayes_b2(post: Posterior) -> ProbVector:
    """Bayes estimator under 1 - B^2: squared top eigenvector of E[sqrt(p_i p_j)].

    The moment matrix is entrywise nonnegative, so its leading eigenvector
    has a nonnegative representative and the squares land exactly on the
    simplex.
    """
    mat = moment_matrix(post)
    _, vec = top_eigenpair(mat.m)
    return ProbVector(vec * vec)


def mle(n_successes: int, n_trials: int) -> ProbVector:
    """Maximum-likelihood estimate (n/N, 1 - n/N) for the binomial model."""
    if n_trials < 1:
        raise ValidationError(f"MLE needs N >= 1, got {n_trials}")
    if n_successes < 0 or n_successes > n_trials:
        raise ValidationError(f"need 0 <= n <= N, got n={n_successes}, N={n_trials}")
    frac = n_successes / n_trials
    return ProbVector(np.array([frac, 1.0 - frac]))


def _estimate_for_outcome(kind: EstimatorKind, prior_beta, n_trials: int, n: int) -> ProbVector:
    if kind is EstimatorKind.MLE:
        return mle(n, n_trials)
    post = posterior_update(prior_beta, n_trials, n)
    if kind is EstimatorKind.BAYES_B1:
        return bayes_b1(post)
    if kind is EstimatorKind.BAYES_B2:
        return bayes_b2(post)
    return posterior_mean(post)


def estimator_table(kind: EstimatorKind, n_trials: int, prior_beta=None) -> EstimatorTable:
    """Build the full outcome table for one estimator at sample size N.

    The first component must come out nondecreasing in n for every kind;
    that is checked rather than assumed, and a violation raises.
    """
    if n_trials < 1:
        raise ValidationError(f"estimator table needs N >= 1, got {n_trials}")
    if kind.needs_prior and (prior_beta is None or not prior_beta > 0.0):
        raise ValidationError(f"{kind.value} requires a positive prior beta")
    rows = tuple(
        _estimate_for_outcome(kind, prior_beta, n_trials, n) for n in range(n_trials + 1)
    )
    first = np.array([row.entries[0] for row in rows])
    steps = np.diff(first)
    if np.any(steps < -_MONOTONE_SLACK):
        worst = int(np.argmin(steps))
        raise NumericError(
            f"{kind.value} table is not monotone in n: "
            f"row {worst} -> {worst + 1} steps by {steps[worst]:.3e}"
        )
    return EstimatorTable(N=n_trials, rows=rows)
