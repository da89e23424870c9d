"""Exact risk evaluation for binomial experiments.

Pointwise risk is the expected loss over the N+1 outcomes at a fixed truth;
Bayes risk averages it over a prior (conjugate Beta or discrete); posterior
risk is the per-outcome expectation computed exactly from the square-root
moments, with no sampling for Dirichlet posteriors; worst-case risk scans a
dense grid and polishes the top local maxima by golden section.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from . import _kernels as kernels
from .errors import NumericError, UndefinedRatioError, ValidationError
from .estimators import EstimatorTable, bayes_b1, bayes_b2
from .posterior import Posterior, moment_matrix, posterior_mean, posterior_update, sqrt_moment_vector
from .simplex import LossKind, ProbVector, loss
from .specfun import log_beta, log_binomial_row, log_gamma

_PMF_DRIFT_TOL = 1e-12
DEFAULT_MAX_RISK_GRID = 2001
MAX_RISK_XTOL = 1e-8
_REFINE_TOP = 3


@dataclass(frozen=True, eq=False)
class DiscretePrior:
    """Finitely supported prior on the success probability p0 in [0, 1]."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        sup = np.array(self.support, dtype=float)
        w = np.array(self.weights, dtype=float)
        if sup.ndim != 1 or sup.size < 1:
            raise ValidationError("prior support must be a nonempty 1-D array")
        if w.shape != sup.shape:
            raise ValidationError("need exactly one weight per support point")
        if not np.all(np.isfinite(sup)) or np.any(sup < 0.0) or np.any(sup > 1.0):
            raise ValidationError("support points must lie in [0, 1]")
        if not np.all(np.isfinite(w)) or np.any(w < -1e-12):
            raise ValidationError("prior weights must be nonnegative")
        w[w < 0.0] = 0.0
        total = w.sum()
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"prior weights sum to {total!r}, not 1")
        w /= total
        sup.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.support.size


@dataclass(frozen=True)
class RiskReport:
    """A risk value with the metadata needed to reproduce it."""

    loss: LossKind
    estimator: str
    N: int
    value: float
    argmax_p: Optional[float] = None
    per_point: Optional[tuple] = None


def _check_binomial_table(table: EstimatorTable):
    if table.dim != 2:
        raise ValidationError("risk sums over binomial outcomes need K = 2 tables")


def pointwise_risk(p0: float, table: EstimatorTable, loss_kind: LossKind) -> float:
    """Expected loss over outcomes n ~ Binomial(N, p0) for a fixed truth p0."""
    if not 0.0 <= p0 <= 1.0:
        raise ValidationError(f"p0 must lie in [0, 1], got {p0!r}")
    _check_binomial_table(table)
    log_binom = log_binomial_row(table.N)
    value, pmf_total = kernels.risk_at(table.first_components, float(p0), log_binom, loss_kind.code)
    if abs(pmf_total - 1.0) > _PMF_DRIFT_TOL:
        raise NumericError(f"binomial weights sum to {pmf_total!r}, drift exceeds 1e-12")
    return float(value)


def posterior_risk(post: Posterior, estimate: ProbVector, loss_kind: LossKind) -> float:
    """Expected loss under the posterior, from the exact moment objects.

    1 - B^2 uses the quadratic form of the moment matrix on sqrt(estimate);
    1 - B uses the moment vector.  No sampling happens for Dirichlet
    posteriors.
    """
    root = np.sqrt(estimate.entries)
    if loss_kind is LossKind.ONE_MINUS_B_SQUARED:
        mat = moment_matrix(post).m
        if mat.shape[0] != estimate.dim:
            raise ValidationError("posterior and estimate dimensions differ")
        value = 1.0 - float(root @ mat @ root)
    else:
        vec = sqrt_moment_vector(post)
        if vec.size != estimate.dim:
            raise ValidationError("posterior and estimate dimensions differ")
        value = 1.0 - float(vec @ root)
    return max(value, 0.0)


def _conjugate_outcome_probabilities(prior_beta: float, n_trials: int) -> np.ndarray:
    n = np.arange(n_trials + 1, dtype=float)
    log_marginal = (
        log_binomial_row(n_trials)
        + log_beta(n + prior_beta, n_trials - n + prior_beta)
        - log_beta(prior_beta, prior_beta)
    )
    probs = np.exp(log_marginal)
    if abs(probs.sum() - 1.0) > _PMF_DRIFT_TOL:
        raise NumericError(f"marginal outcome probabilities sum to {probs.sum()!r}")
    return probs


def bayes_risk(prior, table: EstimatorTable, loss_kind: LossKind, n_trials: Optional[int] = None) -> float:
    """Average risk of the table under a prior on p0.

    ``prior`` is either a positive float (the symmetric conjugate Beta
    concentration) or a :class:`DiscretePrior`.  The conjugate route sums
    exact marginal outcome probabilities times exact posterior risks; the
    discrete route weights pointwise risks over the support.
    """
    _check_binomial_table(table)
    if n_trials is not None and n_trials != table.N:
        raise ValidationError(f"table was built for N={table.N}, asked for N={n_trials}")
    n_trials = table.N
    if isinstance(prior, DiscretePrior):
        log_binom = log_binomial_row(n_trials)
        risks, drift = kernels.risk_curve(
            table.first_components, prior.support, log_binom, loss_kind.code
        )
        if drift > _PMF_DRIFT_TOL:
            raise NumericError(f"binomial weight drift {drift!r} exceeds 1e-12")
        return float(prior.weights @ risks)
    prior_beta = float(prior)
    if not prior_beta > 0.0:
        raise ValidationError(f"conjugate prior beta must be positive, got {prior!r}")
    probs = _conjugate_outcome_probabilities(prior_beta, n_trials)
    total = 0.0
    for n in range(n_trials + 1):
        post = posterior_update(prior_beta, n_trials, n)
        total += probs[n] * posterior_risk(post, table.rows[n], loss_kind)
    return float(total)


def max_risk(
    table: EstimatorTable,
    loss_kind: LossKind,
    *,
    grid_size: int = DEFAULT_MAX_RISK_GRID,
    xtol: float = MAX_RISK_XTOL,
):
    """Worst-case pointwise risk over p0 in [0, 1].

    Scans a uniform grid (size is a tuning knob), then golden-refines the
    three best local maxima to |argmax error| < xtol.  The returned value is
    never below the risk at any grid point.  Returns (argmax_p, value).
    """
    from .search import refine_top_maxima

    _check_binomial_table(table)
    if grid_size < 3:
        raise ValidationError(f"max-risk grid needs at least 3 points, got {grid_size}")
    log_binom = log_binomial_row(table.N)
    est0 = table.first_components
    grid = np.linspace(0.0, 1.0, grid_size)
    risks, drift = kernels.risk_curve(est0, grid, log_binom, loss_kind.code)
    if drift > _PMF_DRIFT_TOL:
        raise NumericError(f"binomial weight drift {drift!r} exceeds 1e-12")

    def objective(p):
        value, _ = kernels.risk_at(est0, float(p), log_binom, loss_kind.code)
        return float(value)

    refined = refine_top_maxima(objective, grid, risks, top=_REFINE_TOP, xtol=xtol)
    best_p, best_value = refined[0]
    grid_argmax = int(np.argmax(risks))
    if risks[grid_argmax] > best_value:
        best_p, best_value = float(grid[grid_argmax]), float(risks[grid_argmax])
    return float(best_p), float(best_value)


def max_risk_report(
    table: EstimatorTable, loss_kind: LossKind, estimator_label: str, **kwargs
) -> RiskReport:
    p_star, value = max_risk(table, loss_kind, **kwargs)
    return RiskReport(
        loss=loss_kind, estimator=estimator_label, N=table.N, value=value, argmax_p=p_star
    )


def relative_suboptimality(post: Posterior, loss_kind: LossKind = LossKind.ONE_MINUS_B_SQUARED) -> float:
    """(r_mean - r_Bayes) / r_Bayes for one posterior.

    How much posterior risk the mean gives up relative to the Bayes
    estimator; nonnegative up to round-off by optimality of the Bayes rule.
    Undefined (raises) for point-mass posteriors, where r_Bayes = 0.
    """
    if loss_kind is LossKind.ONE_MINUS_B_SQUARED:
        best = bayes_b2(post)
    else:
        best = bayes_b1(post)
    r_bayes = posterior_risk(post, best, loss_kind)
    r_mean = posterior_risk(post, posterior_mean(post), loss_kind)
    if r_bayes < 1e-15:
        raise UndefinedRatioError("relative suboptimality is undefined: Bayes risk is zero")
    return (r_mean - r_bayes) / r_bayes


def multinomial_pointwise_risk(
    truth: ProbVector,
    estimator,
    n_trials: int,
    loss_kind: LossKind,
    *,
    max_enumeration: int = 100_000,
    mc_samples: int = 100_000,
    seed=None,
):
    """Pointwise risk for a K-outcome experiment with N draws.

    ``estimator`` maps a tuple of K counts summing to N to a
    :class:`ProbVector`.  When the outcome space C(N+K-1, K-1) has at most
    ``max_enumeration`` points the sum is exact and the returned standard
    error is None; otherwise the risk is estimated from ``mc_samples``
    seeded multinomial draws and the standard error is reported.
    """
    if n_trials < 1:
        raise ValidationError(f"need N >= 1, got {n_trials}")
    k = truth.dim
    outcome_count = comb(n_trials + k - 1, k - 1)
    if outcome_count <= max_enumeration:
        p = truth.entries
        with np.errstate(divide="ignore"):
            log_p = np.where(p > 0.0, np.log(np.where(p > 0.0, p, 1.0)), -np.inf)
        log_n_factorial = log_gamma(n_trials + 1.0)
        total = 0.0
        weight_sum = 0.0
        for counts in _compositions(n_trials, k):
            arr = np.array(counts, dtype=float)
            if np.any((arr > 0) & ~np.isfinite(log_p)):
                continue
            log_w = log_n_factorial - float(log_gamma(arr + 1.0).sum())
            log_w += float((arr * np.where(arr > 0, log_p, 0.0)).sum())
            w = float(np.exp(log_w))
            weight_sum += w
            total += w * loss(loss_kind, truth, estimator(counts))
        if abs(weight_sum - 1.0) > 1e-10:
            raise NumericError(f"multinomial weights sum to {weight_sum!r}")
        return float(total), None
    if seed is None:
        raise ValidationError("Monte-Carlo path requires an explicit seed")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(n_trials, truth.entries, size=mc_samples)
    unique, counts = np.unique(draws, axis=0, return_counts=True)
    losses = np.array(
        [loss(loss_kind, truth, estimator(tuple(int(c) for c in row))) for row in unique]
    )
    freqs = counts / counts.sum()
    value = float(freqs @ losses)
    second_moment = float(freqs @ (losses * losses))
    stderr = float(np.sqrt(max(second_moment - value * value, 0.0) / mc_samples))
    return value, stderr


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail
