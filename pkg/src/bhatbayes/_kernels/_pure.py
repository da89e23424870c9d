"""Pure-NumPy kernels: the fallback lane when the compiled extension is absent.

These functions mirror `_speedups.pyx` exactly.  They work on flat float64
arrays for the binomial (K = 2) hot paths: pointwise risk of an estimator
table, risk curves over parameter grids, and the Bayes table/risk of a
discrete prior.  Log-binomial-coefficient rows are precomputed by callers;
likelihood sums are formed in log space with max subtraction so boundary
support points (p = 0 or 1) and large N stay exact.
"""

from __future__ import annotations

import numpy as np

LOSS_ONE_MINUS_B = 1
LOSS_ONE_MINUS_B_SQUARED = 2


def binomial_pmf(p0: float, log_binom: np.ndarray) -> np.ndarray:
    """Outcome probabilities for n = 0..N at success probability p0."""
    n_trials = log_binom.size - 1
    if p0 <= 0.0:
        row = np.zeros(n_trials + 1)
        row[0] = 1.0
        return row
    if p0 >= 1.0:
        row = np.zeros(n_trials + 1)
        row[n_trials] = 1.0
        return row
    n = np.arange(n_trials + 1, dtype=float)
    return np.exp(log_binom + n * np.log(p0) + (n_trials - n) * np.log1p(-p0))


def _loss_terms(p0, est0, loss_code: int):
    # Bhattacharyya overlap of (p0, 1-p0) against each table row; exact at 0/1.
    b = np.sqrt(p0 * est0) + np.sqrt((1.0 - p0) * (1.0 - est0))
    if loss_code == LOSS_ONE_MINUS_B:
        return 1.0 - b
    return 1.0 - b * b


def risk_at(est0: np.ndarray, p0: float, log_binom: np.ndarray, loss_code: int):
    """Pointwise risk at p0; returns (risk, pmf_total) so callers can audit."""
    pmf = binomial_pmf(p0, log_binom)
    losses = _loss_terms(p0, est0, loss_code)
    return float(pmf @ losses), float(pmf.sum())


def risk_curve(est0: np.ndarray, grid: np.ndarray, log_binom: np.ndarray, loss_code: int):
    """Pointwise risk at every grid point; returns (risks, worst pmf drift)."""
    grid = np.asarray(grid, dtype=float)
    n_trials = log_binom.size - 1
    n = np.arange(n_trials + 1, dtype=float)
    risks = np.empty(grid.size)
    drift = 0.0

    interior = (grid > 0.0) & (grid < 1.0)
    if np.any(interior):
        p = grid[interior][:, None]
        log_pmf = log_binom[None, :] + n[None, :] * np.log(p)
        log_pmf += (n_trials - n)[None, :] * np.log1p(-p)
        pmf = np.exp(log_pmf)
        b = np.sqrt(p * est0[None, :]) + np.sqrt((1.0 - p) * (1.0 - est0[None, :]))
        losses = 1.0 - b if loss_code == LOSS_ONE_MINUS_B else 1.0 - b * b
        risks[interior] = (pmf * losses).sum(axis=1)
        drift = float(np.max(np.abs(pmf.sum(axis=1) - 1.0)))
    for idx in np.flatnonzero(~interior):
        risks[idx], _ = risk_at(est0, float(grid[idx]), log_binom, loss_code)
    return risks, drift


def _top_eigen_first_component(mean0: float, mean1: float, cross: float) -> float:
    # First component of the squared leading eigenvector of [[a, c], [c, b]].
    # Formulated to avoid cancellation; cross = 0 degenerates to a diagonal
    # matrix where the larger diagonal entry wins (index 0 on ties).
    if cross <= 0.0:
        return 1.0 if mean0 >= mean1 else 0.0
    half_gap = 0.5 * (mean0 - mean1)
    radius = np.hypot(half_gap, cross)
    if half_gap >= 0.0:
        v0, v1 = radius + half_gap, cross
    else:
        v0, v1 = cross, radius - half_gap
    return v0 * v0 / (v0 * v0 + v1 * v1)


def discrete_bayes_table(
    support: np.ndarray, weights: np.ndarray, n_trials: int, loss_code: int
) -> np.ndarray:
    """First components of the Bayes table for a discrete prior on p0.

    For each outcome n the prior reweights by the binomial likelihood (in
    log space; the binomial coefficient cancels); outcomes impossible under
    the support fall back to the prior-mean estimate, which never enters a
    risk sum over that support.
    """
    support = np.asarray(support, dtype=float)
    weights = np.asarray(weights, dtype=float)
    est0 = np.empty(n_trials + 1)
    prior_mean = float(weights @ support)
    alive = weights > 0.0

    with np.errstate(divide="ignore"):
        log_p = np.log(support)
        log_q = np.log1p(-support)

    sqrt_p = np.sqrt(support)
    sqrt_q = np.sqrt(1.0 - support)
    sqrt_pq = sqrt_p * sqrt_q

    for n in range(n_trials + 1):
        loglik = np.zeros(support.size)
        if n > 0:
            loglik = loglik + n * log_p
        if n < n_trials:
            loglik = loglik + (n_trials - n) * log_q
        finite = alive & np.isfinite(loglik)
        if not np.any(finite):
            est0[n] = prior_mean
            continue
        shift = loglik[finite].max()
        u = np.where(finite, weights, 0.0) * np.exp(np.where(finite, loglik, shift) - shift)
        total = u.sum()
        if loss_code == LOSS_ONE_MINUS_B_SQUARED:
            mean0 = float(u @ support) / total
            cross = float(u @ sqrt_pq) / total
            est0[n] = _top_eigen_first_component(mean0, 1.0 - mean0, cross)
        else:
            v0 = float(u @ sqrt_p) / total
            v1 = float(u @ sqrt_q) / total
            est0[n] = v0 * v0 / (v0 * v0 + v1 * v1)
    return est0


def discrete_bayes_risk(
    support: np.ndarray,
    weights: np.ndarray,
    est0: np.ndarray,
    log_binom: np.ndarray,
    loss_code: int,
) -> float:
    """Bayes risk of the table `est0` under the discrete prior: sum of
    weight times pointwise risk at each support point."""
    risks, _ = risk_curve(est0, np.asarray(support, dtype=float), log_binom, loss_code)
    return float(np.asarray(weights, dtype=float) @ risks)
