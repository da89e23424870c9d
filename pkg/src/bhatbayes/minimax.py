"""Minimax estimators via Bayes-minimax duality.

Two routes to an (approximately) minimax estimator for the binomial model:
a restricted scan over symmetric conjugate Beta priors that minimizes the
worst-case risk of the resulting Bayes estimator, and Kempthorne's
least-favorable-prior iteration, which grows a discrete prior one support
point at a time until its maximized Bayes risk (a lower bound on the
minimax risk) and the worst-case risk of its Bayes estimator (an upper
bound) agree to tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit, softmax

from . import _kernels as kernels
from .errors import NumericError, OptimizationError, ValidationError
from .estimators import EstimatorKind, EstimatorTable, estimator_table
from .risk import DiscretePrior, max_risk
from .search import golden_section_max, refine_top_maxima
from .simplex import LossKind, ProbVector
from .specfun import log_binomial_row

_MERGE_TOL = 1e-4
_BETA_REFINE_XTOL = 1e-3


@dataclass
class KempthorneConfig:
    """Tuning for the least-favorable-prior iteration."""

    N: int
    loss: LossKind = LossKind.ONE_MINUS_B_SQUARED
    tol: float = 1e-3
    alpha_mix: float = 0.01
    max_outer_iters: int = 50
    inner_restarts: int = 5
    inner_tol: float = 1e-6
    inner_maxiter: Optional[int] = None
    seed: int = 0
    max_risk_grid: int = 2001

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError(f"need N >= 1, got {self.N}")
        if not self.tol > 0.0:
            raise ValidationError(f"tolerance must be positive, got {self.tol!r}")
        if not 0.0 < self.alpha_mix < 1.0:
            raise ValidationError(f"mixing weight must lie in (0, 1), got {self.alpha_mix!r}")
        if self.max_outer_iters < 1:
            raise ValidationError("need at least one outer iteration")


@dataclass(frozen=True)
class KempthorneResult:
    """Converged (or best-so-far) prior with minimax-risk bounds.

    ``avg_risk`` is the maximized Bayes risk of the prior (lower bound on
    the minimax risk); ``max_risk`` the worst-case risk of its Bayes
    estimator (upper bound); ``diff`` their relative gap.
    """

    prior: DiscretePrior
    avg_risk: float
    max_risk: float
    diff: float
    outer_iters: int
    converged: bool
    avg_risk_history: tuple = field(default=())
    max_risk_history: tuple = field(default=())

    def __post_init__(self):
        if self.avg_risk > self.max_risk + 1e-9:
            raise NumericError(
                f"risk bounds out of order: avg {self.avg_risk!r} > max {self.max_risk!r}"
            )


def _table_from_first_components(est0: np.ndarray, n_trials: int) -> EstimatorTable:
    rows = tuple(ProbVector(np.array([e, 1.0 - e])) for e in est0)
    return EstimatorTable(N=n_trials, rows=rows)


def bayes_estimator_for_discrete_prior(
    prior: DiscretePrior, n_trials: int, loss_kind: LossKind
) -> EstimatorTable:
    """Bayes table for a discrete prior on p0.

    Each outcome reweights the prior by its binomial likelihood and applies
    the Bayes rule for the loss.  Outcomes impossible under the support get
    the prior-mean estimate; they carry zero probability everywhere on the
    support, so the choice is risk-irrelevant but deterministic.
    """
    if n_trials < 1:
        raise ValidationError(f"need N >= 1, got {n_trials}")
    est0 = kernels.discrete_bayes_table(prior.support, prior.weights, n_trials, loss_kind.code)
    return _table_from_first_components(est0, n_trials)


def beta_scan(
    n_trials: int,
    loss_kind: LossKind,
    estimator_family: EstimatorKind,
    beta_range=(0.05, 2.0),
    resolution: int = 41,
    *,
    grid_size: int = 2001,
):
    """Restricted minimax search over symmetric conjugate priors.

    Builds the family's estimator table for each beta on a grid, computes
    its worst-case risk, and golden-refines around the best grid point to
    |beta error| < 1e-3.  Returns (beta_star, max_risk_star, curve) where
    curve is the sampled list of (beta, max_risk) pairs.
    """
    if estimator_family is EstimatorKind.MLE:
        raise ValidationError("the MLE has no prior to scan over")
    lo, hi = float(beta_range[0]), float(beta_range[1])
    if not 0.0 < lo < hi:
        raise ValidationError(f"beta range must satisfy 0 < lo < hi, got {beta_range!r}")
    if resolution < 3:
        raise ValidationError(f"need at least 3 scan points, got {resolution}")

    def worst_risk(beta: float) -> float:
        table = estimator_table(estimator_family, n_trials, beta)
        return max_risk(table, loss_kind, grid_size=grid_size)[1]

    betas = np.linspace(lo, hi, resolution)
    values = np.array([worst_risk(b) for b in betas])
    best = int(np.argmin(values))
    bracket_lo = betas[best - 1] if best > 0 else betas[0]
    bracket_hi = betas[best + 1] if best < resolution - 1 else betas[-1]
    beta_star, neg_value = golden_section_max(
        lambda b: -worst_risk(b), bracket_lo, bracket_hi, _BETA_REFINE_XTOL
    )
    max_risk_star = -neg_value
    if values[best] < max_risk_star:
        beta_star, max_risk_star = float(betas[best]), float(values[best])
    curve = [(float(b), float(v)) for b, v in zip(betas, values)]
    return float(beta_star), float(max_risk_star), curve


def default_initial_prior(
    n_trials: int, loss_kind: LossKind, *, grid_size: int = 2001
) -> DiscretePrior:
    """Two equally weighted atoms at the risk maxima of the best conjugate
    Bayes estimator: the iteration starts near the equalizer structure."""
    family = (
        EstimatorKind.BAYES_B2
        if loss_kind is LossKind.ONE_MINUS_B_SQUARED
        else EstimatorKind.BAYES_B1
    )
    beta_star, _, _ = beta_scan(n_trials, loss_kind, family, grid_size=grid_size)
    table = estimator_table(family, n_trials, beta_star)
    log_binom = log_binomial_row(n_trials)
    est0 = table.first_components
    grid = np.linspace(0.0, 1.0, grid_size)
    risks, _ = kernels.risk_curve(est0, grid, log_binom, loss_kind.code)

    def objective(p):
        value, _ = kernels.risk_at(est0, float(p), log_binom, loss_kind.code)
        return float(value)

    refined = refine_top_maxima(objective, grid, risks, top=3, xtol=1e-8)
    locations = []
    for p, _ in refined:
        if all(abs(p - q) > 1e-6 for q in locations):
            locations.append(p)
        if len(locations) == 2:
            break
    if len(locations) == 1:
        mirror = 1.0 - locations[0]
        locations = [locations[0], mirror] if abs(mirror - locations[0]) > 1e-6 else locations
    weights = np.full(len(locations), 1.0 / len(locations))
    return DiscretePrior(np.array(sorted(locations)), weights)


def _encode(support: np.ndarray, weights: np.ndarray) -> np.ndarray:
    locs = logit(np.clip(support, 1e-12, 1.0 - 1e-12))
    if support.size == 1:
        return locs
    logw = np.log(np.clip(weights, 1e-13, None))
    return np.concatenate([locs, logw[1:] - logw[0]])


def _decode(x: np.ndarray, m_points: int):
    support = expit(x[:m_points])
    if m_points == 1:
        return support, np.ones(1)
    weights = softmax(np.concatenate([[0.0], x[m_points:]]))
    return support, weights


def _maximize_bayes_risk(starts, config: KempthorneConfig, rng, log_binom: np.ndarray):
    """Inner step: maximize the Bayes risk over priors with a fixed number
    of support points.

    Nelder-Mead on an unconstrained parameterization (logistic-transformed
    locations, softmax weights), run from the supplied warm starts plus
    seeded random restarts; convergence is the simplex diameter dropping
    below ``inner_tol``.
    """
    m_points = starts[0][0].size
    n_trials = config.N
    code = config.loss.code

    def negative_bayes_risk(x):
        support, weights = _decode(x, m_points)
        est0 = kernels.discrete_bayes_table(support, weights, n_trials, code)
        return -kernels.discrete_bayes_risk(support, weights, est0, log_binom, code)

    dim = m_points if m_points == 1 else 2 * m_points - 1
    x_starts = [_encode(s, w) for s, w in starts]
    for _ in range(config.inner_restarts):
        locs = rng.normal(0.0, 2.0, m_points)
        wl = rng.normal(0.0, 1.0, m_points - 1)
        x_starts.append(np.concatenate([locs, wl]) if m_points > 1 else locs)

    options = {
        "xatol": config.inner_tol,
        "fatol": np.inf,
        "adaptive": True,
    }
    if config.inner_maxiter is not None:
        options["maxiter"] = config.inner_maxiter
        options["maxfev"] = config.inner_maxiter

    best_x, best_fun = None, np.inf
    for x0 in x_starts:
        result = minimize(negative_bayes_risk, x0, method="Nelder-Mead", options=options)
        if result.fun < best_fun:
            best_x, best_fun = result.x, result.fun
    if best_x is None or not np.isfinite(best_fun):
        raise OptimizationError(
            f"inner Bayes-risk maximization failed over {len(x_starts)} starts "
            f"(dim {dim}, best objective {best_fun!r})"
        )
    support, weights = _decode(best_x, m_points)
    return support, weights, -float(best_fun)


def _merge_close_points(support: np.ndarray, weights: np.ndarray):
    """Merge support points closer than the dedup tolerance, adding weights.

    Nelder-Mead can collapse two atoms onto one location; near-duplicates
    degrade the conditioning of later inner optimizations.
    """
    order = np.argsort(support)
    sup, w = support[order], weights[order]
    merged_sup, merged_w = [sup[0]], [w[0]]
    for p, wt in zip(sup[1:], w[1:]):
        if p - merged_sup[-1] < _MERGE_TOL:
            total = merged_w[-1] + wt
            if total > 0.0:
                merged_sup[-1] = (merged_sup[-1] * merged_w[-1] + p * wt) / total
            merged_w[-1] = total
        else:
            merged_sup.append(p)
            merged_w.append(wt)
    return np.array(merged_sup), np.array(merged_w)


def kempthorne(config: KempthorneConfig, init: Optional[DiscretePrior] = None) -> KempthorneResult:
    """Least-favorable-prior iteration for the binomial model.

    Each outer iteration maximizes the Bayes risk over priors with the
    current number of support points, records the achieved value as the
    lower bound, computes the worst-case risk of the resulting Bayes
    estimator as the upper bound, and, if the relative gap exceeds the
    tolerance, adds a support point at the worst-case argmax with the
    mixing weight (existing weights are reduced uniformly, floored at 0,
    and renormalized).
    """
    n_trials = config.N
    code = config.loss.code
    log_binom = log_binomial_row(n_trials)
    if init is None:
        init = default_initial_prior(n_trials, config.loss, grid_size=config.max_risk_grid)
    if init.size < 1:
        raise ValidationError("initial prior must be nonempty")

    rng = np.random.default_rng(config.seed)
    support, weights = init.support.copy(), init.weights.copy()
    warm_starts = []
    avg_history, max_history = [], []
    avg_risk = upper = float("nan")
    diff = float("inf")
    converged = False
    outer = 0

    for outer in range(1, config.max_outer_iters + 1):
        starts = [(support, weights)] + warm_starts
        support, weights, avg_risk = _maximize_bayes_risk(starts, config, rng, log_binom)
        support, weights = _merge_close_points(support, weights)
        est0 = kernels.discrete_bayes_table(support, weights, n_trials, code)
        avg_risk = kernels.discrete_bayes_risk(support, weights, est0, log_binom, code)

        table = _table_from_first_components(est0, n_trials)
        p_star, upper = max_risk(table, config.loss, grid_size=config.max_risk_grid)
        support_risks, _ = kernels.risk_curve(est0, support, log_binom, code)
        upper = max(upper, float(support_risks.max()))

        # A single-atom prior has zero Bayes risk; the gap is then maximal
        # unless the risk curve is identically zero too.
        if avg_risk > 0.0:
            diff = abs(avg_risk - upper) / avg_risk
        else:
            diff = 0.0 if upper == 0.0 else float("inf")
        avg_history.append(float(avg_risk))
        max_history.append(float(upper))
        if diff <= config.tol:
            converged = True
            break
        if outer == config.max_outer_iters:
            break

        # Grow the support at the worst-case point with the mixing weight.
        m_old = support.size
        grown_support = np.append(support, p_star)
        grown_weights = np.append(weights - config.alpha_mix / m_old, config.alpha_mix)
        grown_weights[grown_weights < 0.0] = 0.0
        grown_weights /= grown_weights.sum()
        # Warm start preserving the previous optimum: new atom at ~zero weight.
        tiny = 1e-12
        warm_weights = np.append(weights * (1.0 - tiny), tiny)
        warm_starts = [(grown_support.copy(), warm_weights)]
        support, weights = grown_support, grown_weights

    # Atoms the optimizer drove to numerically-zero mass are dust: dropping
    # them moves every risk by less than the 1e-9 bound slack.  The logistic
    # parameterization also cannot land exactly on a corner; snap sub-1e-12
    # round-off so corner atoms report as exact 0 and 1.
    alive = weights > 1e-9
    support, weights = support[alive], weights[alive]
    support = np.where(support < 1e-12, 0.0, support)
    support = np.where(support > 1.0 - 1e-12, 1.0, support)
    unique, inverse = np.unique(support, return_inverse=True)
    if unique.size < support.size:
        merged = np.zeros(unique.size)
        np.add.at(merged, inverse, weights)
        support, weights = unique, merged
    prior = DiscretePrior(support, weights)
    return KempthorneResult(
        prior=prior,
        avg_risk=float(avg_risk),
        max_risk=float(upper),
        diff=float(diff),
        outer_iters=outer,
        converged=converged,
        avg_risk_history=tuple(avg_history),
        max_risk_history=tuple(max_history),
    )
