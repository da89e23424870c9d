"""Independent reference implementations used as test oracles.

Everything here is deliberately built from different primitives than the
package: math.lgamma / math.comb instead of the package's Lanczos log-gamma,
numpy.linalg.eigvalsh instead of the Jacobi solver, direct power sums
instead of the log-space kernels, Gauss-Legendre quadrature instead of the
closed-form conjugate sums.
"""

from __future__ import annotations

from math import comb, exp, lgamma, sqrt

import numpy as np


def log_beta_ref(a: float, b: float) -> float:
    return lgamma(a) + lgamma(b) - lgamma(a + b)


def conjugate_moment_matrix_ref(beta: float, n_trials: int, n: int) -> np.ndarray:
    """E[sqrt(p_i p_j)] for a Beta(beta+n, beta+N-n) posterior, written as
    the ratio-of-Beta-functions matrix."""
    denom = log_beta_ref(beta + n, beta + n_trials - n)
    m00 = exp(log_beta_ref(beta + n + 1.0, beta + n_trials - n) - denom)
    m01 = exp(log_beta_ref(beta + n + 0.5, beta + n_trials - n + 0.5) - denom)
    m11 = exp(log_beta_ref(beta + n, beta + n_trials - n + 1.0) - denom)
    return np.array([[m00, m01], [m01, m11]])


def sqrt_moment_vector_ref(alpha) -> np.ndarray:
    """E[sqrt(p_k)] for a Dirichlet posterior, via math.lgamma."""
    alpha = np.asarray(alpha, dtype=float)
    a0 = float(alpha.sum())
    return np.array(
        [exp(lgamma(a + 0.5) - lgamma(a) + lgamma(a0) - lgamma(a0 + 0.5)) for a in alpha]
    )


def pointwise_risk_ref(p0: float, first_components, loss_code: int) -> float:
    """Binomial risk sum with exact integer binomial coefficients."""
    t = np.asarray(first_components, dtype=float)
    n_trials = t.size - 1
    total = 0.0
    for n in range(n_trials + 1):
        if p0 == 0.0:
            w = 1.0 if n == 0 else 0.0
        elif p0 == 1.0:
            w = 1.0 if n == n_trials else 0.0
        else:
            w = comb(n_trials, n) * p0**n * (1.0 - p0) ** (n_trials - n)
        if w == 0.0:
            continue
        b = sqrt(p0 * t[n]) + sqrt((1.0 - p0) * (1.0 - t[n]))
        total += w * ((1.0 - b) if loss_code == 1 else (1.0 - b * b))
    return total


def bayes_risk_quadrature_ref(
    beta: float, first_components, loss_code: int, nodes: int = 256
) -> float:
    """Conjugate-prior Bayes risk by Gauss-Legendre quadrature in p.

    The substitution p = sin^2(theta) removes the endpoint square-root
    singularities of both the Beta(1/2) density and the affinity cross
    term, so 256 nodes reach ~1e-14 for beta in {1/2, 1, 3/2}.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = (x + 1.0) * (np.pi / 4.0)
    wt = w * (np.pi / 4.0)
    p = np.sin(theta) ** 2
    log_norm = log_beta_ref(beta, beta)
    density = np.exp((beta - 1.0) * (np.log(p) + np.log1p(-p)) - log_norm) * np.sin(2.0 * theta)
    risks = np.array([pointwise_risk_ref(pi, first_components, loss_code) for pi in p])
    return float((wt * density * risks).sum())


def dirichlet_mc_moments(alpha, draws: int, seed: int):
    """Monte-Carlo E[sqrt(p_k)] and E[sqrt(p_i p_j)] with standard errors.

    Returns (vec, vec_se, mat, mat_se) from `draws` normalized-Gamma
    samples.
    """
    alpha = np.asarray(alpha, dtype=float)
    rng = np.random.default_rng(seed)
    g = rng.gamma(shape=alpha, size=(draws, alpha.size))
    p = g / g.sum(axis=1, keepdims=True)
    roots = np.sqrt(p)
    vec = roots.mean(axis=0)
    vec_se = roots.std(axis=0, ddof=1) / np.sqrt(draws)
    prods = roots[:, :, None] * roots[:, None, :]
    mat = prods.mean(axis=0)
    mat_se = prods.std(axis=0, ddof=1) / np.sqrt(draws)
    return vec, vec_se, mat, mat_se


def random_simplex_points(rng, count: int, dim: int) -> np.ndarray:
    """Simplex points via normalized exponentials (occasional exact zeros
    are injected by the callers that need boundary coverage)."""
    raw = rng.exponential(1.0, size=(count, dim))
    return raw / raw.sum(axis=1, keepdims=True)
