"""Posterior representations and their square-root moments.

Every Bayes estimator in this package is a function of one of two moment
objects: the vector E[sqrt(p_k)] and the matrix E[sqrt(p_i p_j)].  For a
Dirichlet posterior both have closed forms as ratios of Gamma functions,
evaluated in log space; for a weighted particle set they are plain weighted
sums, which is the fallback for non-conjugate models (the Bayes analysis
depends on the posterior only, not on how the data were generated).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ValidationError
from .simplex import ProbVector
from .specfun import log_gamma

_SUM_DRIFT = 1e-9


@dataclass(frozen=True, eq=False)
class DirichletPosterior:
    """Dirichlet distribution on the K-simplex with concentrations alpha > 0.

    For the binomial model (K = 2) with a symmetric Beta(beta, beta) prior
    and n successes in N trials, alpha = (n + beta, N - n + beta); see
    :func:`posterior_update`.
    """

    alpha: np.ndarray

    def __post_init__(self):
        arr = np.array(self.alpha, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("Dirichlet needs a 1-D concentration vector with K >= 2")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ValidationError(f"Dirichlet concentrations must be positive, got {arr!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "alpha", arr)

    @property
    def dim(self) -> int:
        return self.alpha.size

    def sample(self, size: int, seed) -> np.ndarray:
        """Draw `size` points via normalized independent Gamma variates.

        A seed is required: every stochastic routine in this package is
        reproducible by construction.
        """
        if seed is None:
            raise ValidationError("sampling requires an explicit seed")
        rng = np.random.default_rng(seed)
        draws = rng.gamma(shape=self.alpha, size=(int(size), self.dim))
        return draws / draws.sum(axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class ParticlePosterior:
    """Discrete posterior: M points of the simplex with normalized weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        w = np.array(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 2:
            raise ValidationError("particle points must form an (M, K) array with M >= 1, K >= 2")
        if w.shape != (pts.shape[0],):
            raise ValidationError("need exactly one weight per particle")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(w)):
            raise ValidationError("particle points and weights must be finite")
        if np.any(w < -1e-12):
            raise ValidationError("particle weights must be nonnegative")
        w[w < 0.0] = 0.0
        total = w.sum()
        if abs(total - 1.0) > _SUM_DRIFT:
            raise ValidationError(f"particle weights sum to {total!r}, not 1")
        w /= total
        if np.any(pts < -1e-12):
            raise ValidationError("particle points must lie on the simplex")
        pts[pts < 0.0] = 0.0
        row_sums = pts.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > _SUM_DRIFT):
            raise ValidationError("every particle point must sum to 1")
        pts /= row_sums[:, None]
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @classmethod
    def point_mass(cls, p: ProbVector) -> "ParticlePosterior":
        return cls(points=p.entries[None, :], weights=np.array([1.0]))


Posterior = Union[DirichletPosterior, ParticlePosterior]


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    """The K x K symmetric matrix with entries E[sqrt(p_i p_j)].

    It is entrywise nonnegative, positive semidefinite (a mixture of rank-1
    projectors onto sqrt(p)), and has unit trace because the diagonal holds
    the posterior means E[p_k].
    """

    m: np.ndarray

    def __post_init__(self):
        mat = np.array(self.m, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValidationError("moment matrix must be square with K >= 2")
        if not np.all(np.isfinite(mat)):
            raise ValidationError("moment matrix entries must be finite")
        if np.max(np.abs(mat - mat.T)) > 1e-12:
            raise ValidationError("moment matrix must be symmetric to 1e-12")
        if np.any(mat < -1e-12) or np.any(mat > 1.0 + 1e-12):
            raise ValidationError("moment matrix entries must lie in [0, 1]")
        mat[mat < 0.0] = 0.0
        if abs(np.trace(mat) - 1.0) > 1e-10:
            raise ValidationError(f"moment matrix trace is {np.trace(mat)!r}, not 1")
        mat.setflags(write=False)
        object.__setattr__(self, "m", mat)

    @property
    def dim(self) -> int:
        return self.m.shape[0]


def sqrt_moment_vector(post: Posterior) -> np.ndarray:
    """E[sqrt(p_k)] per component.

    Dirichlet closed form: Gamma(alpha_k + 1/2) / Gamma(alpha_k) times
    Gamma(alpha_0) / Gamma(alpha_0 + 1/2) with alpha_0 the total
    concentration, evaluated in log space.  Particles: weighted sum of
    elementwise square roots.  Components lie in (0, 1] and the Euclidean
    norm is at most 1 (Jensen).
    """
    if isinstance(post, DirichletPosterior):
        a = post.alpha
        a0 = a.sum()
        return np.exp(log_gamma(a + 0.5) - log_gamma(a) + log_gamma(a0) - log_gamma(a0 + 0.5))
    if isinstance(post, ParticlePosterior):
        return post.weights @ np.sqrt(post.points)
    raise ValidationError(f"unsupported posterior type: {type(post).__name__}")


def moment_matrix(post: Posterior) -> MomentMatrix:
    """E[sqrt(p_i p_j)] as a :class:`MomentMatrix`.

    Dirichlet: off-diagonal (i, j) entries are
    exp(lnG(a_i+1/2) + lnG(a_j+1/2) - lnG(a_i) - lnG(a_j) + lnG(a_0) - lnG(a_0+1))
    and the diagonal is the mean a_i / a_0.  Particles: the weighted mixture
    of outer products sqrt(p) sqrt(p)^T.
    """
    if isinstance(post, DirichletPosterior):
        a = post.alpha
        a0 = a.sum()
        half_ratio = np.exp(log_gamma(a + 0.5) - log_gamma(a))
        mat = np.outer(half_ratio, half_ratio) * np.exp(log_gamma(a0) - log_gamma(a0 + 1.0))
        np.fill_diagonal(mat, a / a0)
        return MomentMatrix(mat)
    if isinstance(post, ParticlePosterior):
        roots = np.sqrt(post.points)
        mat = np.einsum("m,mi,mj->ij", post.weights, roots, roots)
        mat = 0.5 * (mat + mat.T)
        return MomentMatrix(mat)
    raise ValidationError(f"unsupported posterior type: {type(post).__name__}")


def posterior_mean(post: Posterior) -> ProbVector:
    """E[p], always a point of the simplex."""
    if isinstance(post, DirichletPosterior):
        return ProbVector(post.alpha / post.alpha.sum())
    if isinstance(post, ParticlePosterior):
        return ProbVector(post.weights @ post.points)
    raise ValidationError(f"unsupported posterior type: {type(post).__name__}")


def posterior_update(prior_beta: float, n_trials: int, n_successes: int) -> DirichletPosterior:
    """Conjugate binomial update: Beta(beta, beta) prior, n successes in N trials."""
    if not prior_beta > 0.0:
        raise ValidationError(f"prior concentration must be positive, got {prior_beta!r}")
    if n_trials < 0 or n_successes < 0 or n_successes > n_trials:
        raise ValidationError(
            f"need 0 <= n <= N, got n={n_successes}, N={n_trials}"
        )
    return DirichletPosterior(
        np.array([n_successes + prior_beta, n_trials - n_successes + prior_beta])
    )
