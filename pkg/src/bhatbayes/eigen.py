"""Cyclic Jacobi eigensolver for the small symmetric matrices used here.

Matrices in this package are moment matrices: symmetric, entrywise
nonnegative, at most 16 x 16.  Jacobi rotations are exact-ish at these
sizes and keep the package free of LAPACK for its core path.  Convergence
is declared when the off-diagonal Frobenius mass drops below 1e-14, which
bounds the eigenpair residual well inside the 1e-11 contract.
"""

from __future__ import annotations

import numpy as np

from .errors import EigenConvergenceError, ValidationError

MAX_DIM = 16
OFF_DIAGONAL_TOL = 1e-14
MAX_SWEEPS = 100
DEGENERACY_GAP = 1e-12
RESIDUAL_TOL = 1e-11
_NEGATIVE_CLAMP = -1e-12


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt((off * off).sum()))


def jacobi_eigensystem(matrix, *, off_tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS):
    """Diagonalize a small symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvectors as columns, in the
    order the diagonal ends up in (unsorted).  Raises
    :class:`EigenConvergenceError` if the sweep cap is exhausted first.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix must be square")
    k = a.shape[0]
    if k > MAX_DIM:
        raise ValidationError(f"Jacobi solver is limited to K <= {MAX_DIM}, got {k}")
    if np.max(np.abs(a - a.T)) > 1e-10:
        raise ValidationError("matrix must be symmetric to 1e-10")
    a = 0.5 * (a + a.T)
    v = np.eye(k)

    for sweep in range(max_sweeps + 1):
        off = _off_diagonal_mass(a)
        if off < off_tol:
            return np.diag(a).copy(), v
        if sweep == max_sweeps:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise EigenConvergenceError(
        f"Jacobi sweeps exhausted after {max_sweeps} sweeps "
        f"(off-diagonal mass {off:.3e}, tolerance {off_tol:.1e})",
        sweeps=max_sweeps,
        off_diagonal=off,
    )


def top_eigenpair(matrix, *, max_sweeps: int = MAX_SWEEPS):
    """Maximal eigenvalue and its entrywise-nonnegative unit eigenvector.

    The matrix must be symmetric and entrywise nonnegative, so a nonnegative
    (Perron) representative of the top eigenvector exists.  Under degeneracy
    (eigenvalue gap below 1e-12) the returned vector is the sign-normalized
    basis candidate with the largest minimum entry, ties broken by the
    lowest column index, which keeps results deterministic.
    """
    a = np.array(matrix, dtype=float)
    if np.any(a < _NEGATIVE_CLAMP):
        raise ValidationError("top_eigenpair requires entrywise-nonnegative input")
    a[a < 0.0] = 0.0
    eigenvalues, vectors = jacobi_eigensystem(a, max_sweeps=max_sweeps)
    top = float(eigenvalues.max())

    best_vec = None
    best_score = -np.inf
    for idx in np.flatnonzero(eigenvalues >= top - DEGENERACY_GAP):
        vec = vectors[:, idx].copy()
        lead = np.argmax(np.abs(vec))
        if vec[lead] < 0.0:
            vec = -vec
        score = float(vec.min())
        if score > best_score + DEGENERACY_GAP:
            best_score = score
            best_vec = vec

    vec = best_vec
    vec[(vec > _NEGATIVE_CLAMP) & (vec < 0.0)] = 0.0
    if np.any(vec < 0.0):
        raise EigenConvergenceError(
            f"no nonnegative top eigenvector representative (min entry {vec.min():.3e})",
            off_diagonal=_off_diagonal_mass(a),
        )
    vec = vec / np.sqrt(vec @ vec)

    residual = float(np.linalg.norm(a @ vec - top * vec))
    if residual > RESIDUAL_TOL:
        raise EigenConvergenceError(
            f"top eigenpair residual {residual:.3e} exceeds {RESIDUAL_TOL:.1e}",
            residual=residual,
            off_diagonal=_off_diagonal_mass(a),
        )
    return top, vec
