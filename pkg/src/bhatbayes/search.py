"""One-dimensional maximization: dense scan plus golden-section refinement.

Risk curves here are smooth with a handful of local maxima, so a dense grid
finds every basin and golden-section polishes the best few brackets to the
requested argument tolerance.
"""

from __future__ import annotations

import numpy as np

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, xtol: float):
    """Maximize a unimodal f on [lo, hi] to |argmax error| < xtol.

    Returns (x, f(x)) for the best point actually evaluated, endpoints
    included.
    """
    a, b = float(lo), float(hi)
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    while b - a > xtol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        if f1 > best_f:
            best_x, best_f = x1, f1
        if f2 > best_f:
            best_x, best_f = x2, f2
    for x_end in (lo, hi):
        f_end = f(x_end)
        if f_end > best_f:
            best_x, best_f = x_end, f_end
    return best_x, best_f


def local_maxima_indices(values: np.ndarray) -> np.ndarray:
    """Indices of grid-local maxima, endpoints eligible."""
    v = np.asarray(values, dtype=float)
    left = np.empty(v.size, dtype=bool)
    right = np.empty(v.size, dtype=bool)
    left[0] = True
    left[1:] = v[1:] >= v[:-1]
    right[-1] = True
    right[:-1] = v[:-1] >= v[1:]
    return np.flatnonzero(left & right)


def refine_top_maxima(f, xs: np.ndarray, values: np.ndarray, *, top: int, xtol: float):
    """Golden-refine the `top` best grid-local maxima of the sampled curve.

    Returns a list of (x, f(x)) pairs sorted by value, best first.  The
    bracket for each maximum is its neighboring grid interval, so the result
    never falls below the sampled value at that grid point.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    candidates = local_maxima_indices(values)
    order = candidates[np.argsort(values[candidates])[::-1]]
    refined = []
    for idx in order[:top]:
        lo = xs[idx - 1] if idx > 0 else xs[0]
        hi = xs[idx + 1] if idx < xs.size - 1 else xs[-1]
        x_best, f_best = golden_section_max(f, lo, hi, xtol)
        if values[idx] > f_best:
            x_best, f_best = xs[idx], values[idx]
        refined.append((float(x_best), float(f_best)))
    refined.sort(key=lambda pair: pair[1], reverse=True)
    return refined
