"""Probability vectors on the simplex and the Bhattacharyya-type losses.

The Bhattacharyya coefficient B(p, q) = sum_k sqrt(p_k q_k) measures the
overlap of two distributions: 1 iff they coincide, 0 iff their supports are
disjoint.  Two losses are built on it, 1 - B and 1 - B^2 (the latter is the
classical fidelity used as a distinguishability measure).  Boundary points
of the simplex are first-class inputs: sqrt(0) is an exact 0, never a NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, ValidationError

# Construction clamps round-off-sized negative entries; anything larger is a
# hard error.  Totals may drift from 1 by at most _SUM_DRIFT before rejection.
_NEGATIVE_CLAMP = -1e-12
_SUM_DRIFT = 1e-9


class LossKind(Enum):
    """The two Bhattacharyya losses: 1 - B and 1 - B^2."""

    ONE_MINUS_B = "b"
    ONE_MINUS_B_SQUARED = "b2"

    @property
    def code(self) -> int:
        """Integer tag understood by the numeric kernels (1 or 2)."""
        return 1 if self is LossKind.ONE_MINUS_B else 2


@dataclass(frozen=True, eq=False)
class ProbVector:
    """An immutable point of the K-simplex (K >= 2).

    Entries are validated (nonnegative up to round-off, total within 1e-9
    of 1), tiny negatives are clamped to zero, and the result is normalized
    so the stored total is 1 to machine precision.  Instances are safe to
    share across threads.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 1:
            raise ValidationError("probability vector must be one-dimensional")
        if arr.size < 2:
            raise ValidationError(f"probability vector needs K >= 2 entries, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("probability vector entries must be finite")
        if np.any(arr < _NEGATIVE_CLAMP):
            raise ValidationError(
                f"negative probability entry {arr.min():.3e} exceeds round-off tolerance"
            )
        arr[arr < 0.0] = 0.0
        total = arr.sum()
        if abs(total - 1.0) > _SUM_DRIFT:
            raise ValidationError(f"probability entries sum to {total!r}, not 1")
        arr /= total
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.size

    def __getitem__(self, k: int) -> float:
        return float(self.entries[k])

    def __iter__(self):
        return iter(self.entries.tolist())

    def __repr__(self):
        body = ", ".join(f"{x:.12g}" for x in self.entries)
        return f"ProbVector([{body}])"


def _check_same_dim(p: ProbVector, q: ProbVector):
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimension mismatch: {p.dim} vs {q.dim}")


def bhattacharyya(p: ProbVector, q: ProbVector) -> float:
    """Overlap sum_k sqrt(p_k q_k); symmetric, in [0, 1], and 1 iff p == q."""
    _check_same_dim(p, q)
    return float(np.sqrt(p.entries * q.entries).sum())


def loss(kind: LossKind, p: ProbVector, q: ProbVector) -> float:
    """Loss of reporting q when the truth is p, under the chosen kind."""
    b = bhattacharyya(p, q)
    if kind is LossKind.ONE_MINUS_B:
        return 1.0 - b
    return 1.0 - b * b
