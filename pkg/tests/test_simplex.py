"""Simplex vectors and the Bhattacharyya losses."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhatbayes import LossKind, ProbVector, bhattacharyya, loss
from bhatbayes.errors import DimensionMismatch, ValidationError


@st.composite
def simplex_pairs(draw):
    dim = draw(st.integers(min_value=2, max_value=5))
    def point():
        raw = draw(
            st.lists(
                st.floats(min_value=1e-9, max_value=1.0, allow_nan=False),
                min_size=dim,
                max_size=dim,
            )
        )
        arr = np.array(raw)
        return ProbVector(arr / arr.sum())
    return point(), point()


class TestProbVector:
    def test_normalizes_and_freezes(self):
        p = ProbVector([0.2, 0.3, 0.5])
        assert p.dim == 3
        assert p.entries.sum() == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(ValueError):
            p.entries[0] = 0.9

    def test_clamps_roundoff_negatives(self):
        p = ProbVector([-1e-13, 0.5, 0.5 + 1e-13])
        assert p.entries[0] == 0.0
        assert p.entries.min() >= 0.0

    def test_rejects_real_negatives(self):
        with pytest.raises(ValidationError):
            ProbVector([-1e-6, 0.5, 0.5])

    def test_rejects_sum_drift(self):
        with pytest.raises(ValidationError):
            ProbVector([0.5, 0.5 + 1e-6])
        # drift within 1e-9 is renormalized instead
        p = ProbVector([0.5, 0.5 + 1e-10])
        assert p.entries.sum() == pytest.approx(1.0, abs=1e-15)

    def test_rejects_scalar_and_single_entry(self):
        with pytest.raises(ValidationError):
            ProbVector([1.0])
        with pytest.raises(ValidationError):
            ProbVector([[0.5, 0.5]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            ProbVector([float("nan"), 1.0])


class TestBhattacharyya:
    def test_identical_distributions(self):
        p = ProbVector([0.5, 0.5])
        assert bhattacharyya(p, p) == 1.0

    def test_disjoint_support(self):
        assert bhattacharyya(ProbVector([1.0, 0.0]), ProbVector([0.0, 1.0])) == 0.0

    def test_hand_value(self):
        # sqrt(0.25*0.75) + sqrt(0.75*0.25) = sqrt(3)/2
        p, q = ProbVector([0.25, 0.75]), ProbVector([0.75, 0.25])
        expected = 2.0 * math.sqrt(0.1875)
        assert expected == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-15)
        assert bhattacharyya(p, q) == pytest.approx(expected, abs=1e-15)
        # independent arithmetic route
        assert bhattacharyya(p, q) == pytest.approx(
            float(np.sum(np.sqrt(p.entries) * np.sqrt(q.entries))), abs=1e-15
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            bhattacharyya(ProbVector([0.5, 0.5]), ProbVector([0.2, 0.3, 0.5]))


class TestLoss:
    def test_zero_at_truth(self):
        p = ProbVector([0.3, 0.7])
        assert loss(LossKind.ONE_MINUS_B, p, p) == 0.0

    def test_disjoint_squared(self):
        assert loss(
            LossKind.ONE_MINUS_B_SQUARED, ProbVector([1.0, 0.0]), ProbVector([0.0, 1.0])
        ) == 1.0

    def test_hand_value_squared(self):
        p, q = ProbVector([0.25, 0.75]), ProbVector([0.75, 0.25])
        assert loss(LossKind.ONE_MINUS_B_SQUARED, p, q) == pytest.approx(0.25, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            loss(LossKind.ONE_MINUS_B, ProbVector([0.5, 0.5]), ProbVector([0.2, 0.3, 0.5]))


@given(simplex_pairs())
@settings(max_examples=300, deadline=None)
def test_affinity_bounds_and_symmetry(pair):
    p, q = pair
    b_pq = bhattacharyya(p, q)
    assert 0.0 <= b_pq <= 1.0 + 1e-12
    assert b_pq == bhattacharyya(q, p)


@given(simplex_pairs())
@settings(max_examples=300, deadline=None)
def test_loss_identity_and_ordering(pair):
    p, q = pair
    l1 = loss(LossKind.ONE_MINUS_B, p, q)
    l2 = loss(LossKind.ONE_MINUS_B_SQUARED, p, q)
    b = bhattacharyya(p, q)
    assert abs(l2 - (1.0 - b) * (1.0 + b)) < 1e-12
    assert l2 <= 2.0 * l1 + 1e-12


@given(simplex_pairs())
@settings(max_examples=200, deadline=None)
def test_loss_vanishes_at_truth(pair):
    p, _ = pair
    assert abs(loss(LossKind.ONE_MINUS_B, p, p)) <= 1e-12
    assert abs(loss(LossKind.ONE_MINUS_B_SQUARED, p, p)) <= 1e-12
