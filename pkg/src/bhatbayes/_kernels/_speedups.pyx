# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the binomial (K = 2) hot paths.

Scalar-loop twins of `_pure.py`: pointwise risk of an estimator table,
risk curves over parameter grids, and the Bayes table/risk of a discrete
prior.  Likelihood sums run in log space with max subtraction so boundary
support points and large N stay exact.
"""

import numpy as np

from libc.math cimport exp, hypot, log, log1p, sqrt

LOSS_ONE_MINUS_B = 1
LOSS_ONE_MINUS_B_SQUARED = 2

cdef double NEG_INF = float("-inf")


cdef inline double _loss_term(double p0, double t0, int loss_code) nogil:
    cdef double b = sqrt(p0 * t0) + sqrt((1.0 - p0) * (1.0 - t0))
    if loss_code == 1:
        return 1.0 - b
    return 1.0 - b * b


cdef double _risk_at(
    const double[::1] est0,
    double p0,
    const double[::1] log_binom,
    int loss_code,
    double* pmf_total,
) nogil:
    cdef Py_ssize_t n_trials = log_binom.shape[0] - 1
    cdef Py_ssize_t n
    cdef double lp, lq, w, risk = 0.0, total = 0.0
    if p0 <= 0.0:
        pmf_total[0] = 1.0
        return _loss_term(0.0, est0[0], loss_code)
    if p0 >= 1.0:
        pmf_total[0] = 1.0
        return _loss_term(1.0, est0[n_trials], loss_code)
    lp = log(p0)
    lq = log1p(-p0)
    for n in range(n_trials + 1):
        w = exp(log_binom[n] + n * lp + (n_trials - n) * lq)
        total += w
        risk += w * _loss_term(p0, est0[n], loss_code)
    pmf_total[0] = total
    return risk


def risk_at(const double[::1] est0, double p0, const double[::1] log_binom, int loss_code):
    """Pointwise risk at p0; returns (risk, pmf_total) so callers can audit."""
    cdef double total = 0.0
    cdef double risk = _risk_at(est0, p0, log_binom, loss_code, &total)
    return risk, total


def risk_curve(const double[::1] est0, grid, const double[::1] log_binom, int loss_code):
    """Pointwise risk at every grid point; returns (risks, worst pmf drift)."""
    cdef const double[::1] g = np.ascontiguousarray(grid, dtype=np.float64)
    out = np.empty(g.shape[0])
    cdef double[::1] risks = out
    cdef Py_ssize_t i
    cdef double total, drift = 0.0, dev
    for i in range(g.shape[0]):
        risks[i] = _risk_at(est0, g[i], log_binom, loss_code, &total)
        dev = total - 1.0
        if dev < 0.0:
            dev = -dev
        if g[i] > 0.0 and g[i] < 1.0 and dev > drift:
            drift = dev
    return out, drift


cdef inline double _top_eigen_first_component(double mean0, double mean1, double cross) nogil:
    # First component of the squared leading eigenvector of [[a, c], [c, b]].
    # Formulated to avoid cancellation; cross = 0 degenerates to a diagonal
    # matrix where the larger diagonal entry wins (index 0 on ties).
    cdef double half_gap, radius, v0, v1
    if cross <= 0.0:
        return 1.0 if mean0 >= mean1 else 0.0
    half_gap = 0.5 * (mean0 - mean1)
    radius = hypot(half_gap, cross)
    if half_gap >= 0.0:
        v0 = radius + half_gap
        v1 = cross
    else:
        v0 = cross
        v1 = radius - half_gap
    return v0 * v0 / (v0 * v0 + v1 * v1)


def discrete_bayes_table(support, weights, int n_trials, int loss_code):
    """First components of the Bayes table for a discrete prior on p0.

    Outcomes impossible under the support fall back to the prior-mean
    estimate, which never enters a risk sum over that support.
    """
    cdef const double[::1] sup = np.ascontiguousarray(support, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t m_points = sup.shape[0]
    out = np.empty(n_trials + 1)
    cdef double[::1] est0 = out

    log_p_arr = np.empty(m_points)
    log_q_arr = np.empty(m_points)
    cdef double[::1] log_p = log_p_arr
    cdef double[::1] log_q = log_q_arr
    cdef Py_ssize_t m, n
    cdef double prior_mean = 0.0
    cdef double shift, ll, u, total, mean0, cross, v0, v1

    for m in range(m_points):
        prior_mean += w[m] * sup[m]
        log_p[m] = log(sup[m]) if sup[m] > 0.0 else NEG_INF
        log_q[m] = log1p(-sup[m]) if sup[m] < 1.0 else NEG_INF

    for n in range(n_trials + 1):
        shift = NEG_INF
        for m in range(m_points):
            if w[m] <= 0.0:
                continue
            ll = _loglik(log_p[m], log_q[m], n, n_trials)
            if ll > shift:
                shift = ll
        if shift == NEG_INF:
            est0[n] = prior_mean
            continue
        total = 0.0
        mean0 = 0.0
        cross = 0.0
        v0 = 0.0
        v1 = 0.0
        for m in range(m_points):
            if w[m] <= 0.0:
                continue
            ll = _loglik(log_p[m], log_q[m], n, n_trials)
            if ll == NEG_INF:
                continue
            u = w[m] * exp(ll - shift)
            total += u
            if loss_code == 2:
                mean0 += u * sup[m]
                cross += u * sqrt(sup[m] * (1.0 - sup[m]))
            else:
                v0 += u * sqrt(sup[m])
                v1 += u * sqrt(1.0 - sup[m])
        if loss_code == 2:
            mean0 /= total
            cross /= total
            est0[n] = _top_eigen_first_component(mean0, 1.0 - mean0, cross)
        else:
            v0 /= total
            v1 /= total
            est0[n] = v0 * v0 / (v0 * v0 + v1 * v1)
    return out


cdef inline double _loglik(double log_p, double log_q, Py_ssize_t n, Py_ssize_t n_trials) nogil:
    cdef double ll = 0.0
    if n > 0:
        if log_p == NEG_INF:
            return NEG_INF
        ll += n * log_p
    if n < n_trials:
        if log_q == NEG_INF:
            return NEG_INF
        ll += (n_trials - n) * log_q
    return ll


def discrete_bayes_risk(support, weights, const double[::1] est0, const double[::1] log_binom, int loss_code):
    """Bayes risk of the table `est0` under the discrete prior: sum of
    weight times pointwise risk at each support point."""
    cdef const double[::1] sup = np.ascontiguousarray(support, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t m
    cdef double total = 0.0, pmf_total = 0.0
    for m in range(sup.shape[0]):
        total += w[m] * _risk_at(est0, sup[m], log_binom, loss_code, &pmf_total)
    return total
