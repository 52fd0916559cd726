# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled acceptance / VCG kernels.

Same greedy procedure as :mod:`fedvcg._core_py`; see that module for the
algorithmic commentary.  This version exists because training and the
property suites solve hundreds of thousands of small instances.
"""

from libc.math cimport sqrt, INFINITY

import numpy as np

NAME = "compiled"


cdef double _greedy_fill(const double[::1] q, const double[::1] gamma, double alpha,
                         const Py_ssize_t[::1] order, Py_ssize_t skip,
                         double[::1] eta) noexcept nogil:
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t j, k
    cdef double acc = 0.0
    cdef bint open_ = True
    cdef double qk, gk, thr_in, thr_out, half_price, frac
    cdef double rev_mass = 0.0, cost_sum = 0.0, accepted

    for j in range(n):
        k = order[j]
        if k == skip:
            continue
        if not open_:
            eta[k] = 0.0
            continue
        qk = q[k]
        gk = gamma[k]
        if acc + qk > 0.0:
            thr_in = alpha / (2.0 * sqrt(acc + qk))
        else:
            thr_in = INFINITY
        if thr_in >= gk:
            eta[k] = 1.0
            acc += qk
            continue
        if acc > 0.0:
            thr_out = alpha / (2.0 * sqrt(acc))
        else:
            thr_out = INFINITY
        if thr_out <= gk:
            eta[k] = 0.0
        elif qk <= 0.0:
            eta[k] = 0.0
        else:
            half_price = alpha / (2.0 * gk)
            frac = (half_price * half_price - acc) / qk
            if frac < 0.0:
                frac = 0.0
            elif frac > 1.0:
                frac = 1.0
            eta[k] = frac
            acc += qk * frac
        open_ = False

    for k in range(n):
        if k == skip:
            continue
        accepted = q[k] * eta[k]
        rev_mass += accepted
        cost_sum += gamma[k] * accepted
    return alpha * sqrt(rev_mass) - cost_sum


def solve_accept(q, gamma, double alpha):
    """Maximal-surplus acceptance vector and surplus for one instance."""
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    order_arr = np.argsort(np.asarray(gv), kind="stable").astype(np.intp)
    cdef Py_ssize_t[::1] order = order_arr
    eta_arr = np.zeros(qv.shape[0])
    cdef double[::1] eta = eta_arr
    cdef double surplus = _greedy_fill(qv, gv, alpha, order, -1, eta)
    return eta_arr, surplus


def vcg_bundle(q, gamma, double alpha):
    """Acceptance, surplus, per-owner exclusion surpluses and VCG payments."""
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef Py_ssize_t n = qv.shape[0]
    order_arr = np.argsort(np.asarray(gv), kind="stable").astype(np.intp)
    cdef Py_ssize_t[::1] order = order_arr
    eta_arr = np.zeros(n)
    cdef double[::1] eta = eta_arr
    cdef double surplus = _greedy_fill(qv, gv, alpha, order, -1, eta)
    minus_arr = np.empty(n)
    tau_arr = np.empty(n)
    scratch_arr = np.empty(n)
    cdef double[::1] minus = minus_arr
    cdef double[::1] tau = tau_arr
    cdef double[::1] scratch = scratch_arr
    cdef Py_ssize_t i, k
    with nogil:
        for i in range(n):
            for k in range(n):
                scratch[k] = 0.0
            minus[i] = _greedy_fill(qv, gv, alpha, order, i, scratch)
            tau[i] = surplus - minus[i] + gv[i] * qv[i] * eta[i]
    return eta_arr, surplus, minus_arr, tau_arr
