"""Pure-Python acceptance / VCG kernels.

Fallback for :mod:`fedvcg._core`.  Both implementations follow the same
greedy procedure with the same arithmetic, so their results agree to the
last few ulps; tests pin them together at 1e-12.

The greedy rule processes owners in increasing cost-type order (ties keep
the original owner order).  While no owner has been turned away, owner k is

* fully accepted when the marginal revenue of its whole contribution,
  ``alpha / (2 sqrt(mass + q_k))``, still covers its cost type;
* rejected when the marginal revenue already fell to its cost type before
  it contributes anything (never the case for the first owner, whose
  empty-mass marginal revenue is unbounded);
* otherwise partially accepted up to the point where marginal revenue
  equals its cost type.

After the first rejection or partial acceptance every later owner is
rejected: the marginal revenue is already at or below their cost types.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "pure"


def _greedy_fill(q, gamma, alpha, order, skip, eta):
    """Fill `eta` for owners in sorted order, return the maximal surplus.

    `skip` marks an owner treated as absent (-1 for none); its entry in
    `eta` is left at zero and excluded from the surplus.
    """
    n = q.shape[0]
    acc = 0.0  # accepted quality mass so far
    open_ = True
    for j in range(n):
        k = order[j]
        if k == skip:
            continue
        if not open_:
            eta[k] = 0.0
            continue
        qk = q[k]
        gk = gamma[k]
        thr_in = alpha / (2.0 * math.sqrt(acc + qk)) if acc + qk > 0.0 else math.inf
        if thr_in >= gk:
            eta[k] = 1.0
            acc += qk
            continue
        thr_out = alpha / (2.0 * math.sqrt(acc)) if acc > 0.0 else math.inf
        if thr_out <= gk:
            eta[k] = 0.0
        elif qk <= 0.0:
            eta[k] = 0.0
        else:
            half_price = alpha / (2.0 * gk)
            frac = (half_price * half_price - acc) / qk
            frac = min(1.0, max(0.0, frac))
            eta[k] = frac
            acc += qk * frac
        open_ = False

    rev_mass = 0.0
    cost_sum = 0.0
    for k in range(n):
        if k == skip:
            continue
        accepted = q[k] * eta[k]
        rev_mass += accepted
        cost_sum += gamma[k] * accepted
    return alpha * math.sqrt(rev_mass) - cost_sum


def solve_accept(q, gamma, alpha):
    """Maximal-surplus acceptance vector and surplus for one instance."""
    q = np.ascontiguousarray(q, dtype=np.float64)
    gamma = np.ascontiguousarray(gamma, dtype=np.float64)
    order = np.argsort(gamma, kind="stable")
    eta = np.zeros(q.shape[0])
    surplus = _greedy_fill(q, gamma, alpha, order, -1, eta)
    return eta, surplus


def vcg_bundle(q, gamma, alpha):
    """Acceptance, surplus, per-owner exclusion surpluses and VCG payments.

    Returns ``(eta, surplus, surplus_without, tau)`` where
    ``surplus_without[i]`` is the maximal surplus of the economy with owner
    i absent and ``tau[i] = surplus - surplus_without[i] + cost_i`` with the
    linear cost of owner i's accepted quality.
    """
    q = np.ascontiguousarray(q, dtype=np.float64)
    gamma = np.ascontiguousarray(gamma, dtype=np.float64)
    n = q.shape[0]
    order = np.argsort(gamma, kind="stable")
    eta = np.zeros(n)
    surplus = _greedy_fill(q, gamma, alpha, order, -1, eta)
    surplus_without = np.empty(n)
    tau = np.empty(n)
    scratch = np.empty(n)
    for i in range(n):
        scratch[:] = 0.0
        surplus_without[i] = _greedy_fill(q, gamma, alpha, order, i, scratch)
        tau[i] = surplus - surplus_without[i] + gamma[i] * q[i] * eta[i]
    return eta, surplus, surplus_without, tau
