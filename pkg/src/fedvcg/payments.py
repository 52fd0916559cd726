"""VCG payments and the feasibility conditions around them.

The VCG payment to owner i is the owner's marginal contribution to the
maximal surplus plus a reimbursement of its cost:

    tau_i = S* - S_without_i + cost_i(accepted quality_i)

Total payments add a trained adjustment on top of tau.  This module also
evaluates the individual-rationality and weak-budget-balance slacks of a
payment vector and the prior-range condition under which adjustments
satisfying both exist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .economy import (
    EconomicSpec,
    Instance,
    cost,
    revenue,
    validate_acceptance,
    _as_owner_vector,
)
from .errors import DimensionError
from .solver import _require_standard, solve_closed_form


@dataclass(frozen=True, eq=False)
class VcgComputation:
    """Everything the VCG step produces for one instance."""

    surplus: float
    surplus_without: np.ndarray
    vcg_payments: np.ndarray
    acceptance: np.ndarray

    @property
    def marginal_contributions(self) -> np.ndarray:
        """surplus - surplus_without, per owner; non-negative for valid inputs."""
        return self.surplus - self.surplus_without


@dataclass(frozen=True, eq=False)
class PaymentBreakdown:
    """VCG part, adjustment part and their total, per owner."""

    vcg: np.ndarray
    adjustment: np.ndarray
    total: np.ndarray


@dataclass(frozen=True)
class Theorem1Result:
    """Both sides of the adjustment-feasibility condition."""

    lhs: float
    rhs: float
    holds: bool


def vcg_payment_vector(spec: EconomicSpec, inst: Instance) -> VcgComputation:
    """Solve the full economy and each owner-excluded economy; build tau.

    Payments are non-negative under truthful cost reports: the marginal
    contribution is non-negative and so is the reimbursed cost.
    """
    _require_standard(spec)
    eta, surplus, without, tau = backend.vcg_bundle(
        inst.quality, inst.cost_type, spec.alpha
    )
    return VcgComputation(
        surplus=surplus, surplus_without=without, vcg_payments=tau, acceptance=eta
    )


def assemble_payments(vcg: VcgComputation, adjustments) -> PaymentBreakdown:
    """Total payments as VCG part plus adjustments, with no clamping.

    Keeping payments non-negative is the trainer's job (its bias-bump
    rule), not this function's.
    """
    adj = _as_owner_vector(adjustments, "adjustments")
    if adj.size != vcg.vcg_payments.size:
        raise DimensionError(
            f"adjustments has {adj.size} entries, expected {vcg.vcg_payments.size}"
        )
    return PaymentBreakdown(
        vcg=vcg.vcg_payments, adjustment=adj, total=vcg.vcg_payments + adj
    )


def wbb_slack(spec: EconomicSpec, inst: Instance, breakdown: PaymentBreakdown, eta) -> float:
    """Federation revenue minus total payments; budget balance holds iff >= 0."""
    eta = validate_acceptance(eta, inst.n)
    if breakdown.total.size != inst.n:
        raise DimensionError("payment breakdown does not match the instance")
    return revenue(spec, inst.quality * eta) - float(breakdown.total.sum())


def ir_slack(spec: EconomicSpec, inst: Instance, breakdown: PaymentBreakdown, eta,
             owner: int) -> float:
    """Owner utility at this payment; individual rationality holds iff >= 0."""
    eta = validate_acceptance(eta, inst.n)
    inst._check_owner(owner)
    accepted = inst.quality[owner] * eta[owner]
    return float(breakdown.total[owner]) - cost(spec, accepted, inst.cost_type[owner])


def theorem1_condition(spec: EconomicSpec, inst: Instance) -> Theorem1Result:
    """Feasibility of universally IR and budget-balanced adjustments.

    For each owner, the instance is re-solved with that owner's report
    clamped to the worst case the priors allow (lowest quality, highest
    cost type).  The summed surplus drops must not exceed the surplus
    itself; when they do, no adjustment rule can satisfy both conditions
    for every report in the prior box, and training can only penalize the
    violations.
    """
    q_lo = spec.prior_quality[0]
    gamma_hi = spec.prior_cost_type[1]
    base = solve_closed_form(spec, inst).surplus
    lhs = 0.0
    for i in range(inst.n):
        clamped = inst.replace(i, quality=q_lo, cost_type=gamma_hi)
        lhs += base - solve_closed_form(spec, clamped).surplus
    return Theorem1Result(lhs=lhs, rhs=base, holds=lhs <= base)
