"""VCG-style incentive payments for federated data sharing.

The mechanism accepts data from reporting owners up to the point where
marginal revenue covers marginal cost, pays each owner its marginal
contribution to the federation surplus plus its cost (a VCG payment), and
adds a trained adjustment that trades off fairness against individual
rationality and the federation budget.
"""

from .backend import BACKEND
from .economy import (
    EconomicSpec,
    Instance,
    cost,
    revenue,
    social_surplus,
    spec_hash,
    standard_economy,
    unfairness,
    utility,
)
from .payments import (
    PaymentBreakdown,
    Theorem1Result,
    VcgComputation,
    assemble_payments,
    ir_slack,
    theorem1_condition,
    vcg_payment_vector,
    wbb_slack,
)
from .solver import (
    SolveResult,
    oracle_grid,
    oracle_refined,
    solve_closed_form,
    solve_numeric,
    solve_reduced,
)
from .training import (
    LossReport,
    PrecomputedSample,
    TrainingConfig,
    TrainResult,
    adjustment,
    adjustment_matrix,
    load_model,
    loss_components,
    precompute,
    sample_batch,
    save_model,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EconomicSpec",
    "Instance",
    "LossReport",
    "PaymentBreakdown",
    "PrecomputedSample",
    "SolveResult",
    "Theorem1Result",
    "TrainingConfig",
    "TrainResult",
    "VcgComputation",
    "adjustment",
    "adjustment_matrix",
    "assemble_payments",
    "cost",
    "ir_slack",
    "load_model",
    "loss_components",
    "oracle_grid",
    "oracle_refined",
    "precompute",
    "revenue",
    "sample_batch",
    "save_model",
    "social_surplus",
    "solve_closed_form",
    "solve_numeric",
    "solve_reduced",
    "spec_hash",
    "standard_economy",
    "theorem1_condition",
    "train",
    "unfairness",
    "utility",
    "vcg_payment_vector",
    "wbb_slack",
]
