"""Scenario evaluation and CSV reporting.

A scenario is a named (quality, cost type) pair for the whole federation.
Evaluating it produces per-owner rows (payment, acceptance, VCG part,
adjustment) plus the batch loss components for that single instance; with
no model the adjustments are zero.  All CSV output uses 17-significant-
digit decimal strings so emitted files parse back to the exact same
floats.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .economy import EconomicSpec, Instance
from .nets import DenseNet, MonotonicNet
from .payments import assemble_payments, vcg_payment_vector
from .training import (
    LossReport,
    PrecomputedSample,
    TrainingConfig,
    adjustment_matrix,
    loss_components,
)

_FMT = ".17g"


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    name: str
    instance: Instance
    acceptance: np.ndarray
    vcg_payments: np.ndarray
    adjustments: np.ndarray
    payments: np.ndarray
    losses: LossReport


def _loss_lambdas(training: Optional[TrainingConfig]) -> TrainingConfig:
    if training is not None:
        return training
    # loss reporting needs only the three weights; everything else is inert
    return TrainingConfig(
        lambda1=0.4, lambda2=0.3, lambda3=0.3, batch_size=1,
        learning_rate=1.0, bias_bump=1.0, iterations=0, seed=0,
    )


def evaluate_scenario(spec: EconomicSpec, name: str, quality, cost_type,
                      h_net: Optional[DenseNet] = None,
                      g_net: Optional[MonotonicNet] = None,
                      training: Optional[TrainingConfig] = None) -> ScenarioResult:
    """Solve one scenario; adjustments come from the nets when given."""
    inst = Instance(quality, cost_type)
    vcg = vcg_payment_vector(spec, inst)
    if h_net is not None and g_net is not None:
        adj = adjustment_matrix(spec, h_net, g_net, [inst])[0]
    else:
        adj = np.zeros(inst.n)
    breakdown = assemble_payments(vcg, adj)
    config = _loss_lambdas(training)
    sample = PrecomputedSample(instance=inst, vcg=vcg)
    losses = _scenario_losses(spec, config, sample, adj)
    return ScenarioResult(
        name=name,
        instance=inst,
        acceptance=vcg.acceptance,
        vcg_payments=vcg.vcg_payments,
        adjustments=adj,
        payments=breakdown.total,
        losses=losses,
    )


def _scenario_losses(spec, config, sample: PrecomputedSample, adj: np.ndarray) -> LossReport:
    """Loss components of one instance at fixed adjustment values."""
    from .economy import unfairness

    vcg = sample.vcg
    payments = vcg.vcg_payments + adj
    loss1 = unfairness(spec, payments, sample.instance)
    margins = vcg.marginal_contributions
    loss2 = float(np.maximum(-margins - adj, 0.0).sum())
    loss3 = float(max((margins + adj).sum() - vcg.surplus, 0.0))
    return LossReport.combine(loss1, loss2, loss3, config)


SCENARIO_HEADER = (
    "scenario,owner,quality,cost_type,acceptance,vcg_payment,adjustment,"
    "payment,loss1,loss2,loss3,loss_total"
)


def _fmt(x: float) -> str:
    return format(float(x), _FMT)


def scenario_csv(results) -> str:
    """One CSV for any number of scenario results, one row per owner."""
    lines = [SCENARIO_HEADER]
    for res in results:
        loss_cols = ",".join(
            _fmt(v) for v in (res.losses.loss1, res.losses.loss2, res.losses.loss3, res.losses.total)
        )
        for i in range(res.instance.n):
            lines.append(
                f"{res.name},{i},{_fmt(res.instance.quality[i])},{_fmt(res.instance.cost_type[i])},"
                f"{_fmt(res.acceptance[i])},{_fmt(res.vcg_payments[i])},{_fmt(res.adjustments[i])},"
                f"{_fmt(res.payments[i])},{loss_cols}"
            )
    return "\n".join(lines) + "\n"


def loss_curve_csv(curve) -> str:
    lines = ["iteration,loss1,loss2,loss3,total"]
    for k, report in enumerate(curve):
        lines.append(
            f"{k},{_fmt(report.loss1)},{_fmt(report.loss2)},{_fmt(report.loss3)},{_fmt(report.total)}"
        )
    return "\n".join(lines) + "\n"


SURFACE_HEADER = "quality0,cost_type0,vcg_payment0,adjustment0,payment0"


def payment_surface_csv(spec: EconomicSpec, n: int, h_net: DenseNet, g_net: MonotonicNet,
                        grid: int = 51) -> str:
    """Payment to owner 0 over a (quality, cost type) grid.

    The other owners sit at the midpoints of the prior ranges.  The
    payment is non-decreasing along quality and steps down once along cost
    type when the owner drops out of the accepted set.
    """
    q_lo, q_hi = spec.prior_quality
    g_lo, g_hi = spec.prior_cost_type
    others_q = np.full(n - 1, 0.5 * (q_lo + q_hi))
    others_g = np.full(n - 1, 0.5 * (g_lo + g_hi))
    lines = [SURFACE_HEADER]
    for q0 in np.linspace(q_lo, q_hi, grid):
        for g0 in np.linspace(g_lo, g_hi, grid):
            inst = Instance(np.concatenate([[q0], others_q]), np.concatenate([[g0], others_g]))
            vcg = vcg_payment_vector(spec, inst)
            adj = adjustment_matrix(spec, h_net, g_net, [inst])[0]
            lines.append(
                f"{_fmt(q0)},{_fmt(g0)},{_fmt(vcg.vcg_payments[0])},{_fmt(adj[0])},"
                f"{_fmt(vcg.vcg_payments[0] + adj[0])}"
            )
    return "\n".join(lines) + "\n"


def parse_csv(text: str):
    """Header plus typed rows (floats where possible) for round-trip tests."""
    reader = io.StringIO(text)
    header = reader.readline().rstrip("\n")
    rows = []
    for line in reader:
        cells = line.rstrip("\n").split(",")
        typed = []
        for cell in cells:
            try:
                typed.append(float(cell))
            except ValueError:
                typed.append(cell)
        rows.append(typed)
    return header, rows


def reference_quality_scenarios(n: int = 10):
    """Uniform-quality scenarios: one quality level, spread cost types."""
    cost_types = (np.arange(n) + 1) / n
    return [
        (f"q_{level:.1f}", np.full(n, float(level)), cost_types)
        for level in (1.0, 2.0, 3.0, 4.0)
    ]


def reference_cost_scenarios(n: int = 10):
    """Uniform-cost scenarios: one cost type, spread qualities."""
    qualities = (np.arange(n) + 1) * 0.5
    return [
        (f"gamma_{level:.1f}", qualities, np.full(n, float(level)))
        for level in (0.2, 0.4, 0.6, 0.8)
    ]
