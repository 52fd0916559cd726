"""Training of the fair-adjustment networks.

The adjustment paid to owner i on top of the VCG payment is

    adj_i = dense(others' reports) + monotonic(own quality),

with one shared parameter set per network across owners.  Training
minimizes a three-term penalty over batches drawn from the prior ranges:

    loss1  unfairness of the total payment vector,
    loss2  hinge on the individual-rationality condition per owner,
    loss3  hinge on the weak-budget-balance condition per batch sample,

combined as ``lambda1*loss1 + lambda2*loss2 + lambda3*loss3`` and averaged
over the batch.  The VCG quantities of each sample are precomputed and act
as constants; gradients flow only through the network outputs.  Plain
full-batch gradient descent, fresh batch each iteration.  Whenever some
total payment on the current batch is negative, the dense net's output
bias is raised by a fixed bump (at most once per iteration), which lifts
every owner's adjustment by the same amount.

Network inputs are scaled to [0, 1] by the prior ranges before entering
either net; the scaling is positive-affine, so the monotonic net stays
monotone in the raw quality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .economy import EconomicSpec, Instance, spec_hash
from .errors import DegenerateRatioError, DimensionError, NumericalError
from .nets import (
    DenseNet,
    MonotonicNet,
    backward_dense,
    backward_monotonic,
    forward_dense,
    forward_monotonic,
    init_dense,
    init_monotonic,
    net_from_obj,
    net_to_obj,
    sgd_step,
)
from .payments import VcgComputation, vcg_payment_vector


@dataclass(frozen=True)
class TrainingConfig:
    lambda1: float
    lambda2: float
    lambda3: float
    batch_size: int
    learning_rate: float
    bias_bump: float
    iterations: int
    seed: int
    h_hidden: tuple = (10, 10, 10)
    g_hidden: int = 50

    def __post_init__(self):
        if min(self.lambda1, self.lambda2, self.lambda3) < 0:
            raise ValueError("penalty weights must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.learning_rate <= 0 or self.bias_bump <= 0:
            raise ValueError("learning_rate and bias_bump must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")


@dataclass(frozen=True, eq=False)
class PrecomputedSample:
    """One batch sample with its VCG quantities frozen as constants."""

    instance: Instance
    vcg: VcgComputation


@dataclass(frozen=True)
class LossReport:
    loss1: float
    loss2: float
    loss3: float
    total: float

    @staticmethod
    def combine(loss1: float, loss2: float, loss3: float, config: "TrainingConfig") -> "LossReport":
        total = config.lambda1 * loss1 + config.lambda2 * loss2 + config.lambda3 * loss3
        return LossReport(loss1=loss1, loss2=loss2, loss3=loss3, total=total)


@dataclass(eq=False)
class TrainResult:
    h_net: DenseNet
    g_net: MonotonicNet
    curve: List[LossReport]


def sample_batch(spec: EconomicSpec, n: int, size: int, rng: np.random.Generator) -> List[Instance]:
    """Draw `size` instances with i.i.d. uniform coordinates from the priors."""
    q_lo, q_hi = spec.prior_quality
    g_lo, g_hi = spec.prior_cost_type
    qualities = rng.uniform(q_lo, q_hi, size=(size, n))
    cost_types = rng.uniform(g_lo, g_hi, size=(size, n))
    return [Instance(qualities[t], cost_types[t]) for t in range(size)]


def precompute(spec: EconomicSpec, batch: List[Instance]) -> List[PrecomputedSample]:
    """VCG quantities for every sample; failures carry the sample index."""
    out = []
    for t, inst in enumerate(batch):
        try:
            out.append(PrecomputedSample(instance=inst, vcg=vcg_payment_vector(spec, inst)))
        except Exception as exc:
            raise type(exc)(f"sample {t}: {exc}") from exc
    return out


def _normalize(values: np.ndarray, bounds) -> np.ndarray:
    lo, hi = bounds
    span = hi - lo
    if span <= 0:
        return np.zeros_like(values)
    return (values - lo) / span


def _drop_own_index(n: int) -> np.ndarray:
    """Row i lists all owners except i, in ascending owner order."""
    idx = np.empty((n, n - 1), dtype=np.intp)
    for i in range(n):
        idx[i] = [j for j in range(n) if j != i]
    return idx


def _net_inputs(spec: EconomicSpec, qualities: np.ndarray, cost_types: np.ndarray):
    """Per-owner network inputs for a (T, n) batch.

    Returns the dense-net input matrix of shape (T*n, 2(n-1)) - own-excluded
    qualities then own-excluded cost types, ascending owner order - and the
    monotonic-net input of shape (T*n, 1).
    """
    size, n = qualities.shape
    qn = _normalize(qualities, spec.prior_quality)
    gn = _normalize(cost_types, spec.prior_cost_type)
    idx = _drop_own_index(n)
    x_dense = np.concatenate([qn[:, idx], gn[:, idx]], axis=2).reshape(size * n, 2 * (n - 1))
    x_mono = qn.reshape(size * n, 1)
    return x_dense, x_mono


def adjustment(spec: EconomicSpec, h_net: DenseNet, g_net: MonotonicNet,
               inst: Instance, owner: int) -> float:
    """Adjustment payment to one owner; never a function of the owner's own cost type."""
    inst._check_owner(owner)
    x_dense, x_mono = _net_inputs(spec, inst.quality[None, :], inst.cost_type[None, :])
    return float(forward_dense(h_net, x_dense[owner]) + forward_monotonic(g_net, x_mono[owner]))


def adjustment_matrix(spec: EconomicSpec, h_net: DenseNet, g_net: MonotonicNet,
                      batch: List[Instance]) -> np.ndarray:
    """(T, n) adjustments for a batch of same-size instances."""
    qualities = np.stack([inst.quality for inst in batch])
    cost_types = np.stack([inst.cost_type for inst in batch])
    x_dense, x_mono = _net_inputs(spec, qualities, cost_types)
    values = forward_dense(h_net, x_dense) + forward_monotonic(g_net, x_mono)
    return values.reshape(qualities.shape)


def _batch_constants(samples: List[PrecomputedSample]):
    qualities = np.stack([s.instance.quality for s in samples])
    cost_types = np.stack([s.instance.cost_type for s in samples])
    tau = np.stack([s.vcg.vcg_payments for s in samples])
    margins = np.stack([s.vcg.marginal_contributions for s in samples])
    surplus = np.array([s.vcg.surplus for s in samples])
    return qualities, cost_types, tau, margins, surplus


def _loss_forward(spec, config, h_net, g_net, samples):
    """Forward pass shared by reporting and training.

    Returns the report plus every intermediate the gradient step needs.
    """
    if not samples:
        raise DimensionError("batch must be non-empty")
    qualities, cost_types, tau, margins, surplus = _batch_constants(samples)
    size, n = qualities.shape
    x_dense, x_mono = _net_inputs(spec, qualities, cost_types)
    adj = (forward_dense(h_net, x_dense) + forward_monotonic(g_net, x_mono)).reshape(size, n)
    payments = tau + adj
    den = qualities + payments
    if np.any(den == 0):
        t = int(np.argwhere((den == 0).any(axis=1))[0][0])
        raise DegenerateRatioError(f"sample {t}: quality + payment is zero for some owner")
    ratios = qualities / den
    centered = ratios - ratios.mean(axis=1, keepdims=True)
    per_loss1 = (centered**2).mean(axis=1)
    ir_arg = -margins - adj
    per_loss2 = np.maximum(ir_arg, 0.0).sum(axis=1)
    wbb_arg = (margins + adj).sum(axis=1) - surplus
    per_loss3 = np.maximum(wbb_arg, 0.0)
    report = LossReport.combine(
        float(per_loss1.mean()), float(per_loss2.mean()), float(per_loss3.mean()), config
    )
    return report, {
        "x_dense": x_dense,
        "x_mono": x_mono,
        "adj": adj,
        "payments": payments,
        "den": den,
        "centered": centered,
        "ir_arg": ir_arg,
        "wbb_arg": wbb_arg,
        "qualities": qualities,
    }


def loss_components(spec: EconomicSpec, config: TrainingConfig, h_net: DenseNet,
                    g_net: MonotonicNet, samples: List[PrecomputedSample]) -> LossReport:
    """Batch-averaged loss components and their weighted total."""
    report, _ = _loss_forward(spec, config, h_net, g_net, samples)
    return report


def _adjustment_upstream(config: TrainingConfig, state) -> np.ndarray:
    """d(total loss)/d(adj), flattened to one entry per (sample, owner).

    The hinge terms use subgradient 0 exactly at their kinks, so a penalty
    sitting on its boundary stays inactive.
    """
    size, n = state["adj"].shape
    d_fair = -(2.0 / n) * state["centered"] * state["qualities"] / state["den"] ** 2
    d_ir = -(state["ir_arg"] > 0.0).astype(np.float64)
    d_wbb = (state["wbb_arg"] > 0.0).astype(np.float64)[:, None]
    grad = (config.lambda1 * d_fair + config.lambda2 * d_ir + config.lambda3 * d_wbb) / size
    return grad.reshape(size * n)


def train(spec: EconomicSpec, n: int, config: TrainingConfig,
          progress: Optional[Callable[[int, LossReport], None]] = None) -> TrainResult:
    """Run the full training loop and return the nets with the loss curve.

    Deterministic for a fixed seed: initialization, batch draws and
    gradient reduction all follow one fixed order.
    """
    rng = np.random.default_rng(config.seed)
    h_net = init_dense((2 * (n - 1), *config.h_hidden, 1), rng)
    g_net = init_monotonic(config.g_hidden, rng)
    curve: List[LossReport] = []
    for iteration in range(config.iterations):
        batch = sample_batch(spec, n, config.batch_size, rng)
        samples = precompute(spec, batch)
        report, state = _loss_forward(spec, config, h_net, g_net, samples)
        if not np.isfinite(report.total):
            raise NumericalError(f"non-finite loss at iteration {iteration}")
        upstream = _adjustment_upstream(config, state)
        h_grads = backward_dense(h_net, state["x_dense"], upstream)
        g_grads = backward_monotonic(g_net, state["x_mono"], upstream)
        sgd_step(h_net, h_grads, config.learning_rate)
        sgd_step(g_net, g_grads, config.learning_rate)
        if np.any(state["payments"] < 0.0):
            h_net.biases[-1][0] += config.bias_bump
        curve.append(report)
        if progress is not None:
            progress(iteration, report)
    return TrainResult(h_net=h_net, g_net=g_net, curve=curve)


def save_model(path, spec: EconomicSpec, n: int, h_net: DenseNet, g_net: MonotonicNet):
    """Write the model file: spec fingerprint, owner count, both nets."""
    obj = {
        "spec_hash": spec_hash(spec),
        "n": int(n),
        "h_net": net_to_obj(h_net),
        "g_net": net_to_obj(g_net),
    }
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    with open(path, "w") as fh:
        fh.write(blob)


def load_model(path):
    """Read a model file; returns (spec_hash, n, h_net, g_net)."""
    with open(path) as fh:
        obj = json.load(fh)
    try:
        return (
            obj["spec_hash"],
            int(obj["n"]),
            net_from_obj(obj["h_net"]),
            net_from_obj(obj["g_net"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model file {path}: {exc}") from exc
