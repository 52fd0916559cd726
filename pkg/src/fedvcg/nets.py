"""Minimal dense and monotonic feed-forward networks with exact gradients.

Two small architectures cover the adjustment payments:

* :class:`DenseNet` - rectifier MLP, affine output with bias.  One shared
  parameter set evaluates the others-report adjustment for every owner.
* :class:`MonotonicNet` - one sigmoid hidden layer with non-negative
  weights and no output bias.  Non-negative weights compose increasing
  maps, so the output is structurally non-decreasing in its scalar input
  regardless of training.

Forward and backward passes accept a single input vector or a batch
(rows).  Backward returns exact reverse-mode gradients of
``sum(upstream * output)`` with respect to every parameter and the inputs;
the rectifier uses subgradient 0 at its kink.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.special import expit

from .errors import DimensionError, DomainError, NumericalError


@dataclass(eq=False)
class DenseNet:
    dims: tuple
    weights: List[np.ndarray]  # (out, in) per layer
    biases: List[np.ndarray]  # (out,) per layer


@dataclass(eq=False)
class MonotonicNet:
    dims: tuple  # (1, hidden, 1)
    weights: List[np.ndarray]  # [(hidden, 1), (1, hidden)], all entries >= 0
    hidden_biases: np.ndarray  # (hidden,)


@dataclass(eq=False)
class DenseGradients:
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    inputs: np.ndarray


@dataclass(eq=False)
class MonotonicGradients:
    weights: List[np.ndarray]
    hidden_biases: np.ndarray
    inputs: np.ndarray


def _glorot_radius(fan_in: int, fan_out: int) -> float:
    return np.sqrt(6.0 / (fan_in + fan_out))


def init_dense(dims, rng: np.random.Generator) -> DenseNet:
    """Uniform[-r, r] hidden weights with the usual fan-based radius.

    The output layer starts at zero, so the net begins as a flat function
    of its inputs (it trains immediately: the output layer sees nonzero
    hidden activations).  Starting flat matters for the payment trainer:
    the budget penalty drives the whole adjustment level down early on,
    and an initial output spread comparable to the final payment level
    drags individual payments below zero on the way, which sets off the
    non-negativity bias bump and destabilizes the run.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise DimensionError("a dense net needs at least input and output dims")
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        r = _glorot_radius(fan_in, fan_out)
        weights.append(rng.uniform(-r, r, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    weights[-1][:] = 0.0
    return DenseNet(dims=dims, weights=weights, biases=biases)


def init_monotonic(hidden: int, rng: np.random.Generator) -> MonotonicNet:
    """Uniform[0, r] weights (never dead at start), zero hidden biases.

    The output layer uses a quarter of the fan-based radius.  That starts
    the summed output at roughly owner-count times a typical final
    payment level: high enough that the budget penalty is visibly active
    at first, low enough that the descent to the feasible level does not
    build up output spread (see init_dense for why spread is dangerous).
    """
    hidden = int(hidden)
    if hidden < 1:
        raise DimensionError("monotonic net needs at least one hidden unit")
    w_in = rng.uniform(0.0, _glorot_radius(1, hidden), size=(hidden, 1))
    w_out = rng.uniform(0.0, 0.25 * _glorot_radius(hidden, 1), size=(1, hidden))
    return MonotonicNet(dims=(1, hidden, 1), weights=[w_in, w_out],
                        hidden_biases=np.zeros(hidden))


def _as_batch(x, dim: int):
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionError(f"input must have {dim} features, got shape {arr.shape}")
    return arr, single


def forward_dense(net: DenseNet, x):
    """Rectifier MLP output; float for a single input, array for a batch."""
    a, single = _as_batch(x, net.dims[0])
    for W, b in zip(net.weights[:-1], net.biases[:-1]):
        a = np.maximum(a @ W.T + b, 0.0)
    out = (a @ net.weights[-1].T + net.biases[-1])[:, 0]
    return float(out[0]) if single else out


def forward_monotonic(net: MonotonicNet, x):
    """Monotone output; float for a scalar input, array for a batch.

    Accepts a scalar, a length-1 vector, or a (batch, 1) array.
    """
    for W in net.weights:
        if np.any(W < 0):
            raise DomainError("monotonic net has a negative weight")
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr[None]
    a, single = _as_batch(arr, 1)
    hidden = expit(a @ net.weights[0].T + net.hidden_biases)
    out = (hidden @ net.weights[1].T)[:, 0]
    return float(out[0]) if single else out


def backward_dense(net: DenseNet, x, upstream) -> DenseGradients:
    """Gradients of sum(upstream * output) for every parameter and input."""
    a, single = _as_batch(x, net.dims[0])
    up = np.atleast_1d(np.asarray(upstream, dtype=np.float64))
    if up.size != a.shape[0]:
        raise DimensionError("upstream must have one entry per batch row")
    acts = [a]
    pre = []
    for W, b in zip(net.weights[:-1], net.biases[:-1]):
        z = acts[-1] @ W.T + b
        pre.append(z)
        acts.append(np.maximum(z, 0.0))
    delta = up[:, None]  # (B, 1) gradient at the output node
    grads_w = [None] * len(net.weights)
    grads_b = [None] * len(net.biases)
    grads_w[-1] = delta.T @ acts[-1]
    grads_b[-1] = delta.sum(axis=0)
    da = delta @ net.weights[-1]
    for layer in range(len(net.weights) - 2, -1, -1):
        dz = da * (pre[layer] > 0.0)
        grads_w[layer] = dz.T @ acts[layer]
        grads_b[layer] = dz.sum(axis=0)
        da = dz @ net.weights[layer]
    if not all(np.all(np.isfinite(g)) for g in grads_w):
        raise NumericalError("non-finite gradient in dense backward pass")
    inputs = da[0] if single else da
    return DenseGradients(weights=grads_w, biases=grads_b, inputs=inputs)


def backward_monotonic(net: MonotonicNet, x, upstream) -> MonotonicGradients:
    """Gradients of sum(upstream * output) for every parameter and input."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr[None]
    a, single = _as_batch(arr, 1)
    up = np.atleast_1d(np.asarray(upstream, dtype=np.float64))
    if up.size != a.shape[0]:
        raise DimensionError("upstream must have one entry per batch row")
    z = a @ net.weights[0].T + net.hidden_biases
    hidden = expit(z)
    delta = up[:, None]
    dw_out = delta.T @ hidden
    dh = delta @ net.weights[1]
    dz = dh * hidden * (1.0 - hidden)
    dw_in = dz.T @ a
    db = dz.sum(axis=0)
    dx = dz @ net.weights[0]
    if not (np.all(np.isfinite(dw_in)) and np.all(np.isfinite(dw_out))):
        raise NumericalError("non-finite gradient in monotonic backward pass")
    inputs = dx[0] if single else dx
    return MonotonicGradients(weights=[dw_in, dw_out], hidden_biases=db, inputs=inputs)


def backward(net, x, upstream):
    """Dispatch to the matching backward pass."""
    if isinstance(net, DenseNet):
        return backward_dense(net, x, upstream)
    if isinstance(net, MonotonicNet):
        return backward_monotonic(net, x, upstream)
    raise TypeError(f"unsupported net type {type(net).__name__}")


def sgd_step(net, grads, learning_rate: float):
    """In-place gradient step; monotonic weights are clipped back to >= 0."""
    if isinstance(net, DenseNet):
        for W, g in zip(net.weights, grads.weights):
            W -= learning_rate * g
        for b, g in zip(net.biases, grads.biases):
            b -= learning_rate * g
        return net
    if isinstance(net, MonotonicNet):
        for W, g in zip(net.weights, grads.weights):
            W -= learning_rate * g
            np.maximum(W, 0.0, out=W)
        net.hidden_biases -= learning_rate * grads.hidden_biases
        return net
    raise TypeError(f"unsupported net type {type(net).__name__}")


_FLOAT_FMT = ".17g"


def _encode(arr: np.ndarray):
    return [[format(v, _FLOAT_FMT) for v in row] for row in np.atleast_2d(arr)]


def _decode(rows, shape) -> np.ndarray:
    arr = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
    return arr.reshape(shape)


def net_to_obj(net) -> dict:
    """JSON-ready description; floats become 17-significant-digit strings."""
    if isinstance(net, DenseNet):
        return {
            "kind": "dense",
            "dims": list(net.dims),
            "weights": [_encode(W) for W in net.weights],
            "biases": [_encode(b)[0] for b in net.biases],
        }
    if isinstance(net, MonotonicNet):
        return {
            "kind": "monotonic",
            "dims": list(net.dims),
            "weights": [_encode(W) for W in net.weights],
            "hidden_biases": _encode(net.hidden_biases)[0],
        }
    raise TypeError(f"unsupported net type {type(net).__name__}")


def net_from_obj(obj: dict):
    try:
        kind = obj["kind"]
        dims = tuple(int(d) for d in obj["dims"])
        if kind == "dense":
            weights = [
                _decode(rows, (dims[i + 1], dims[i]))
                for i, rows in enumerate(obj["weights"])
            ]
            biases = [
                _decode([row], (dims[i + 1],)) for i, row in enumerate(obj["biases"])
            ]
            return DenseNet(dims=dims, weights=weights, biases=biases)
        if kind == "monotonic":
            weights = [
                _decode(obj["weights"][0], (dims[1], 1)),
                _decode(obj["weights"][1], (1, dims[1])),
            ]
            hidden = _decode([obj["hidden_biases"]], (dims[1],))
            return MonotonicNet(dims=dims, weights=weights, hidden_biases=hidden)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed network object: {exc}") from exc
    raise ValueError(f"unknown network kind {obj.get('kind')!r}")


def serialize(net) -> bytes:
    """Canonical JSON bytes; round-trips parameters bit-exactly."""
    return json.dumps(net_to_obj(net), sort_keys=True, separators=(",", ":")).encode()


def deserialize(data: bytes):
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed network bytes: {exc}") from exc
    return net_from_obj(obj)
