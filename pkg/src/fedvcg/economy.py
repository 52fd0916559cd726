"""Economic primitives of the data federation.

An :class:`Instance` is one reported economy state (per-owner data quality
and cost type).  An :class:`EconomicSpec` fixes the functional forms of the
federation: the revenue earned from accepted data, the per-owner cost of
contributing data, and the unfairness measure applied to a payment vector.
The standard forms are

* revenue  ``alpha * sqrt(sum(accepted quality))``,
* cost     ``cost_type * accepted_quality`` (linear),
* unfairness  population variance of the per-owner ratios
  ``quality / (quality + payment)``, which is zero exactly when every owner
  is paid the same price per unit of quality.

Custom hooks can replace any of the three, so the standard forms are one
registered choice rather than hard-coded behaviour.  All functions here are
pure and safe to call concurrently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateRatioError, DimensionError, DomainError

REVENUE_SQRT_SUM = "sqrt_sum"
COST_LINEAR = "linear"
UNFAIRNESS_UNIT_PRICE_VARIANCE = "unit_price_variance"
CUSTOM = "custom"


def _as_owner_vector(values, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """One reported economy state: per-owner quality and cost type.

    Both vectors have one entry per data owner and must be non-negative.
    An empty instance (zero owners) is allowed and describes the federation
    left behind when the last owner is excluded.
    """

    quality: np.ndarray
    cost_type: np.ndarray

    def __post_init__(self):
        q = _as_owner_vector(self.quality, "quality")
        g = _as_owner_vector(self.cost_type, "cost_type")
        if q.shape != g.shape:
            raise DimensionError(
                f"quality has {q.size} entries but cost_type has {g.size}"
            )
        if np.any(q < 0) or np.any(g < 0):
            raise DomainError("quality and cost_type must be non-negative")
        q.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "quality", q)
        object.__setattr__(self, "cost_type", g)

    @property
    def n(self) -> int:
        return self.quality.size

    def drop(self, owner: int) -> "Instance":
        """Instance with `owner` deleted (one fewer owner)."""
        self._check_owner(owner)
        return Instance(np.delete(self.quality, owner), np.delete(self.cost_type, owner))

    def replace(self, owner: int, quality=None, cost_type=None) -> "Instance":
        """Instance with owner's report replaced by the given values."""
        self._check_owner(owner)
        q = np.array(self.quality)
        g = np.array(self.cost_type)
        if quality is not None:
            q[owner] = quality
        if cost_type is not None:
            g[owner] = cost_type
        return Instance(q, g)

    def _check_owner(self, owner: int):
        if not 0 <= owner < self.n:
            raise DimensionError(f"owner index {owner} out of range for n={self.n}")


@dataclass(frozen=True)
class EconomicSpec:
    """Functional forms and prior beliefs of a federation economy.

    `alpha` scales the square-root revenue.  Priors are per-coordinate
    uniform ranges used for batch generation and for the worst-case report
    bounds in the payment-feasibility condition.  Each of the three
    economic functions is either a named standard form or `custom`, in
    which case the corresponding hook must be supplied.  Custom revenue
    hooks must be monotone non-decreasing per coordinate and custom cost
    hooks non-decreasing in both arguments for the mechanism's guarantees
    to carry over.
    """

    alpha: float
    prior_quality: tuple = (0.0, 5.0)
    prior_cost_type: tuple = (0.0, 1.0)
    revenue_kind: str = REVENUE_SQRT_SUM
    cost_kind: str = COST_LINEAR
    unfairness_kind: str = UNFAIRNESS_UNIT_PRICE_VARIANCE
    revenue_fn: Optional[Callable] = None
    cost_fn: Optional[Callable] = None
    unfairness_fn: Optional[Callable] = None

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError("alpha must be finite and > 0")
        for name, (lo, hi) in (
            ("prior_quality", self.prior_quality),
            ("prior_cost_type", self.prior_cost_type),
        ):
            if not (np.isfinite(lo) and np.isfinite(hi) and 0 <= lo <= hi):
                raise DomainError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
        for kind, fn, known in (
            (self.revenue_kind, self.revenue_fn, REVENUE_SQRT_SUM),
            (self.cost_kind, self.cost_fn, COST_LINEAR),
            (self.unfairness_kind, self.unfairness_fn, UNFAIRNESS_UNIT_PRICE_VARIANCE),
        ):
            if kind == CUSTOM and fn is None:
                raise DomainError("custom kind requires the matching hook function")
            if kind not in (known, CUSTOM):
                raise DomainError(f"unknown kind {kind!r}")

    def is_standard(self) -> bool:
        """True when the closed-form solver applies (sqrt revenue, linear cost)."""
        return self.revenue_kind == REVENUE_SQRT_SUM and self.cost_kind == COST_LINEAR


def standard_economy(alpha: float, prior_quality=(0.0, 5.0), prior_cost_type=(0.0, 1.0)) -> EconomicSpec:
    """The sqrt-revenue, linear-cost economy used throughout the test bench."""
    return EconomicSpec(
        alpha=alpha,
        prior_quality=tuple(prior_quality),
        prior_cost_type=tuple(prior_cost_type),
    )


def revenue(spec: EconomicSpec, accepted_quality) -> float:
    """Federation revenue for a vector of accepted quality amounts.

    Monotone non-decreasing in every coordinate; zero for an empty or
    all-zero vector.
    """
    acc = _as_owner_vector(accepted_quality, "accepted_quality")
    if np.any(acc < 0):
        raise DomainError("accepted quality must be non-negative")
    if spec.revenue_kind == CUSTOM:
        return float(spec.revenue_fn(acc))
    return float(spec.alpha * np.sqrt(acc.sum()))


def cost(spec: EconomicSpec, accepted_quality_i: float, cost_type_i: float) -> float:
    """Cost borne by one owner for contributing `accepted_quality_i`."""
    if accepted_quality_i < 0 or cost_type_i < 0:
        raise DomainError("cost arguments must be non-negative")
    if spec.cost_kind == CUSTOM:
        return float(spec.cost_fn(accepted_quality_i, cost_type_i))
    return float(cost_type_i * accepted_quality_i)


def validate_acceptance(eta, n: int) -> np.ndarray:
    """Check an acceptance vector: length n, every component in [0, 1]."""
    arr = _as_owner_vector(eta, "acceptance")
    if arr.size != n:
        raise DimensionError(f"acceptance has {arr.size} entries, expected {n}")
    if np.any(arr < 0) or np.any(arr > 1):
        raise DomainError("acceptance components must lie in [0, 1]")
    return arr


def social_surplus(spec: EconomicSpec, inst: Instance, eta) -> float:
    """Federation revenue minus the owners' total cost at acceptance `eta`."""
    eta = validate_acceptance(eta, inst.n)
    accepted = inst.quality * eta
    rev = revenue(spec, accepted)
    if spec.cost_kind == CUSTOM:
        total_cost = sum(
            cost(spec, accepted[i], inst.cost_type[i]) for i in range(inst.n)
        )
    else:
        total_cost = float(np.dot(inst.cost_type, accepted))
    return rev - total_cost


def unfairness(spec: EconomicSpec, payments, inst: Instance) -> float:
    """Dispersion of per-owner unit prices implied by a payment vector.

    The standard measure is the population variance of the ratios
    ``quality / (quality + payment)``; it is zero exactly when payments are
    proportional to qualities (a uniform unit price of data) and is always
    non-negative.  A zero denominator is refused rather than regularized.
    """
    p = _as_owner_vector(payments, "payments")
    if p.size != inst.n:
        raise DimensionError(f"payments has {p.size} entries, expected {inst.n}")
    if spec.unfairness_kind == CUSTOM:
        return float(spec.unfairness_fn(p, inst))
    den = inst.quality + p
    if np.any(den == 0):
        raise DegenerateRatioError("quality + payment is zero for some owner")
    ratios = inst.quality / den
    return float(np.mean((ratios - ratios.mean()) ** 2))


def utility(spec: EconomicSpec, payment_i: float, accepted_quality_i: float, cost_type_i: float) -> float:
    """Quasilinear owner utility: payment minus cost of the accepted data."""
    return payment_i - cost(spec, accepted_quality_i, cost_type_i)


def spec_hash(spec: EconomicSpec) -> str:
    """Stable fingerprint of the economic forms, used to tag model files.

    Custom hooks cannot be fingerprinted; they hash by kind only.
    """
    fields = {
        "alpha": format(spec.alpha, ".17g"),
        "prior_quality": [format(v, ".17g") for v in spec.prior_quality],
        "prior_cost_type": [format(v, ".17g") for v in spec.prior_cost_type],
        "revenue_kind": spec.revenue_kind,
        "cost_kind": spec.cost_kind,
        "unfairness_kind": spec.unfairness_kind,
    }
    blob = json.dumps(fields, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
