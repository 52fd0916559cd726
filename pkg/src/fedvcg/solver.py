"""Surplus-maximizing acceptance solvers.

Four routes to the same optimum, with different trust levels:

* :func:`solve_closed_form` - greedy closed form for the standard economy,
  the authoritative solver used by payments and training;
* :func:`solve_reduced` - closed form with one owner deleted;
* :func:`solve_numeric` - projected gradient ascent for custom economies,
  validation scaffolding only;
* :func:`oracle_grid` / :func:`oracle_refined` - exhaustive and staged grid
  searches, independent oracles used to validate the other routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .economy import CUSTOM, EconomicSpec, Instance, social_surplus
from .errors import GridSizeError, NumericalError, UnsupportedEconomyError


@dataclass(frozen=True, eq=False)
class SolveResult:
    """An acceptance vector together with the surplus it attains."""

    acceptance: np.ndarray
    surplus: float


def _require_standard(spec: EconomicSpec):
    if not spec.is_standard():
        raise UnsupportedEconomyError(
            "closed form needs sqrt-sum revenue and linear cost; "
            "use solve_numeric for custom economies"
        )


def solve_closed_form(spec: EconomicSpec, inst: Instance) -> SolveResult:
    """Greedy optimal acceptance for the sqrt-revenue, linear-cost economy.

    Owners are taken in increasing cost-type order (ties keep the original
    owner order) while the marginal revenue of their data covers their cost
    type; at most one owner ends up partially accepted.  The returned
    surplus is the global maximum of the social surplus over [0, 1]^n.
    """
    _require_standard(spec)
    eta, surplus = backend.solve_accept(inst.quality, inst.cost_type, spec.alpha)
    return SolveResult(eta, surplus)


def solve_reduced(spec: EconomicSpec, inst: Instance, excluded: int) -> SolveResult:
    """Closed form on the instance with `excluded` deleted (length n-1)."""
    return solve_closed_form(spec, inst.drop(excluded))


def _surplus_gradient(spec: EconomicSpec, inst: Instance, eta: np.ndarray) -> np.ndarray:
    if spec.is_standard():
        mass = float(np.dot(inst.quality, eta))
        if mass > 0.0:
            marginal = spec.alpha / (2.0 * np.sqrt(mass))
        else:
            # the sqrt has unbounded slope at zero mass; any large finite
            # stand-in pushes the iterate back into the interior
            marginal = np.finfo(np.float64).max ** 0.25
        return inst.quality * (marginal - inst.cost_type)
    # custom hooks: central differences coordinate by coordinate
    h = 1e-6
    grad = np.empty(inst.n)
    for i in range(inst.n):
        up = eta.copy()
        down = eta.copy()
        up[i] = min(1.0, eta[i] + h)
        down[i] = max(0.0, eta[i] - h)
        span = up[i] - down[i]
        if span == 0.0:
            grad[i] = 0.0
            continue
        grad[i] = (social_surplus(spec, inst, up) - social_surplus(spec, inst, down)) / span
    return grad


def solve_numeric(spec: EconomicSpec, inst: Instance, step: float = 0.01,
                  iterations: int = 5000) -> SolveResult:
    """Projected gradient ascent on the social surplus over [0, 1]^n.

    Starts from full acceptance, takes fixed-size steps and clips to the
    box; returns the best iterate seen.  Works for any economy whose hooks
    are differentiable almost everywhere.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    eta = np.ones(inst.n)
    best = SolveResult(eta.copy(), social_surplus(spec, inst, eta))
    for _ in range(iterations):
        grad = _surplus_gradient(spec, inst, eta)
        if not np.all(np.isfinite(grad)):
            raise NumericalError("non-finite surplus gradient")
        eta = np.clip(eta + step * grad, 0.0, 1.0)
        surplus = social_surplus(spec, inst, eta)
        if surplus > best.surplus:
            best = SolveResult(eta.copy(), surplus)
    return best


_MAX_ORACLE_OWNERS = 4
_BLOCK = 1 << 20


def _grid_best(spec: EconomicSpec, inst: Instance, axes: list) -> SolveResult:
    """Best point of the cartesian grid spanned by per-owner axes."""
    if spec.is_standard():
        # broadcast the separable mass and cost sums without materializing
        # the full point matrix
        shape = tuple(len(a) for a in axes)
        mass = np.zeros(shape)
        costs = np.zeros(shape)
        for d, axis in enumerate(axes):
            expand = [None] * len(axes)
            expand[d] = slice(None)
            contrib = inst.quality[d] * axis
            mass = mass + contrib[tuple(expand)]
            costs = costs + (inst.cost_type[d] * contrib)[tuple(expand)]
        values = spec.alpha * np.sqrt(mass) - costs
        flat = int(np.argmax(values))
        idx = np.unravel_index(flat, shape)
        eta = np.array([axes[d][idx[d]] for d in range(len(axes))])
        return SolveResult(eta, float(values[idx]))
    # custom hooks: walk the grid in blocks
    shape = tuple(len(a) for a in axes)
    total = int(np.prod(shape))
    best_val = -np.inf
    best_eta = None
    for start in range(0, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        idx = np.unravel_index(np.arange(start, stop), shape)
        for row in range(stop - start):
            eta = np.array([axes[d][idx[d][row]] for d in range(len(axes))])
            val = social_surplus(spec, inst, eta)
            if val > best_val:
                best_val = val
                best_eta = eta
    return SolveResult(best_eta, float(best_val))


def oracle_grid(spec: EconomicSpec, inst: Instance, resolution: float) -> SolveResult:
    """Exhaustive search of the acceptance grid with the given spacing.

    Cost grows as ``(1/resolution)^n``, so instances with more than four
    owners are refused.  The result is a feasible point, hence a lower
    bound on the true maximal surplus.
    """
    if inst.n > _MAX_ORACLE_OWNERS:
        raise GridSizeError(
            f"exhaustive grid over {inst.n} owners is refused (limit {_MAX_ORACLE_OWNERS})"
        )
    if not 0 < resolution <= 1:
        raise ValueError("resolution must lie in (0, 1]")
    if inst.n == 0:
        return SolveResult(np.zeros(0), 0.0)
    points = int(round(1.0 / resolution)) + 1
    axes = [np.linspace(0.0, 1.0, points) for _ in range(inst.n)]
    return _grid_best(spec, inst, axes)


def oracle_refined(spec: EconomicSpec, inst: Instance, coarse: float = 1e-3,
                   fine: float = 1e-5, stage_points: int = 4_000_000) -> SolveResult:
    """Grid search at `coarse` spacing, then zoomed re-grids down to `fine`.

    Stage one covers [0, 1]^n at the coarse spacing, capped so a stage
    never evaluates more than `stage_points` grid points.  Each following
    stage re-grids a one-cell neighbourhood of the incumbent, shrinking the
    spacing until it reaches `fine`; the incumbent only ever improves, so
    the result stays a valid lower bound on the maximal surplus.
    """
    if inst.n > _MAX_ORACLE_OWNERS:
        raise GridSizeError(
            f"exhaustive grid over {inst.n} owners is refused (limit {_MAX_ORACLE_OWNERS})"
        )
    if inst.n == 0:
        return SolveResult(np.zeros(0), 0.0)
    per_dim_cap = max(4, int(stage_points ** (1.0 / inst.n)))
    points = max(4, min(int(round(1.0 / coarse)) + 1, per_dim_cap))
    lo = np.zeros(inst.n)
    hi = np.ones(inst.n)
    best = None
    while True:
        axes = [np.linspace(lo[d], hi[d], points) for d in range(inst.n)]
        candidate = _grid_best(spec, inst, axes)
        if best is None or candidate.surplus > best.surplus:
            best = candidate
        step = float(np.max((hi - lo) / (points - 1)))
        if step <= fine:
            return best
        lo = np.clip(best.acceptance - step, 0.0, 1.0)
        hi = np.clip(best.acceptance + step, 0.0, 1.0)
