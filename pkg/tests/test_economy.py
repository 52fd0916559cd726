import numpy as np
import pytest

from fedvcg import (
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
from fedvcg.errors import DegenerateRatioError, DimensionError, DomainError


def test_revenue_sqrt_sum(spec):
    accepted = np.array([1, 1, 1, 1, 1, 1, 0, 0, 0, 0], dtype=float)
    assert revenue(spec, accepted) == pytest.approx(np.sqrt(60.0), abs=1e-12)
    assert revenue(spec, np.zeros(10)) == 0.0
    one = standard_economy(alpha=1.0)
    assert revenue(one, np.array([0.25])) == pytest.approx(0.5, abs=1e-15)


def test_revenue_rejects_negative(spec):
    with pytest.raises(DomainError):
        revenue(spec, np.array([1.0, -0.1]))


def test_revenue_monotone_in_each_coordinate(spec):
    rng = np.random.default_rng(0)
    for _ in range(50):
        acc = rng.uniform(0, 5, size=6)
        i = rng.integers(6)
        bumped = acc.copy()
        bumped[i] += rng.uniform(0, 3)
        assert revenue(spec, bumped) >= revenue(spec, acc)


def test_cost_linear(spec):
    assert cost(spec, 2.0, 0.5) == 1.0
    assert cost(spec, 3.7, 0.0) == 0.0
    assert cost(spec, 1.0, 0.1) == pytest.approx(0.1)
    with pytest.raises(DomainError):
        cost(spec, -1.0, 0.5)


def test_social_surplus_reference_point(spec):
    inst = Instance(np.ones(10), (np.arange(10) + 1) / 10)
    eta = np.array([1, 1, 1, 1, 1, 1, 0, 0, 0, 0], dtype=float)
    assert social_surplus(spec, inst, eta) == pytest.approx(np.sqrt(60) - 2.1, abs=1e-12)
    assert social_surplus(spec, inst, np.zeros(10)) == 0.0


def test_social_surplus_single_owner_optimum():
    one = standard_economy(alpha=1.0)
    inst = Instance([1.0], [1.0])
    assert social_surplus(one, inst, np.array([0.25])) == pytest.approx(0.25, abs=1e-12)


def test_social_surplus_dimension_mismatch(spec):
    inst = Instance(np.ones(3), np.ones(3) * 0.5)
    with pytest.raises(DimensionError):
        social_surplus(spec, inst, np.ones(4))


def test_social_surplus_permutation_invariant(spec):
    rng = np.random.default_rng(1)
    for _ in range(20):
        q = rng.uniform(0, 5, 8)
        g = rng.uniform(0, 1, 8)
        eta = rng.uniform(0, 1, 8)
        perm = rng.permutation(8)
        a = social_surplus(spec, Instance(q, g), eta)
        b = social_surplus(spec, Instance(q[perm], g[perm]), eta[perm])
        assert a == pytest.approx(b, abs=1e-12)


def test_unfairness_examples(spec):
    inst2 = Instance([1.0, 1.0], [0.1, 0.2])
    assert unfairness(spec, np.array([1.0, 3.0]), inst2) == pytest.approx(0.015625, abs=1e-15)
    # equal unit price: every ratio is exactly one half
    inst = Instance(np.array([1.0, 2.0, 3.0]), np.zeros(3))
    assert unfairness(spec, inst.quality.copy(), inst) == 0.0


def test_unfairness_zero_iff_proportional(spec):
    rng = np.random.default_rng(2)
    q = rng.uniform(0.5, 5, 6)
    inst = Instance(q, np.zeros(6))
    assert unfairness(spec, 1.7 * q, inst) < 1e-30
    skew = 1.7 * q
    skew[0] *= 2
    assert unfairness(spec, skew, inst) > 1e-6


def test_unfairness_degenerate_ratio(spec):
    inst = Instance([1.0, 1.0], [0.1, 0.1])
    with pytest.raises(DegenerateRatioError):
        unfairness(spec, np.array([0.5, -1.0]), inst)


def test_utility(spec):
    assert utility(spec, 1.01, 1.0, 0.1) == pytest.approx(0.91)
    assert utility(spec, 0.0, 0.0, 0.3) == 0.0
    assert utility(spec, 0.34, 0.0, 0.9) == pytest.approx(0.34)


def test_utility_plus_cost_is_payment(spec):
    rng = np.random.default_rng(3)
    for _ in range(30):
        p, acc, g = rng.uniform(0, 3), rng.uniform(0, 5), rng.uniform(0, 1)
        assert utility(spec, p, acc, g) + cost(spec, acc, g) == pytest.approx(p, abs=1e-12)


def test_instance_validation():
    with pytest.raises(DimensionError):
        Instance([1.0, 2.0], [0.5])
    with pytest.raises(DomainError):
        Instance([1.0, -2.0], [0.5, 0.5])
    with pytest.raises(DomainError):
        Instance([1.0, np.inf], [0.5, 0.5])
    inst = Instance([1.0, 2.0], [0.5, 0.6])
    assert inst.n == 2
    assert inst.drop(0).n == 1
    replaced = inst.replace(1, quality=3.0)
    assert replaced.quality[1] == 3.0 and replaced.cost_type[1] == 0.6


def test_spec_validation():
    with pytest.raises(DomainError):
        standard_economy(alpha=0.0)
    with pytest.raises(DomainError):
        EconomicSpec(alpha=1.0, prior_quality=(2.0, 1.0))
    with pytest.raises(DomainError):
        EconomicSpec(alpha=1.0, revenue_kind="custom")  # missing hook
    with pytest.raises(DomainError):
        EconomicSpec(alpha=1.0, cost_kind="quadratic")


def test_custom_hooks_used():
    spec = EconomicSpec(
        alpha=1.0,
        revenue_kind="custom",
        revenue_fn=lambda acc: float(acc.sum()) * 2.0,
        cost_kind="custom",
        cost_fn=lambda acc, g: g * acc * acc,
        unfairness_kind="custom",
        unfairness_fn=lambda p, inst: float(np.max(p) - np.min(p)),
    )
    assert revenue(spec, np.array([1.0, 2.0])) == 6.0
    assert cost(spec, 2.0, 0.5) == 2.0
    inst = Instance([1.0, 1.0], [0.5, 0.5])
    assert unfairness(spec, np.array([0.2, 1.0]), inst) == pytest.approx(0.8)
    eta = np.array([1.0, 0.5])
    assert social_surplus(spec, inst, eta) == pytest.approx(3.0 - 0.5 - 0.125)


def test_spec_hash_stability(spec):
    same = standard_economy(alpha=np.sqrt(10))
    assert spec_hash(spec) == spec_hash(same)
    assert spec_hash(spec) != spec_hash(standard_economy(alpha=2.0))
