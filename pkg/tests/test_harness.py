import numpy as np
import pytest

from tempus import (EquationSpec, GridFunction, PerturbationSpec, make_timescale, perturb,
                    q_scale, residual_second_order, run_campaign, sample, uniform)
from tempus.harness import aggregate
from tempus.errors import CampaignError, NonMonotoneError, TimeScaleError
from tempus.harness import KINDS, TrialRow
from tempus.rng import SplitMix64
from tempus.solvers import first_order_defect


def test_splitmix_reference_stream():
    # published reference outputs for seed 0
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_splitmix_helpers_in_range():
    g = SplitMix64(1234)
    xs = [g.random() for _ in range(2000)]
    assert 0 <= min(xs) and max(xs) < 1
    assert all(-1 <= g.symmetric() < 1 for _ in range(500))
    ks = {g.below(7) for _ in range(500)}
    assert ks == set(range(7))
    assert {g.sign() for _ in range(100)} == {-1.0, 1.0}
    with pytest.raises(ValueError):
        g.below(0)


def test_splitmix_seed_determinism():
    a, b = SplitMix64(99), SplitMix64(99)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]
    assert SplitMix64(99).split().next_u64() != SplitMix64(99).next_u64()


def test_families():
    assert np.array_equal(uniform(0, 1, 0.25).points, [0, 0.25, 0.5, 0.75, 1])
    assert uniform(0, 1, 0.1).n == 11  # floor tolerance keeps the endpoint
    np.testing.assert_allclose(q_scale(1, 2, 4).points, [1, 2, 4, 8])
    assert sample(0, 1, 5) == uniform(0, 1, 0.25)
    ts = make_timescale({"family": "mixed", "segments": [
        {"family": "uniform", "a": 0, "b": 1, "h": 0.5},
        {"family": "q_scale", "t0": 2, "q": 2, "n": 3}]})
    np.testing.assert_allclose(ts.points, [0, 0.5, 1, 2, 4, 8])
    assert make_timescale({"family": "points", "points": [0, 3]}).n == 2


@pytest.mark.parametrize("family, exc", [
    ({"family": "uniform", "a": 0, "b": 1, "h": 0}, TimeScaleError),
    ({"family": "uniform", "a": 1, "b": 1, "h": 0.1}, TimeScaleError),
    ({"family": "q_scale", "t0": 1, "q": 1, "n": 4}, TimeScaleError),
    ({"family": "q_scale", "t0": 1, "q": 2}, TimeScaleError),
    ({"family": "spiral"}, TimeScaleError),
    ({"family": "mixed", "segments": [{"family": "uniform", "a": 0, "b": 1, "h": 0.5},
                                      {"family": "uniform", "a": 1, "b": 2, "h": 0.5}]},
     NonMonotoneError),
])
def test_family_errors(family, exc):
    with pytest.raises(exc):
        make_timescale(family)


def _cc(ts):
    return EquationSpec(ts, "cc", GridFunction.constant(0, ts), alpha=-3, beta=2, initial=(1, 2))


@pytest.mark.parametrize("kind", KINDS)
def test_zero_magnitude_returns_exact(kind):
    eq = _cc(uniform(0, 6, 1))
    x = eq.exact_solution()
    y = perturb(x, PerturbationSpec(kind, 0.0, 3), eq)
    assert np.array_equal(y.values, x.values)


@pytest.mark.parametrize("kind", ["pointwise-uniform", "single-spike", "smooth-bump"])
def test_pointwise_kinds_bounded_and_pinned(kind):
    eq = _cc(uniform(0, 3, 0.1))
    x = eq.exact_solution()
    for seed in range(20):
        y = perturb(x, PerturbationSpec(kind, 0.05, seed), eq)
        dev = np.abs(y.values - x.values)
        assert dev.max() <= 0.05 * (1 + 1e-12) and np.all(dev[:2] == 0)
        if kind == "single-spike":
            assert dev.max() == pytest.approx(0.05, rel=1e-9) and np.count_nonzero(dev) == 1


def test_unpinned_moves_initial_data():
    eq = _cc(uniform(0, 3, 0.1))
    x = eq.exact_solution()
    y = perturb(x, PerturbationSpec("pointwise-uniform", 0.05, 1, pin_endpoints=False), eq)
    assert np.any(y.values[:2] != x.values[:2])


def test_residual_targeted_hits_magnitude():
    eq = _cc(uniform(0, 10, 1))
    x = eq.exact_solution()
    for seed in range(25):
        y = perturb(x, PerturbationSpec("residual-targeted", 0.01, seed), eq)
        assert residual_second_order(y, -3, 2, 0) == pytest.approx(0.01, abs=1e-12)
        assert np.array_equal(y.values[:2], x.values[:2])


def test_residual_targeted_first_order():
    ts = q_scale(1, 1.1, 20)
    eq = EquationSpec(ts, "first", GridFunction(ts.points, ts),
                      d=GridFunction.constant(-0.2, ts), initial=(3.0,))
    y = perturb(eq.exact_solution(), PerturbationSpec("residual-targeted", 1e-3, 8), eq)
    defect, _ = first_order_defect(y, eq.d, eq.f)
    assert np.max(np.abs(defect)) == pytest.approx(1e-3, rel=1e-9)


def test_residual_targeted_linear_in_magnitude():
    eq = _cc(uniform(0, 10, 1))
    x = eq.exact_solution()
    e1 = residual_second_order(perturb(x, PerturbationSpec("residual-targeted", 0.02, 4), eq), -3, 2, 0)
    e2 = residual_second_order(perturb(x, PerturbationSpec("residual-targeted", 0.01, 4), eq), -3, 2, 0)
    assert e2 == pytest.approx(e1 / 2, rel=1e-9)


def test_residual_targeted_needs_equation():
    x = GridFunction.constant(1, uniform(0, 4, 1))
    with pytest.raises(ValueError):
        perturb(x, PerturbationSpec("residual-targeted", 0.1))


@pytest.mark.parametrize("kwargs", [dict(kind="noise", magnitude=1), dict(kind="single-spike", magnitude=-1),
                                    dict(kind="single-spike", magnitude=1, seed=-1)])
def test_perturbation_spec_validation(kwargs):
    with pytest.raises(ValueError):
        PerturbationSpec(**kwargs)


def test_campaign_reproducible_and_seeded():
    eq = _cc(uniform(0, 10, 1))
    pert = PerturbationSpec("residual-targeted", 1e-2, 40)
    r1, r2 = run_campaign(eq, pert, 12), run_campaign(eq, pert, 12)
    assert r1 == r2
    assert [r.seed for r in r1.rows] == list(range(40, 52))
    assert r1.all_passed and r1.max_analytic_constant is None


def test_aggregate_order_independent():
    rows = [TrialRow(s, 0.1, 2.0, k, 0.1 * k, 0.0, "pass" if k < 1.5 else "fail")
            for s, k in [(3, 1.0), (1, 1.7), (2, 1.7), (0, 0.5)]]
    a, b = aggregate(rows), aggregate(rows[::-1])
    assert a == b
    assert a.worst_trial_seed == 1 and a.max_empirical_constant == 1.7
    assert a.pass_count == 2 and not a.all_passed
    with pytest.raises(ValueError):
        aggregate([])


def test_campaign_wraps_hypothesis_errors():
    # the recurrence runs fine, the certifier rejects the complex roots
    ts = uniform(0, 4, 1)
    eq = EquationSpec(ts, "cc", GridFunction.constant(0, ts), alpha=0, beta=1)
    with pytest.raises(CampaignError) as info:
        run_campaign(eq, PerturbationSpec("pointwise-uniform", 0.1, seed=7), 3)
    assert info.value.seed == 7
