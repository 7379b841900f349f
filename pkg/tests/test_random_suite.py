import math

import pytest

from ftrl_exploit import (
    entropic,
    estimate_event_rates,
    pure_nash_probability,
    trap_sweep,
)
from ftrl_exploit.random_suite import trap_sweep_range


def test_pure_nash_probability_values():
    assert pure_nash_probability(2, 2) == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert pure_nash_probability(1, 1) == pytest.approx(1.0, rel=1e-12)
    assert pure_nash_probability(3, 3) == pytest.approx(0.3, rel=1e-12)
    assert pure_nash_probability(1, 5) == pytest.approx(1.0, rel=1e-12)
    # large arguments stay finite through log-factorials
    assert 0.0 < pure_nash_probability(40, 40) < 1e-20


def test_event_rates_small_sweep():
    trials = 3000
    res = estimate_event_rates(2, 2, trials, seed=7)
    p = 2.0 / 3.0
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(res.rate("pure_nash") - p) <= 4 * sigma
    gap_floor = 1.0 - 1.0 / 4.0
    sigma_gap = math.sqrt(gap_floor * (1 - gap_floor) / trials)
    assert res.rate("event_gap") >= gap_floor - 4 * sigma_gap
    # no pure equilibrium and a mixed equilibrium with two best responses
    # are complementary in 2x2: the construction exists iff no saddle
    assert res.successes["event_A"] + res.successes["pure_nash"] == trials


def test_event_rates_empty():
    res = estimate_event_rates(2, 2, 0, seed=1)
    assert res.trials == 0
    assert res.rate("pure_nash") == 0.0
    assert res.rows == []


def test_trap_sweep_certificates_and_bookkeeping():
    res = trap_sweep(2, 2, entropic(), 0.5, 0.1, 50, 200, seed=11)
    assert res.successes["surplus_met"] == res.successes["event_A"]
    assert res.successes["event_A"] + res.successes["pure_nash"] == 200
    assert res.mean_surplus is not None and res.mean_surplus > 0
    assert res.mean_bound is not None and res.mean_surplus >= res.mean_bound
    for row in res.rows:
        if row.event_A:
            assert row.met and row.surplus is not None
        else:
            assert row.surplus is None and row.met is None


def test_trap_sweep_deterministic():
    a = trap_sweep(2, 2, entropic(), 0.5, 0.1, 20, 50, seed=3)
    b = trap_sweep(2, 2, entropic(), 0.5, 0.1, 20, 50, seed=3)
    assert a.rows == b.rows
    assert a.seeds == b.seeds


def test_trap_sweep_range_merge_matches_full():
    full = trap_sweep(2, 3, entropic(), 0.5, 0.1, 30, 60, seed=9)
    left = trap_sweep_range(2, 3, entropic(), 0.5, 0.1, 30, 0, 30, 9)
    right = trap_sweep_range(2, 3, entropic(), 0.5, 0.1, 30, 30, 60, 9)
    assert left.rows + right.rows == full.rows
    for key in full.successes:
        assert left.successes[key] + right.successes[key] == full.successes[key]


def test_trap_sweep_validation():
    with pytest.raises(ValueError):
        trap_sweep(2, 2, entropic(), 0.0, 0.1, 50, 10, seed=0)
    with pytest.raises(ValueError):
        trap_sweep(2, 2, entropic(), 0.5, 0.1, 50, -1, seed=0)
