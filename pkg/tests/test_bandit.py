import math

import numpy as np
import pytest

from ftrl_exploit import (
    Alternating,
    Fixed,
    ZeroSumGame,
    azuma_margin,
    bandit_reward_sandwich,
    build_trap,
    entropic,
    simulate,
    simulate_bandit,
    solve_minimax,
)


def matching_pennies():
    return ZeroSumGame(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def test_azuma_margin_formula():
    T, m, delta = 10_000, 2, 0.01
    expected = 2 * math.sqrt(2 * T * math.log(2 / delta)) + 2 * math.sqrt(
        2 * T * math.log(2 * m / delta)
    )
    assert azuma_margin(T, m, delta) == pytest.approx(expected, rel=1e-12)


def test_azuma_margin_scaling():
    assert azuma_margin(4000, 3, 0.05) == pytest.approx(
        2 * azuma_margin(1000, 3, 0.05), rel=1e-12
    )
    near_one = azuma_margin(100, 3, 1 - 1e-9)
    assert 0.0 < near_one < math.inf


def test_degenerate_game_no_variance():
    g = ZeroSumGame(np.array([[0.4]]))
    run = simulate_bandit(g, entropic(), 0.1, Fixed(np.array([1.0])), 100, seed=0)
    assert np.all(run.realized_payoffs == 0.4)
    assert run.realized_regret == pytest.approx(run.full_info_regret, abs=1e-12)
    assert bandit_reward_sandwich(run, 0.4)


def test_seeded_determinism():
    g = matching_pennies()
    a = simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 500, seed=42)
    b = simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 500, seed=42)
    assert np.array_equal(a.sampled_actions, b.sampled_actions)
    assert a.realized_regret == b.realized_regret
    c = simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 500, seed=43)
    assert not np.array_equal(a.sampled_actions, c.sampled_actions)


def test_precomputed_trajectory_matches():
    g = matching_pennies()
    sched = Fixed(np.array([0.5, 0.5]))
    traj = simulate(g, entropic(), 0.1, sched, 300)
    a = simulate_bandit(g, entropic(), 0.1, sched, 300, seed=9)
    b = simulate_bandit(g, entropic(), 0.1, sched, 300, seed=9, traj=traj)
    assert np.array_equal(a.sampled_actions, b.sampled_actions)
    with pytest.raises(ValueError):
        simulate_bandit(g, entropic(), 0.1, sched, 200, seed=9, traj=traj)


def test_martingale_centering():
    g = matching_pennies()
    T = 100_000
    run = simulate_bandit(g, entropic(), 0.05, Fixed(np.array([0.5, 0.5])), T, seed=3)
    traj = simulate(g, entropic(), 0.05, Fixed(np.array([0.5, 0.5])), T)
    centered = run.realized_payoffs - traj.rewards
    assert abs(centered.mean()) <= 4.0 * (2.0 / math.sqrt(T))


def test_realized_vs_full_regret_margin_calibration():
    g = matching_pennies()
    T, delta = 2000, 0.05
    sched = Fixed(np.array([0.5, 0.5]))
    traj = simulate(g, entropic(), 0.1, sched, T)
    margin = azuma_margin(T, g.m, delta)
    violations = 0
    n_seeds = 200
    for s in range(n_seeds):
        run = simulate_bandit(g, entropic(), 0.1, sched, T, seed=s, delta=delta, traj=traj)
        if run.realized_regret > run.full_info_regret + margin:
            violations += 1
    sigma = math.sqrt(delta * (1 - delta) / n_seeds)
    assert violations / n_seeds <= delta + 3 * sigma


def test_reward_sandwich_calibration():
    g = matching_pennies()
    T, delta = 2000, 0.05
    sched = Fixed(np.array([0.5, 0.5]))
    traj = simulate(g, entropic(), 0.1, sched, T)
    sol = solve_minimax(g)
    fails = sum(
        not bandit_reward_sandwich(
            simulate_bandit(g, entropic(), 0.1, sched, T, seed=s, delta=delta, traj=traj),
            sol.value,
        )
        for s in range(200)
    )
    sigma = math.sqrt(delta * (1 - delta) / 200)
    assert fails / 200 <= delta + 3 * sigma


def test_trap_schedule_survives_sampling():
    g = matching_pennies()
    sol = solve_minimax(g)
    trap = build_trap(g, sol)
    sched = Alternating(trap.x_prime, trap.x_double, final=trap.x_star)
    T = 200
    traj = simulate(g, entropic(), 0.2, sched, T)
    surpluses = []
    for s in range(200):
        run = simulate_bandit(g, entropic(), 0.2, sched, T, seed=s, traj=traj)
        surpluses.append(run.total_realized - T * sol.value)
    assert np.mean(surpluses) > 0.0


def test_feedback_mode_validation():
    g = matching_pennies()
    with pytest.raises(ValueError):
        simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 10, 0,
                        learner_feedback="estimator")
    with pytest.raises(ValueError):
        simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 10, 0,
                        delta=1.5)
    run = simulate_bandit(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 10, 0,
                          learner_feedback="realized")
    assert run.feedback == "realized"
