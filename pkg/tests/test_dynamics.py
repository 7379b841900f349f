import json
import math

import numpy as np
import pytest

from ftrl_exploit import (
    Alternating,
    Explicit,
    Fixed,
    MaxMin,
    ZeroSumGame,
    continuous_lag,
    dg_envelope,
    entropic,
    euclidean,
    gap_profile,
    potential,
    random_game,
    reward_report,
    reward_sandwich_check,
    simulate,
    solve_minimax,
    tsallis,
)
from ftrl_exploit.dynamics import pointwise_bound_violation, write_trajectory_log

from conftest import adaptive_simpson, rng


def matching_pennies():
    return ZeroSumGame(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def row_game(v):
    """1 x m game: the fixed strategy (1,) induces payoff vector v exactly."""
    return ZeroSumGame(np.array([v], dtype=float))


def test_equilibrium_play_is_static():
    g = matching_pennies()
    traj = simulate(g, entropic(), 0.5, Fixed(np.array([0.5, 0.5])), 10)
    assert np.allclose(traj.strategies, 0.5, atol=1e-12)
    assert np.allclose(traj.rewards, 0.0, atol=1e-14)
    assert np.allclose(traj.bregman_increments, 0.0, atol=1e-14)


def test_softmax_trajectory_example():
    g = row_game([0.0, 0.5, 1.0])
    traj = simulate(g, entropic(), 0.1, Fixed(np.array([1.0])), 2)
    assert np.allclose(traj.strategies[0], 1.0 / 3.0, atol=1e-10)
    scores = -0.1 * np.array([0.0, 0.5, 1.0])
    expected = np.exp(scores) / np.exp(scores).sum()
    assert np.allclose(traj.strategies[1], expected, atol=1e-10)


def test_explicit_schedule_length_mismatch():
    g = matching_pennies()
    xs = np.tile([0.5, 0.5], (3, 1))
    with pytest.raises(ValueError):
        simulate(g, entropic(), 0.1, Explicit(xs), 5)


def test_schedule_simplex_validation():
    g = matching_pennies()
    with pytest.raises(ValueError):
        simulate(g, entropic(), 0.1, Fixed(np.array([0.7, 0.7])), 3)


def test_potential_values():
    assert potential(entropic(), 1.0, np.zeros(2)) == pytest.approx(math.log(2.0))
    gen = rng(30)
    for k in (entropic(), euclidean(), tsallis(0.5)):
        Z = gen.uniform(-3.0, 3.0, size=4)
        eta = 0.3
        assert potential(k, eta, Z) == pytest.approx(
            potential(k, 1.0, eta * Z) / eta, abs=1e-9
        )
        c = 1.7
        assert potential(k, eta, np.full(4, c)) == pytest.approx(
            potential(k, eta, np.zeros(4)) + c, abs=1e-9
        )


@pytest.mark.parametrize("eta", [0.01, 0.1])
def test_decomposition_identity(kernel, eta):
    g = random_game(3, 4, 77)
    sol = solve_minimax(g)
    traj = simulate(g, kernel, eta, Fixed(sol.x_star), 500)
    rep = reward_report(traj, g, sol)
    assert abs(rep.total_reward - rep.continuous_reward - rep.discretization_gap) <= 1e-8
    assert rep.discretization_gap >= -1e-10
    assert rep.discretization_gap <= dg_envelope(traj, g) + 1e-8


def test_path_independence_continuous():
    g = random_game(3, 3, 55)
    gen = rng(31)
    xs = gen.dirichlet(np.ones(3), size=40)
    perm = gen.permutation(40)
    for k in (entropic(), euclidean()):
        t1 = simulate(g, k, 0.2, Explicit(xs), 40)
        t2 = simulate(g, k, 0.2, Explicit(xs[perm]), 40)
        assert t1.continuous_reward == pytest.approx(t2.continuous_reward, abs=1e-8)


def test_reward_report_vag_lag():
    g = row_game([0.0, 0.5, 1.0])
    sol = solve_minimax(g)
    x = np.array([1.0])
    profile = gap_profile(g, x)
    traj = simulate(g, entropic(), 0.1, Fixed(x), 50)
    rep = reward_report(traj, g, sol, profile)
    assert rep.vag == pytest.approx(0.0, abs=1e-12)  # x is max-min here
    # LAG equals the gap-weighted suboptimal mass, summed over rounds
    direct = sum(
        0.5 * traj.strategies[t, 1] + 1.0 * traj.strategies[t, 2]
        for t in range(traj.T)
    )
    assert rep.lag_discrete == pytest.approx(direct, abs=1e-9)
    assert rep.lag_discrete >= 0.0


def test_maxmin_schedule_matches_fixed():
    g = random_game(3, 3, 60)
    sol = solve_minimax(g)
    t1 = simulate(g, entropic(), 0.1, MaxMin(sol), 20)
    t2 = simulate(g, entropic(), 0.1, Fixed(sol.x_star), 20)
    assert np.array_equal(t1.strategies, t2.strategies)


def test_alternating_schedule_layout():
    g = matching_pennies()
    xe = np.array([0.75, 0.25])
    xo = np.array([0.25, 0.75])
    xf = np.array([0.5, 0.5])
    traj = simulate(g, entropic(), 0.1, Alternating(xe, xo, final=xf), 5)
    assert np.allclose(traj.xs[0], xe) and np.allclose(traj.xs[2], xe)
    assert np.allclose(traj.xs[1], xo) and np.allclose(traj.xs[3], xo)
    assert np.allclose(traj.xs[4], xf)  # odd horizon: final round override


def test_pointwise_bounds_fixed_run(kernel):
    g = row_game([0.0, 0.3, 0.8])
    profile = gap_profile(g, np.array([1.0]))
    traj = simulate(g, kernel, 0.1, Fixed(np.array([1.0])), 300)
    assert pointwise_bound_violation(traj, profile) <= 1e-10


def test_pointwise_bounds_with_br_ties(kernel):
    # two exactly-tied best responses keep a shared coordinate value
    g = row_game([0.2, 0.2, 0.6, 0.9])
    profile = gap_profile(g, np.array([1.0]))
    traj = simulate(g, kernel, 0.15, Fixed(np.array([1.0])), 200)
    assert profile.k == 2
    assert pointwise_bound_violation(traj, profile) <= 1e-10


def test_euclidean_finite_time_elimination():
    g = row_game([0.0, 0.45, 0.9])
    eta = 0.1
    profile = gap_profile(g, np.array([1.0]))
    t_star = (1.0 / profile.k) / (eta * profile.delta_min)
    traj = simulate(g, euclidean(), eta, Fixed(np.array([1.0])), 120)
    cut = math.ceil(t_star)
    assert np.all(traj.strategies[cut:, 1:] == 0.0)
    # and elimination has actually not happened well before t*
    assert traj.strategies[int(t_star // 2), 1] > 0.0


def test_learner_limit_monotone_tail():
    g = random_game(3, 4, 88)
    sol = solve_minimax(g)
    profile = gap_profile(g, sol.x_star)
    for k in (entropic(), tsallis(0.5)):
        traj = simulate(g, k, 0.05, Fixed(sol.x_star), 400)
        target = np.zeros(g.m)
        target[profile.br_set] = 1.0 / profile.k
        dist = np.abs(traj.strategies - target).sum(axis=1)
        burn = 50
        tail = dist[burn:]
        assert np.all(np.diff(tail) <= 1e-9)
        assert dist[-1] <= dist[0] + 1e-12


def test_continuous_lag_perfect_alignment_zero():
    g = matching_pennies()
    assert continuous_lag(g, entropic(), 0.1, np.array([0.5, 0.5]), 1000.0) == pytest.approx(
        0.0, abs=1e-10
    )


def test_continuous_lag_zero_horizon():
    g = row_game([0.0, 0.5, 1.0])
    assert continuous_lag(g, entropic(), 0.1, np.array([1.0]), 0.0) == 0.0


def test_continuous_lag_appendix_range():
    # entropic, single best response: the asymptotic LAG is ln(3)/eta, inside
    # the closed-form envelope [1/(3 eta), 4/eta]
    g = row_game([0.0, 0.5, 1.0])
    eta = 0.01
    lag = continuous_lag(g, entropic(), eta, np.array([1.0]), 1e5)
    assert (1.0 / (3.0 * eta)) * (1 - 1e-6) <= lag <= 4.0 / eta
    assert lag == pytest.approx(math.log(3.0) / eta, rel=1e-6)


def test_continuous_lag_matches_quadrature_oracle(kernel):
    from ftrl_exploit.choicemap import solve_choice_map

    g = row_game([0.0, 0.4, 0.7])
    x = np.array([1.0])
    eta, T = 0.1, 50.0
    profile = gap_profile(g, x)

    def gap_mass(t):
        y = solve_choice_map(kernel, -eta * t * profile.v).y
        return float(profile.gaps[1] * y[1] + profile.gaps[2] * y[2])

    oracle = adaptive_simpson(gap_mass, 0.0, T, tol=1e-10)
    assert continuous_lag(g, kernel, eta, x, T) == pytest.approx(oracle, abs=1e-6)


def test_reward_sandwich_matching_pennies():
    lower, est, upper = reward_sandwich_check(matching_pennies(), entropic(), 0.1, 100.0)
    assert lower == pytest.approx(0.0, abs=1e-9)
    assert upper == pytest.approx(math.log(2.0) / 0.1, abs=1e-9)
    assert abs(est) <= 1e-3


def test_reward_sandwich_width_scales_inversely():
    g = random_game(2, 3, 44)
    l1, _, u1 = reward_sandwich_check(g, euclidean(), 0.1, 50.0, fw_iters=50)
    l2, _, u2 = reward_sandwich_check(g, euclidean(), 0.2, 50.0, fw_iters=50)
    assert (u1 - l1) == pytest.approx(2.0 * (u2 - l2), rel=1e-9)
    assert u1 > l1


def test_trajectory_log_format(tmp_path):
    g = matching_pennies()
    traj = simulate(g, entropic(), 0.1, Fixed(np.array([0.5, 0.5])), 4)
    plain = tmp_path / "run.ndjson"
    write_trajectory_log(traj, plain)
    lines = plain.read_text().strip().split("\n")
    assert len(lines) == 4
    rec = json.loads(lines[0])
    assert set(rec) == {"t", "y", "reward", "bregman_increment"}
    with_scores = tmp_path / "run_scores.ndjson"
    write_trajectory_log(traj, with_scores, log_scores=True)
    rec = json.loads(with_scores.read_text().strip().split("\n")[2])
    assert set(rec) == {"t", "y", "reward", "bregman_increment", "score"}
    assert rec["t"] == 2
