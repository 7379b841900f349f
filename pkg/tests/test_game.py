import json

import numpy as np
import pytest

from ftrl_exploit import (
    ZeroSumGame,
    gap_profile,
    has_pure_nash,
    load_game,
    random_game,
    row_gap_min,
    save_game,
    solve_minimax,
)

from conftest import rng


def matching_pennies() -> ZeroSumGame:
    return ZeroSumGame(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def test_matching_pennies_solution():
    sol = solve_minimax(matching_pennies())
    assert sol.value == pytest.approx(0.0, abs=1e-10)
    assert np.allclose(sol.x_star, 0.5, atol=1e-9)
    assert np.allclose(sol.y_star, 0.5, atol=1e-9)


def test_single_row_game():
    sol = solve_minimax(ZeroSumGame(np.array([[0.0, 0.5, 1.0]])))
    assert sol.value == pytest.approx(0.0, abs=1e-10)
    assert sol.x_star[0] == pytest.approx(1.0)
    assert sol.y_star[0] == pytest.approx(1.0, abs=1e-9)


def test_coordination_game():
    sol = solve_minimax(ZeroSumGame(np.array([[1.0, 0.0], [0.0, 1.0]])))
    assert sol.value == pytest.approx(0.5, abs=1e-10)
    assert np.allclose(sol.x_star, 0.5, atol=1e-9)


def test_lp_certificate_random_games():
    gen = rng(20)
    for trial in range(100):
        n = int(gen.integers(1, 9))
        m = int(gen.integers(1, 9))
        g = random_game(n, m, 1000 + trial)
        sol = solve_minimax(g)
        # primal/dual certificate
        assert (g.A.T @ sol.x_star).min() >= sol.value - 1e-8
        assert (g.A @ sol.y_star).max() <= sol.value + 1e-8
        # independent dual solve: the transposed game has value -V*
        dual = solve_minimax(ZeroSumGame(-g.A.T))
        assert dual.value == pytest.approx(-sol.value, abs=1e-8)
        # value sandwich
        assert g.A.max(axis=0).min() >= sol.value - 1e-9
        assert g.A.min(axis=1).max() <= sol.value + 1e-9


def test_gap_profile_single_row():
    g = ZeroSumGame(np.array([[0.0, 0.5, 1.0]]))
    p = gap_profile(g, np.array([1.0]))
    assert np.allclose(p.v, [0.0, 0.5, 1.0])
    assert p.v_star == 0.0
    assert list(p.br_set) == [0]
    assert p.k == 1
    assert p.delta_min == pytest.approx(0.5)
    assert p.delta_max == pytest.approx(1.0)


def test_gap_profile_perfect_alignment():
    p = gap_profile(matching_pennies(), np.array([0.5, 0.5]))
    assert p.k == 2
    assert p.delta_min is None and p.delta_max is None
    assert np.allclose(p.v, 0.0, atol=1e-12)


def test_gap_profile_vertex_rows():
    g = random_game(4, 6, 99)
    for i in range(4):
        x = np.zeros(4)
        x[i] = 1.0
        p = gap_profile(g, x)
        assert np.allclose(p.v, g.A[i])
        assert list(p.br_set) == [int(np.argmin(g.A[i]))]


def test_gap_profile_at_maxmin_attains_value():
    for trial in range(20):
        g = random_game(3, 4, 500 + trial)
        sol = solve_minimax(g)
        p = gap_profile(g, sol.x_star)
        assert p.v_star == pytest.approx(sol.value, abs=1e-8)


def test_has_pure_nash():
    assert not has_pure_nash(matching_pennies())
    assert has_pure_nash(ZeroSumGame(np.array([[0.0, 1.0], [-1.0, 1.0]])))
    assert has_pure_nash(ZeroSumGame(np.array([[0.3]])))


def test_row_gap_min():
    assert row_gap_min(matching_pennies()) == pytest.approx(2.0)
    assert row_gap_min(ZeroSumGame(np.array([[0.0, 0.1, 0.5]]))) == pytest.approx(0.1)
    dup = ZeroSumGame(np.array([[0.4, 0.4], [0.2, -0.6]]))
    assert row_gap_min(dup) == 0.0
    with pytest.raises(ValueError):
        row_gap_min(ZeroSumGame(np.array([[0.5]])))


def test_random_game_deterministic():
    a = random_game(2, 2, 42)
    b = random_game(2, 2, 42)
    assert np.array_equal(a.A, b.A)
    c = random_game(2, 2, 43)
    assert not np.array_equal(a.A, c.A)


def test_random_game_distribution():
    g = random_game(300, 400, 7)  # 1.2e5 entries
    assert np.max(np.abs(g.A)) <= 1.0
    assert abs(g.A.mean()) <= 0.02


def test_trial_substreams_differ():
    a = random_game(2, 2, 42, trial=0)
    b = random_game(2, 2, 42, trial=1)
    assert not np.array_equal(a.A, b.A)


def test_entry_validation():
    with pytest.raises(ValueError):
        ZeroSumGame(np.array([[1.5, 0.0]]))
    with pytest.raises(ValueError):
        ZeroSumGame(np.zeros((0, 2)))


def test_game_file_roundtrip(tmp_path):
    g = random_game(3, 4, 11)
    path = tmp_path / "g.json"
    save_game(g, path)
    g2 = load_game(path)
    assert np.array_equal(g.A, g2.A)


def test_game_file_rejects_ragged(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"A": [[0.1, 0.2], [0.3]]}))
    with pytest.raises(ValueError):
        load_game(path)


def test_game_file_rejects_out_of_range(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"A": [[1.2, 0.0]]}))
    with pytest.raises(ValueError):
        load_game(path)


def test_game_file_rejects_missing_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"B": [[0.0]]}))
    with pytest.raises(ValueError):
        load_game(path)
