"""Zero-sum matrix games: minimax LP, best-response structure, random games.

The optimizer (row player) maximizes x^T A y; the learner (column player)
minimizes it, i.e. plays the game B = -A.  B is never materialized: every
consumer negates A on the fly.

The minimax solve is a dense single-phase simplex with Bland's anti-cycling
rule on the classic bounded-payoff transformation: shift A to strictly
positive entries, solve max 1^T q s.t. (A + c) q <= 1, q >= 0, and read the
max-min strategy off the dual prices.  Desk-scale games (n, m <= 64) need
exactness, not scale, so no external solver is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "ZeroSumGame",
    "GameSolution",
    "GapProfile",
    "LPError",
    "solve_minimax",
    "gap_profile",
    "has_pure_nash",
    "row_gap_min",
    "random_game",
    "game_rng",
    "load_game",
    "save_game",
]

_ENTRY_TOL = 1e-12


class LPError(RuntimeError):
    """Simplex iteration cap exceeded (unreachable with Bland's rule)."""


@dataclass(frozen=True)
class ZeroSumGame:
    """Payoff matrix A in [-1, 1]^{n x m} for the maximizing row player."""

    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.size == 0:
            raise ValueError("payoff matrix must be a nonempty 2-d array")
        if np.max(np.abs(A)) > 1.0 + _ENTRY_TOL:
            raise ValueError("payoff entries must lie in [-1, 1]")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class GameSolution:
    value: float
    x_star: np.ndarray  # max-min strategy of the optimizer
    y_star: np.ndarray  # min-max strategy of the learner


@dataclass(frozen=True)
class GapProfile:
    """Learner-side payoff structure against a fixed optimizer strategy.

    v = A^T x_hat, v_star = min_i v_i, gaps are the suboptimality gaps,
    br_set the indices with gap <= br_tol, and delta_min/delta_max the gap
    range over actions outside br_set (None when every action is a best
    response).
    """

    v: np.ndarray
    v_star: float
    gaps: np.ndarray
    br_set: np.ndarray
    k: int
    delta_min: float | None
    delta_max: float | None
    x_hat: np.ndarray

    @property
    def m(self) -> int:
        return self.v.shape[0]


def _simplex_max(T: np.ndarray, basis: np.ndarray, n_rows: int, max_pivots: int = 20000):
    """Primal simplex (maximization tableau) with Bland's rule, in place.

    T has shape (n_rows + 1, n_cols + 1); the last row is the reduced-cost
    row of the minimized negative objective, the last column the rhs.
    """
    for _ in range(max_pivots):
        cost = T[-1, :-1]
        entering = np.flatnonzero(cost < -1e-11)
        if entering.size == 0:
            return
        j = int(entering[0])  # Bland: lowest index enters
        col = T[:n_rows, j]
        pos = col > 1e-11
        if not pos.any():
            raise LPError("unbounded LP (matrix shift violated positivity)")
        ratios = np.full(n_rows, np.inf)
        ratios[pos] = T[:n_rows, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best * (1 + 1e-12) + 1e-300)
        r = int(ties[np.argmin(basis[ties])])  # Bland: lowest basis index leaves
        piv = T[r, j]
        T[r, :] /= piv
        rows = np.arange(T.shape[0]) != r
        T[rows, :] -= np.outer(T[rows, j], T[r, :])
        basis[r] = j
    raise LPError("simplex iteration cap exceeded")


def solve_minimax(game: ZeroSumGame) -> GameSolution:
    """Minimax value, max-min and min-max strategies, by LP duality.

    The duality certificate min_j (A^T x*)_j >= value - 1e-8 and
    max_i (A y*)_i <= value + 1e-8 holds on exit.
    """
    A = game.A
    n, m = A.shape
    shift = 2.0  # entries in [1, 3] so the shifted value is positive
    As = A + shift

    # max 1^T q  s.t.  As q <= 1, q >= 0; slack basis is feasible
    T = np.zeros((n + 1, m + n + 1))
    T[:n, :m] = As
    T[:n, m : m + n] = np.eye(n)
    T[:n, -1] = 1.0
    T[-1, :m] = -1.0
    basis = np.arange(m, m + n)
    _simplex_max(T, basis, n)

    q = np.zeros(m)
    in_cols = basis < m
    q[basis[in_cols]] = T[:n, -1][in_cols]
    p = T[-1, m : m + n].copy()  # dual prices from the slack reduced costs

    sum_q = q.sum()
    sum_p = p.sum()
    if sum_q <= 0 or sum_p <= 0:
        raise LPError("degenerate simplex output")
    y_star = np.clip(q / sum_q, 0.0, None)
    y_star /= y_star.sum()
    x_star = np.clip(p / sum_p, 0.0, None)
    x_star /= x_star.sum()
    # shifted value is 1/sum(q); primal/dual agreement is certified below
    value = 1.0 / sum_q - shift

    lower = (A.T @ x_star).min()
    upper = (A @ y_star).max()
    if lower < value - 1e-8 or upper > value + 1e-8:
        raise LPError(
            f"LP duality certificate failed: min A^T x* = {lower}, "
            f"max A y* = {upper}, value = {value}"
        )
    return GameSolution(value=float(value), x_star=x_star, y_star=y_star)


def gap_profile(game: ZeroSumGame, x_hat: np.ndarray, br_tol: float = 1e-7) -> GapProfile:
    """Suboptimality gaps of the learner's actions against a fixed x_hat."""
    x_hat = np.asarray(x_hat, dtype=float)
    if x_hat.shape != (game.n,) or abs(x_hat.sum() - 1.0) > 1e-9 or x_hat.min() < -1e-10:
        raise ValueError("x_hat must lie on the n-simplex")
    v = game.A.T @ x_hat
    v_star = float(v.min())
    gaps = v - v_star
    br = np.flatnonzero(gaps <= br_tol)
    out = np.flatnonzero(gaps > br_tol)
    k = int(br.size)
    if out.size:
        dmin, dmax = float(gaps[out].min()), float(gaps[out].max())
    else:
        dmin = dmax = None
    return GapProfile(
        v=v, v_star=v_star, gaps=gaps, br_set=br, k=k,
        delta_min=dmin, delta_max=dmax, x_hat=x_hat,
    )


def has_pure_nash(game: ZeroSumGame) -> bool:
    """True iff some entry is simultaneously a column max and a row min."""
    A = game.A
    col_max = A == A.max(axis=0, keepdims=True)
    row_min = A == A.min(axis=1, keepdims=True)
    return bool(np.any(col_max & row_min))


def row_gap_min(game: ZeroSumGame) -> float:
    """min over rows and entry pairs i != j of |A[l, i] - A[l, j]|."""
    if game.m < 2:
        raise ValueError("row_gap_min requires at least two columns")
    A_sorted = np.sort(game.A, axis=1)
    return float(np.min(np.diff(A_sorted, axis=1)))


def game_rng(seed: int, trial: int | None = None) -> np.random.Generator:
    """Counter-based (Philox) generator; trial selects a documented substream.

    Substreams are derived from SeedSequence(seed, spawn_key=(trial,)), so
    sweeps can be evaluated in any order or in parallel and still reproduce.
    """
    if trial is None:
        seq = np.random.SeedSequence(seed)
    else:
        seq = np.random.SeedSequence(seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(seq))


def random_game(n: int, m: int, seed: int, trial: int | None = None) -> ZeroSumGame:
    """Game with i.i.d. Unif[-1, 1] entries; deterministic for a fixed seed."""
    rng = game_rng(seed, trial)
    return ZeroSumGame(rng.uniform(-1.0, 1.0, size=(n, m)))


def load_game(path: str | Path) -> ZeroSumGame:
    """Read a game file: one object with key "A" mapping to n rows of m numbers."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "A" not in doc:
        raise ValueError("game file must contain an object with key 'A'")
    rows = doc["A"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError("'A' must be a nonempty array of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width == 0:
        raise ValueError("ragged rows in game file")
    A = np.asarray(rows, dtype=float)
    if np.max(np.abs(A)) > 1.0 + _ENTRY_TOL:
        raise ValueError("game file entries must lie in [-1, 1]")
    return ZeroSumGame(A)


def save_game(game: ZeroSumGame, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump({"A": game.A.tolist()}, fh)
        fh.write("\n")
