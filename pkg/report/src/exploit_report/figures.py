"""Figure renderers for the ftrl-exploit log schemas.

Five archetypes:

    exploitation_curve  empirical LAG vs horizon inside its envelope band
                        (bounds CSVs, one or more, varying T)
    inverse_rate        LAG vs step size on log-log axes with the envelope
                        (bounds CSVs, varying eta)
    pbr_curve           accuracy cost curve on a log-gamma axis over the
                        theorem lower bound (pbr CSV)
    trap_surplus        realized trap surplus against its certificate
                        (sweep CSV)
    reward_sandwich     cumulative discrete reward vs its continuous
                        benchmark, gap shaded (trajectory NDJSON)

No figure recomputes any bound: everything plotted comes from the logs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "render"]

FIGURE_KINDS = (
    "exploitation_curve",
    "inverse_rate",
    "pbr_curve",
    "trap_surplus",
    "reward_sandwich",
)

_FIGSIZE = (7.0, 4.4)
_DPI = 110


class SchemaError(ValueError):
    """An input log does not match its documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input log is required")


def _read_csv(path: str, required: tuple[str, ...]) -> dict[str, list[str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, expected a CSV header")
        for col in required:
            if col not in reader.fieldnames:
                raise SchemaError(f"{path}: missing column '{col}'")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return {col: [row[col] for row in rows] for col in reader.fieldnames}


def _floats(table: dict[str, list[str]], col: str, path: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in table[col]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value in column '{col}'") from exc


def _concat_csvs(paths: tuple[str, ...], required: tuple[str, ...]):
    merged: dict[str, list[str]] = {}
    for path in paths:
        table = _read_csv(path, required)
        for col in required:
            merged.setdefault(col, []).extend(table[col])
    return merged


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, output: str) -> Path:
    out = Path(output)
    fig.savefig(out, format="png", metadata={"Software": "exploit-report"})
    plt.close(fig)
    return out


_BOUNDS_COLS = ("kernel", "eta", "T", "lag_continuous", "lag_lower", "lag_upper")


def _render_exploitation_curve(spec: FigureSpec) -> Path:
    table = _concat_csvs(spec.inputs, _BOUNDS_COLS)
    path = spec.inputs[0]
    T = _floats(table, "T", path)
    order = np.argsort(T)
    T = T[order]
    lag = _floats(table, "lag_continuous", path)[order]
    lo = _floats(table, "lag_lower", path)[order]
    hi = _floats(table, "lag_upper", path)[order]
    kernel = table["kernel"][0]
    fig, ax = _new_axes(f"Exploitation vs horizon ({kernel})")
    ax.fill_between(T, lo, hi, alpha=0.25, label="envelope", color="tab:blue")
    ax.plot(T, lag, "o-", color="tab:red", label="empirical LAG")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("cumulative exploitation")
    ax.legend()
    return _save(fig, spec.output)


def _render_inverse_rate(spec: FigureSpec) -> Path:
    table = _concat_csvs(spec.inputs, _BOUNDS_COLS)
    path = spec.inputs[0]
    eta = _floats(table, "eta", path)
    order = np.argsort(eta)
    eta = eta[order]
    lag = _floats(table, "lag_continuous", path)[order]
    lo = _floats(table, "lag_lower", path)[order]
    hi = _floats(table, "lag_upper", path)[order]
    fig, ax = _new_axes("Inverse-rate scaling")
    ax.fill_between(eta, lo, hi, alpha=0.25, color="tab:blue", label="envelope")
    ax.plot(eta, lag, "o-", color="tab:red", label="empirical LAG")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("step size eta")
    ax.set_ylabel("cumulative exploitation")
    ax.legend()
    return _save(fig, spec.output)


def _render_pbr_curve(spec: FigureSpec) -> Path:
    cols = ("gamma", "eta", "t", "epsilon", "exploitation", "theorem_lower")
    table = _concat_csvs(spec.inputs, cols)
    path = spec.inputs[0]
    gamma = _floats(table, "gamma", path)
    order = np.argsort(gamma)
    gamma = gamma[order]
    expl = _floats(table, "exploitation", path)[order]
    lower = _floats(table, "theorem_lower", path)[order]
    fig, ax = _new_axes("Price of best response")
    ax.plot(gamma, expl, "o-", color="tab:red", label="min exploitation")
    ax.plot(gamma, lower, "--", color="tab:blue", label="theorem lower bound")
    ax.set_xscale("log")
    ax.invert_xaxis()
    ax.set_xlabel("accuracy target gamma")
    ax.set_ylabel("cumulative exploitation")
    ax.legend()
    return _save(fig, spec.output)


def _render_trap_surplus(spec: FigureSpec) -> Path:
    cols = ("trial", "seed", "pure_nash", "event_A", "event_gap",
            "surplus", "bound", "met")
    table = _concat_csvs(spec.inputs, cols)
    path = spec.inputs[0]
    held = [i for i, flag in enumerate(table["event_A"]) if flag == "1"]
    if not held:
        raise SchemaError(f"{path}: no event-holding rows to plot")
    surplus = np.array([float(table["surplus"][i]) for i in held])
    bound = np.array([float(table["bound"][i]) for i in held])
    fig, ax = _new_axes("Trap surplus vs certificate")
    ax.scatter(bound, surplus, s=12, alpha=0.6, color="tab:red", label="runs")
    top = max(float(bound.max()), float(surplus.max()))
    ax.plot([0.0, top], [0.0, top], "--", color="tab:blue", label="surplus = bound")
    ax.set_xlabel("certified bound")
    ax.set_ylabel("realized surplus")
    ax.legend()
    return _save(fig, spec.output)


def _render_reward_sandwich(spec: FigureSpec) -> Path:
    records = []
    for path in spec.inputs:
        with open(path) as fh:
            for line_no, line in enumerate(fh):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"{path}:{line_no + 1}: not a JSON record") from exc
                for field in ("t", "reward", "bregman_increment"):
                    if field not in rec:
                        raise SchemaError(f"{path}: missing column '{field}'")
                records.append(rec)
    if not records:
        raise SchemaError(f"{spec.inputs[0]}: no data rows")
    records.sort(key=lambda r: r["t"])
    t = np.array([r["t"] for r in records], dtype=float)
    disc = np.cumsum([r["reward"] for r in records])
    gap = np.cumsum([r["bregman_increment"] for r in records])
    cont = disc - gap
    fig, ax = _new_axes("Discrete reward vs continuous benchmark")
    ax.plot(t, disc, color="tab:red", label="discrete reward")
    ax.plot(t, cont, color="tab:blue", label="continuous benchmark")
    ax.fill_between(t, cont, disc, alpha=0.25, color="tab:orange",
                    label="discretization gap")
    ax.set_xlabel("round t")
    ax.set_ylabel("cumulative reward")
    ax.legend()
    return _save(fig, spec.output)


_RENDERERS = {
    "exploitation_curve": _render_exploitation_curve,
    "inverse_rate": _render_inverse_rate,
    "pbr_curve": _render_pbr_curve,
    "trap_surplus": _render_trap_surplus,
    "reward_sandwich": _render_reward_sandwich,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the output path.

    Inputs are only ever read; the output is overwritten deterministically
    (fixed figure geometry, pinned PNG metadata, no timestamps).
    """
    return _RENDERERS[spec.kind](spec)
