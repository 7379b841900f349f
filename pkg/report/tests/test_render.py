import csv
import hashlib
import json
from pathlib import Path

import pytest

from exploit_report import FIGURE_KINDS, FigureSpec, SchemaError, render
from exploit_report.cli import main

FIXTURES = Path(__file__).parent / "fixtures"

BOUNDS_T = sorted(FIXTURES.glob("bounds_T*.csv"))
BOUNDS_ETA = sorted(FIXTURES.glob("bounds_eta*.csv"))

SPECS = {
    "exploitation_curve": tuple(str(p) for p in BOUNDS_T),
    "inverse_rate": tuple(str(p) for p in BOUNDS_ETA),
    "pbr_curve": (str(FIXTURES / "pbr.csv"),),
    "trap_surplus": (str(FIXTURES / "sweep.csv"),),
    "reward_sandwich": (str(FIXTURES / "traj.ndjson"),),
}


def digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.mark.parametrize("kind", FIGURE_KINDS)
def test_render_each_kind(tmp_path, kind):
    out = tmp_path / f"{kind}.png"
    result = render(FigureSpec(kind, SPECS[kind], str(out)))
    assert result == out
    assert out.stat().st_size > 5_000  # a real image, not an empty canvas


@pytest.mark.parametrize("kind", FIGURE_KINDS)
def test_render_byte_stable_and_read_only(tmp_path, kind):
    before = {p: digest(Path(p)) for p in SPECS[kind]}
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    render(FigureSpec(kind, SPECS[kind], str(out1)))
    render(FigureSpec(kind, SPECS[kind], str(out2)))
    assert out1.read_bytes() == out2.read_bytes()
    # rerunning overwrites deterministically
    render(FigureSpec(kind, SPECS[kind], str(out1)))
    assert out1.read_bytes() == out2.read_bytes()
    after = {p: digest(Path(p)) for p in SPECS[kind]}
    assert before == after  # inputs never mutated


def test_exploitation_curve_band_contains_empirical(tmp_path):
    # the fixture run itself satisfies the envelope: check the data that the
    # band is drawn from, then render it
    for path in SPECS["exploitation_curve"]:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                lo = float(row["lag_lower"])
                hi = float(row["lag_upper"])
                lag = float(row["lag_continuous"])
                assert lo - 1e-9 <= lag <= hi + 1e-9
    out = tmp_path / "curve.png"
    render(FigureSpec("exploitation_curve", SPECS["exploitation_curve"], str(out)))
    assert out.exists()


def test_pbr_points_dominate_lower_bound():
    with open(SPECS["pbr_curve"][0], newline="") as fh:
        for row in csv.DictReader(fh):
            assert float(row["exploitation"]) >= float(row["theorem_lower"]) - 1e-9


def test_schema_error_names_missing_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("kernel,eta,T,lag_continuous,lag_lower\nentropic,0.1,10,1.0,0.5\n")
    with pytest.raises(SchemaError, match="lag_upper"):
        render(FigureSpec("exploitation_curve", (str(bad),), str(tmp_path / "o.png")))


def test_schema_error_on_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError):
        render(FigureSpec("trap_surplus", (str(empty),), str(tmp_path / "o.png")))


def test_schema_error_on_bad_ndjson(tmp_path):
    bad = tmp_path / "bad.ndjson"
    bad.write_text('{"t": 0, "reward": 0.1}\n')  # bregman_increment missing
    with pytest.raises(SchemaError, match="bregman_increment"):
        render(FigureSpec("reward_sandwich", (str(bad),), str(tmp_path / "o.png")))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec("pie_chart", ("x.csv",), str(tmp_path / "o.png"))


def test_cli_roundtrip(tmp_path):
    out = tmp_path / "fig.png"
    code = main(["pbr_curve", "--in", SPECS["pbr_curve"][0], "--out", str(out)])
    assert code == 0
    assert out.exists()


def test_cli_schema_failure_exit_code(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code = main(["pbr_curve", "--in", str(empty), "--out", str(tmp_path / "o.png")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_cli_usage_error():
    assert main(["exploitation_curve"]) == 2
