"""
End-to-end runs of scripts/bgrd.py through main(argv)
"""
import csv
import io
import json

import pytest

from scripts.bgrd import main


def _csv_rows(text: str):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bounds_at_boundary(capsys):
    code, out, _ = _run(capsys, ["bounds", "--p", "0.1", "--d-min", "0.1", "--d-max", "0.1", "--points", "1"])
    assert code == 0
    rows = _csv_rows(out)
    assert len(rows) == 1
    assert float(rows[0]["ub2"]) == 0.0
    assert float(rows[0]["lb_trivial"]) == 0.0
    assert float(rows[0]["ub1"]) == pytest.approx(0.468995594, abs=1e-8)


def test_bounds_invariant_under_variance_scaling(capsys):
    _, unit, _ = _run(capsys, ["bounds", "--p", "0.1", "--d-min", "0.02", "--d-max", "0.02", "--points", "1"])
    _, scaled, _ = _run(capsys, [
        "bounds", "--p", "0.1", "--sigma2", "4", "--d-min", "0.08", "--d-max", "0.08", "--points", "1"
    ])
    a, b = _csv_rows(unit)[0], _csv_rows(scaled)[0]
    for key in ("D_normalized", "ub1", "ub2", "lb_trivial", "lb_improved", "ri"):
        assert float(a[key]) == pytest.approx(float(b[key]), abs=1e-9)


def test_bounds_output_is_reproducible(capsys):
    argv = ["bounds", "--p", "0.1", "--d-min", "0.01", "--d-max", "0.05", "--points", "3"]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second
    assert len(_csv_rows(first)) == 3


@pytest.mark.parametrize("argv", [
    ["simulate-codec", "--p", "0.1", "--n", "400", "--target-D", "0.02", "--blocks", "2", "--epsilon1", "0.05",
     "--seed", "3"],
    ["simulate-channel", "--p", "0.1", "--n", "64", "--rate", "0.1", "--D", "0.02", "--trials", "10", "--L", "0.5",
     "--seed", "3"],
    ["typicality", "--n-values", "50", "200", "--epsilon", "0.1", "--trials", "5", "--seed", "3"],
], ids=["simulate-codec", "simulate-channel", "typicality"])
def test_simulation_output_is_reproducible(capsys, argv):
    code, first, _ = _run(capsys, argv)
    assert code == 0
    code, second, _ = _run(capsys, argv)
    assert code == 0
    assert first == second
    assert _csv_rows(first)


def test_bounds_json_lines(capsys):
    code, out, _ = _run(capsys, [
        "bounds", "--p", "0.1", "--d-min", "0.01", "--d-max", "0.05", "--points", "2", "--format", "json"
    ])
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["D"] for r in rows] == [0.01, 0.05]
    assert all(r["lb_trivial"] <= r["lb_improved"] for r in rows)


def test_ri_rows(capsys):
    code, out, _ = _run(capsys, [
        "ri", "--p", "0.1", "--d-min", "1e-4", "--d-max", "1e-2", "--points", "2"
    ])
    assert code == 0
    rows = _csv_rows(out)
    assert list(rows[0].keys()) == ["D", "ri", "reference", "converged"]
    assert float(rows[0]["ri"]) >= float(rows[1]["ri"]) - 1e-5


def test_missing_p_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--d-min", "0.01", "--d-max", "0.02"])
    assert exc.value.code == 2


def test_zero_blocks_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate-codec", "--p", "0.1", "--n", "100", "--target-D", "0.02", "--blocks", "0"])
    assert exc.value.code == 2


def test_invalid_values_exit_with_message(capsys, tmp_path):
    code, out, err = _run(capsys, ["bounds", "--p", "1.5", "--d-min", "0.01", "--d-max", "0.02"])
    assert code == 2
    assert out == ""
    assert "❌ error:" in err

    code, _, err = _run(capsys, [
        "bounds", "--p", "0.1", "--d-min", "0.01", "--d-max", "0.02", "--config", str(tmp_path / "missing.env")
    ])
    assert code == 2
    assert "config file not found" in err


def test_missing_output_directory(capsys, tmp_path):
    code, _, err = _run(capsys, [
        "bounds", "--p", "0.1", "--d-min", "0.01", "--d-max", "0.01", "--points", "1",
        "--out", str(tmp_path / "nowhere" / "bounds.csv")
    ])
    assert code == 2
    assert "output directory" in err


def test_simulate_codec_row(capsys):
    code, out, _ = _run(capsys, [
        "simulate-codec", "--p", "0.1", "--n", "400", "--target-D", "0.02", "--blocks", "2", "--epsilon1", "0.05"
    ])
    assert code == 0
    row = _csv_rows(out)[0]
    assert int(row["blocks"]) == 2
    assert float(row["empirical_rate"]) > 0.0
    assert "lb_improved" in row and "ub1" in row


def test_simulate_channel_with_failure_modes(capsys, tmp_path):
    modes_path = tmp_path / "modes.csv"
    code, out, _ = _run(capsys, [
        "simulate-channel", "--p", "0.1", "--n", "64", "--rate", "0.1", "--D", "0.02",
        "--trials", "10", "--L", "0.5", "--failure-modes", str(modes_path)
    ])
    assert code == 0
    assert not out.startswith("#")
    row = _csv_rows(out)[0]
    assert int(row["trials"]) == 10
    assert row["L_source"] == "flag"
    modes = list(csv.DictReader(modes_path.open()))
    assert [m["mode"] for m in modes] == [
        "codeword_atypical", "gaussian_atypical", "distortion_excess", "score_confusion"
    ]


def test_simulate_channel_records_witness_threshold(capsys, tmp_path):
    out_path = tmp_path / "channel.csv"
    code, _, _ = _run(capsys, [
        "simulate-channel", "--p", "0.1", "--n", "64", "--rate", "0.01", "--D", "0.01",
        "--trials", "5", "--out", str(out_path)
    ])
    assert code == 0
    text = out_path.read_text()
    assert text.startswith("# L_source=witness\n# L=")
    assert _csv_rows(text)[0]["L_source"] == "witness"


def test_typicality_table(capsys):
    code, out, _ = _run(capsys, [
        "typicality", "--n-values", "50", "200", "--epsilon", "0.1", "--trials", "5", "--seed", "3"
    ])
    assert code == 0
    rows = _csv_rows(out)
    assert [int(r["n"]) for r in rows] == [50, 200]
    assert all(0.0 <= float(r["fraction_typical"]) <= 1.0 for r in rows)
    assert all(int(r["seed"]) == 3 for r in rows)
