import csv
import io
import json
from pathlib import Path

import pytest

from photocount.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(tmp_path, *args):
    out = tmp_path / "out.csv"
    code = main([*args, "-o", str(out)])
    return code, out.read_text() if out.exists() else ""


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_dist_be(tmp_path):
    code, text = run(tmp_path, "dist", "--kind", "be", "--mean-occupation", "1", "--max-index", "3")
    assert code == 0
    assert rows(text) == [["index", "probability"], ["0", "0.5"], ["1", "0.25"], ["2", "0.125"], ["3", "0.0625"]]


def test_dist_uk_and_wk(tmp_path):
    _, text = run(tmp_path, "dist", "--kind", "uk", "--mean-occupation", "1", "--max-index", "1")
    assert float(rows(text)[1][1]) == pytest.approx(0.6931471805599453, rel=1e-14)
    _, text = run(tmp_path, "dist", "--kind", "wk", "--cell-filling", "3", "--max-index", "0")
    assert float(rows(text)[1][1]) == 0.25


def test_dist_missing_parameter_is_an_error(tmp_path, capsys):
    assert main(["dist", "--kind", "be"]) == 1
    assert "photocount: error:" in capsys.readouterr().err


def test_mandel(tmp_path):
    _, text = run(tmp_path, "mandel", "--law", "exponential", "--mean-w", "1", "--max-index", "2")
    assert [float(r[1]) for r in rows(text)[1:]] == pytest.approx([0.5, 0.25, 0.125], rel=1e-14)


def test_mandel_tabulated_normalization(tmp_path, capsys):
    table = tmp_path / "law.csv"
    table.write_text("W,density\n0,0.7\n1,0.7\n2,0.7\n")
    assert main(["mandel", "--law", "tabulated", "--table", str(table)]) == 1
    code, text = run(tmp_path, "mandel", "--law", "tabulated", "--table", str(table), "--normalize", "--max-index", "0")
    assert code == 0 and 0 < float(rows(text)[1][1]) < 1


def test_estimate(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("method,N1,N2,Nc,NA,NB,N1e,N2e,M\n"
                   "two_channel,1000,1000,38,,,,,\n"
                   "pulse_height,,,,,,1000,500,\n"
                   "chopper,,,,1964,1000,,,\n")
    code, text = run(tmp_path, "estimate", str(src), "--theory", "new")
    assert code == 0
    out = rows(text)
    assert out[0] == ["method", "theory", "eta1", "eta2", "flags"]
    assert round(float(out[1][2]), 4) == 0.0706
    assert float(out[2][2]) == pytest.approx(2 / 3)
    assert round(float(out[3][2]), 5) == 0.06950


def test_estimate_rejects_bad_header(tmp_path, capsys):
    src = tmp_path / "in.csv"
    src.write_text("method,N1,N2\ntwo_channel,1,1\n")
    assert main(["estimate", str(src), "--theory", "old"]) == 1
    assert "error" in capsys.readouterr().err


def test_predict_then_estimate_round_trip(tmp_path):
    pred = tmp_path / "pred.csv"
    assert main(["predict", "--m", "1e6", "--eta1", "0.04", "--eta2", "0.04", "--theory", "new", "-o", str(pred)]) == 0
    code, text = run(tmp_path, "estimate", str(pred), "--theory", "new")
    assert code == 0
    for row in rows(text)[1:]:
        assert float(row[2]) == pytest.approx(0.04, abs=1e-12)


def test_simulate_is_reproducible(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 42, "trials": 200000, "experiment": "thermal_counting",
                               "mean_occupation": [0.1, 0.2], "detector1": {"tau": 1.0, "beta": 0.5}}))
    summary = tmp_path / "summary.csv"
    code, first = run(tmp_path, "simulate", str(cfg), "--summary", str(summary))
    assert code == 0
    _, second = run(tmp_path, "simulate", str(cfg), "--workers", "2", "--summary", str(summary))
    assert first == second
    assert rows(first)[0] == ["group", "outcome", "count"]
    assert rows(summary.read_text())[0] == ["quantity", "empirical", "expected", "sigma", "z", "status"]


def test_simulate_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 10, "experiment": "thermal_counting"}))
    assert main(["simulate", str(cfg)]) == 1
    assert "seed" in capsys.readouterr().err


def test_reproduce_table2(tmp_path):
    code, text = run(tmp_path, "reproduce-table2")
    assert code == 0
    assert text == (GOLDEN / "table2.csv").read_text()
