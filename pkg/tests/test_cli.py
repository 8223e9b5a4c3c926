import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from fwcs.cli import main, parse_complex, parse_pairs


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_pairs("") == []
    assert parse_pairs("1:2, 3.5:0.5") == [(1.0, 2.0), (3.5, 0.5)]
    assert parse_complex("1+0i") == 1 + 0j
    assert parse_complex("-2.5i") == -2.5j


def test_eval_examples(capsys):
    code, out, _ = run(["eval", "--upper", "", "--lower", "", "--z", "1+0i"], capsys)
    assert code == 0 and json.loads(out)["re"] == pytest.approx(math.e, rel=1e-14)
    code, out, _ = run(["eval", "--lower", "1:1", "--z", "1+0i"], capsys)
    assert code == 0 and json.loads(out)["re"] == pytest.approx(2.2795853023360673, rel=1e-14)
    code, _, err = run(["eval", "--upper", "1:2", "--z", "0.1+0i"], capsys)
    assert code == 3 and "diverges" in err


def test_usage_errors(capsys):
    assert run(["eval", "--upper", "1;2", "--z", "1"], capsys)[0] == 2
    assert run(["eval", "--upper", "0:1", "--z", "1"], capsys)[0] == 2
    assert run(["eval"], capsys)[0] == 2
    assert run(["verify", "--suite", "bogus"], capsys)[0] == 2
    assert run(["husimi", "--x", "1"], capsys)[0] == 2


def test_schema_rejection(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"upper": [[1, 2, 3]], "lower": []}))
    assert run(["eval", "--params", str(bad), "--z", "0.1"], capsys)[0] == 2
    bad.write_text(json.dumps({"upper": [], "lower": [], "extra": 1}))
    assert run(["eval", "--params", str(bad), "--z", "0.1"], capsys)[0] == 2


def test_dump_params_round_trip(tmp_path, capsys):
    path = tmp_path / "p.json"
    args = ["eval", "--upper", "1.5:0.3", "--lower", "0.1:2.7,3:1", "--convention", "product", "--z", "0.2",
            "--dump-params", str(path)]
    code, first, _ = run(args, capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["upper"] == [[1.5, 0.3]] and doc["convention"] == "product"
    code, second, _ = run(["eval", "--params", str(path), "--z", "0.2"], capsys)
    assert code == 0 and first == second


def test_table_pn_and_mandel(capsys):
    code, out, _ = run(["table", "--quantity", "pn", "--start", "1", "--stop", "1", "--step", "1", "--n", "0",
                        "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["p_n"]) == pytest.approx(0.36787944117144233, rel=1e-15)
    code, out, _ = run(["table", "--quantity", "mandel", "--start", "0.1", "--stop", "3", "--step", "0.1"], capsys)
    rows = json.loads(out)
    assert len(rows) == 30 and all(abs(r["q"]) <= 1e-9 for r in rows)
    assert list(rows[0]) == ["x", "q", "classification"]


def test_table_husimi_closed_form(capsys):
    code, out, _ = run(["table", "--quantity", "husimi", "--start", "0", "--stop", "5", "--step", "0.25",
                        "--beta", repr(math.log(2.0))], capsys)
    assert code == 0
    for r in json.loads(out):
        assert abs(r["q_husimi"] - 0.5 * math.exp(-0.5 * r["x"])) <= 1e-9


def test_csv_json_consistency(capsys):
    base = ["table", "--quantity", "eval", "--lower", "1:1,2:0.5", "--start", "0", "--stop", "2", "--step", "0.5"]
    _, js, _ = run(base, capsys)
    _, cs, _ = run(base + ["--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(cs)))
    for j, c in zip(json.loads(js), rows):
        assert float(c["re"]) == j["re"] and float(c["x"]) == j["x"]


def test_table_workers_same_output(capsys):
    base = ["table", "--quantity", "overlap", "--lower", "1:1", "--start", "0", "--stop", "2", "--step", "0.2",
            "--z2", "0.3+0.4i"]
    _, one, _ = run(base, capsys)
    _, two, _ = run(base + ["--workers", "2"], capsys)
    assert one == two


def test_partial_file_removed_on_failure(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(["table", "--quantity", "eval", "--upper", "1:1", "--start", "0", "--stop", "2", "--step", "0.5",
                      "--out", str(out)], capsys)
    assert code == 3
    assert not out.exists() and os.listdir(tmp_path) == []


def test_grid_limits(capsys):
    assert run(["table", "--quantity", "eval", "--start", "1", "--stop", "0", "--step", "0.1"], capsys)[0] == 2
    assert run(["table", "--quantity", "eval", "--start", "0", "--stop", "1", "--step", "1e-7"], capsys)[0] == 2


def test_other_subcommands(capsys):
    code, out, _ = run(["state", "--z", "0.5", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[0] == "n,re,im,probability"
    code, out, _ = run(["overlap", "--z1", "1", "--z2", "1i"], capsys)
    assert json.loads(out)["abs"] == pytest.approx(math.exp(-1.0))
    code, out, _ = run(["mandel", "--lower", "2:1", "--x", "1"], capsys)
    assert json.loads(out)["classification"] == "sub_poissonian"
    code, out, _ = run(["pn", "--x", "1", "--n", "2"], capsys)
    assert json.loads(out)["p_n"] == pytest.approx(math.exp(-1) / 2)
    code, out, _ = run(["measure", "--lower", "1:1", "--x", "1", "--numeric", "--moments", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and all(m["relative_residual"] <= 1e-8 for m in doc["moments"])
    code, out, _ = run(["husimi", "--x", "1", "--beta", "1", "--route", "series"], capsys)
    assert code == 0 and json.loads(out)["q_husimi"] > 0


def test_verify_exit_and_env_seed(tmp_path):
    env = dict(os.environ, FWCS_SEED="11")
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "fwcs", "verify", "--suite", "unity", "--out", str(out)],
                          env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(out.read_text())
    assert doc["seed"] == 11 and doc["failed"] == 0
