import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mirs.cli import main
from mirs.constructions import harvey_pair
from mirs.serialize import matrix_set_to_dict, read_matrix_set, read_sequence_csv, write_matrix_set


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "mirs", *args], capture_output=True, text=True,
                          env={**os.environ, **(env or {})})


def test_matrix_set_round_trip(tmp_path, golden):
    h = harvey_pair(golden.theta)
    write_matrix_set(h, tmp_path / "h.json")
    back = read_matrix_set(tmp_path / "h.json")
    assert back.labels == h.labels
    for x, y in zip(back, h):
        np.testing.assert_array_equal(x, y)
    assert matrix_set_to_dict(back) == matrix_set_to_dict(h)


def test_compute_identity(tmp_path, capsys):
    p = tmp_path / "ident2.json"
    p.write_text(json.dumps({"dim": 2, "claimed_jsr": 1.0,
                             "matrices": [{"name": "I", "rows": [[1, 0], [0, 1]]}]}))
    assert main(["compute", "--set", str(p), "--N", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,a_n,certificate,witness"
    assert lines[1:] == [f"{n},1,exact,{' '.join(['0'] * n)}" for n in range(1, 6)]


def test_compute_writes_sidecar(tmp_path):
    out = tmp_path / "pj.csv"
    assert main(["compute", "--family", "pj", "--alpha", "0.333333", "--N", "30",
                 "--out", str(out)]) == 0
    values, certs = read_sequence_csv(out)
    assert len(values) == 30 and set(certs) == {"exact"}
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["method"]["mode"] == "pj-normal-form" and meta["exact_prefix"] == 30
    assert main(["fit", "--csv", str(out), "--out", str(tmp_path / "fit.json")]) == 0
    fit = json.loads((tmp_path / "fit.json").read_text())
    assert 0 < fit["exponent"] < 1


def test_csv_deterministic_across_threads(tmp_path):
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"h{threads}.csv"
        r = run_cli("compute", "--family", "harvey", "--N", "16", "--out", str(out),
                    env={"MIRS_THREADS": threads})
        assert r.returncode == 0, r.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_theta_output(capsys):
    assert main(["theta", "--gamma", "2", "--depth", "8"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["quotients"][:6] == ["1", "1", "2", "5", "27", "734"]
    assert doc["vartheta"].startswith("0.")


def test_exit_codes(tmp_path, capsys):
    assert main(["theta", "--gamma", "0.5"]) == 2
    assert main(["compute", "--N", "5"]) == 2
    assert main(["compute", "--family", "pj", "--set", "x.json"]) == 2
    assert main(["compute", "--set", str(tmp_path / "missing.json")]) == 2
    assert main(["verify", "bend", "--k", "3"]) == 2
    assert main(["compute", "--family", "pj", "--alpha", "0.6"]) == 3
    assert main(["compute", "--family", "harvey", "--N", "14", "--mode", "frontier",
                 "--capacity", "10", "--exact-or-fail"]) == 3
    assert main(["verify", "bend", "--out", str(tmp_path / "b.json")]) == 0
    assert json.loads((tmp_path / "b.json").read_text())["pass"] is True
    assert main(["verify", "jsr-one", "--depth", "6", "--out", str(tmp_path / "j.json")]) == 4


def test_construct_lift(tmp_path):
    out = tmp_path / "lift.json"
    assert main(["construct", "--family", "pj", "--lift", "--out", str(out)]) == 0
    assert read_matrix_set(out).dim == 6


def test_report(capsys):
    assert main(["report", "--family", "pj", "--N", "30", "--jsr-depth", "6"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {"sequence", "fit", "regularity", "jsr"} <= set(doc)
