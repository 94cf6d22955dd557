import csv
import io
import json
import math

import numpy as np
import pytest

from boolcube.cli import EXIT_CAPACITY, EXIT_FAIL, EXIT_OK, EXIT_USAGE, generate, main
from boolcube.formats import load_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_of_majority(capsys):
    code, out, _ = run(capsys, "spectrum", "--gen", "maj:3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["n"] == 3
    assert {tuple(c["subset"]): c["value"] for c in data["coefficients"]} == {
        (1,): 0.5, (2,): 0.5, (3,): 0.5, (1, 2, 3): -0.5,
    }


def test_spectrum_degree_filter(capsys):
    _, out, _ = run(capsys, "spectrum", "--gen", "maj:3", "--degree", "3")
    assert json.loads(out)["coefficients"] == [{"subset": [1, 2, 3], "value": -0.5}]


def test_constant_table(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("n=2\n# constant\n1.25 1.25\n1.25 1.25\n")
    _, out, _ = run(capsys, "spectrum", str(path))
    assert json.loads(out)["coefficients"] == [{"subset": [], "value": 1.25}]


def test_spectrum_synth_roundtrip(capsys, tmp_path):
    spec = tmp_path / "s.json"
    table = tmp_path / "t.txt"
    assert main(["spectrum", "--gen", "random:4:3:9", "--out", str(spec)]) == EXIT_OK
    assert main(["synth", str(spec), "--out", str(table)]) == EXIT_OK
    capsys.readouterr()
    _, out, _ = run(capsys, "spectrum", str(table))
    got, want = json.loads(out), json.loads(spec.read_text())
    assert [c["subset"] for c in got["coefficients"]] == [c["subset"] for c in want["coefficients"]]
    for a, b in zip(got["coefficients"], want["coefficients"]):
        assert a["value"] == pytest.approx(b["value"], abs=1e-12)
    np.testing.assert_allclose(load_table(table.read_text()).values, generate("random:4:3:9").values, atol=1e-12)


def test_majority_roundtrip_is_exact(capsys, tmp_path):
    spec = tmp_path / "s.json"
    table = tmp_path / "t.txt"
    main(["spectrum", "--gen", "maj:5", "--out", str(spec)])
    main(["synth", str(spec), "--out", str(table)])
    capsys.readouterr()
    _, out, _ = run(capsys, "spectrum", str(table))
    assert json.loads(out) == json.loads(spec.read_text())


def test_parse_error_reports_line(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("n=1\n1.0\noops\n")
    code, _, err = run(capsys, "spectrum", str(path))
    assert code == EXIT_USAGE
    assert "line 3" in err


def test_capacity_exit(capsys):
    code, _, err = run(capsys, "spectrum", "--gen", "const:25:1")
    assert code == EXIT_CAPACITY and "capacity" in err


def test_bh_dictator(capsys):
    code, out, _ = run(capsys, "bh", "--gen", "dictator:4:2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["ratio"] == 1.0 and rep["pass"] is None
    _, out, _ = run(capsys, "bh", "--gen", "maj:3", "--csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["ratio"]) == pytest.approx(2 ** (1 / 3))


def test_cheb_csv(capsys):
    code, out, _ = run(capsys, "cheb", "--d", "2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "quantity,d,m,value"
    assert "psi,2,1,-6" in lines


def test_search_exhaustive(capsys, tmp_path):
    table = tmp_path / "r.csv"
    code, out, _ = run(
        capsys, "search", "--n", "2", "--d", "2", "--strategy", "flat-sign-exhaustive", "--csv", str(table)
    )
    assert code == EXIT_OK
    assert json.loads(out)["ratio"] == pytest.approx(math.sqrt(2))
    assert table.read_text().splitlines()[0] == "d,n,source,strategy,bh_ratio,part_ratio,part_m"
    _, out, _ = run(
        capsys, "search", "--n", "2", "--d", "2", "--strategy", "flat-sign-exhaustive", "--homogeneous"
    )
    assert json.loads(out)["ratio"] == 1.0


def test_verify_markov_all_pass(capsys):
    code, out, _ = run(capsys, "verify", "markov", "--d", "12")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["counts"]["fail"] == 0 and data["counts"]["pass"] == len(data["reports"])
    assert data["config"]["d"] == 12 and data["config"]["seed"] == 0


def test_verify_deterministic_across_thread_counts(capsys):
    _, one, _ = run(capsys, "verify", "all", "--seed", "3", "--trials", "3", "--threads", "1")
    _, many, _ = run(capsys, "verify", "all", "--seed", "3", "--trials", "3", "--threads", "4")
    assert one == many
    assert "wall_time" not in json.loads(one)


def test_verify_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "lorentz", "--trials", "2", "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_verify_failure_exit(capsys, monkeypatch):
    from boolcube import suites
    from boolcube.report import InequalityReport

    monkeypatch.setitem(suites.SUITES, "lorentz", lambda p, rng: [InequalityReport.build("x", 2.0, 1.0)])
    code, out, _ = run(capsys, "verify", "lorentz")
    assert code == EXIT_FAIL
    assert json.loads(out)["counts"]["fail"] == 1


def test_usage_errors(capsys):
    assert run(capsys, "verify", "nope")[0] == EXIT_USAGE
    assert run(capsys, "spectrum", "--gen", "bogus:1")[0] == EXIT_USAGE
    assert run(capsys, "search", "--n", "2", "--d", "3")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE


def test_threads_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("BSPEC_THREADS", "notanint")
    assert run(capsys, "verify", "lorentz", "--trials", "1")[0] == EXIT_USAGE
    monkeypatch.setenv("BSPEC_THREADS", "2")
    assert run(capsys, "verify", "lorentz", "--trials", "1")[0] == EXIT_OK
