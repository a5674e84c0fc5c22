import json
import shutil
import subprocess

import pytest

from chromlab.cli import ENDPOINT_NOTE, main
from chromlab.experiments import read_records


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_thresholds(capsys):
    code, out, _ = run(capsys, "thresholds", "--d", "6.0")
    rec = json.loads(out)
    assert code == 0 and rec["k_d"] == 3 and rec["band"] == [3, 4] and rec["exact_flag"]


def test_help_mentions_endpoint_rule(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "2k log k" in capsys.readouterr().out
    assert "relative 1e-12" in ENDPOINT_NOTE


def test_sample_then_chi(capsys, tmp_path):
    path = tmp_path / "g.txt"
    code, _, _ = run(capsys, "sample", "--model", "gnp", "--n", "30", "--d", "3", "--seed", "4",
                     "--out", str(path))
    assert code == 0 and path.read_text().startswith("30 ")
    code, out, _ = run(capsys, "chi", str(path))
    rec = json.loads(out)
    assert rec["clique_bound"] <= rec["chi"] <= rec["greedy_bound"]
    code, out, _ = run(capsys, "chi", str(path), "--k", str(rec["chi"]))
    assert json.loads(out)["colorable"]


def test_chi_counts_on_a_loop(capsys, tmp_path):
    path = tmp_path / "loop.txt"
    path.write_text("2 2\n0 0\n0 1\n")
    code, out, _ = run(capsys, "chi", str(path), "--k", "2", "--count", "--balanced")
    rec = json.loads(out)
    assert rec["loops"] == 1 and rec["colorings"] == 0 and rec["balanced_colorings"] == 0


def test_moments_exact_strings(capsys):
    code, out, _ = run(capsys, "moments", "--n", "4", "--k", "2", "--m", "2")
    rec = json.loads(out)
    assert rec["EZ"]["numerator"] == "3" and rec["EZ"]["denominator"] == "2"
    code, out, _ = run(capsys, "moments", "--n", "8", "--k", "2", "--c", "0.5")
    assert json.loads(out)["m"] == 4


@pytest.mark.parametrize("target,extra", [
    ("theorem7", ["--k", "3", "--trials", "2000"]),
    ("expo", ["--k", "3", "--trials", "500"]),
    ("prop9", ["--k", "3", "--points", "5"]),
    ("lemma12", ["--k", "3"]),
    ("neveruse", ["--k", "4"]),
    ("eta-zeta", ["--k", "5"]),
])
def test_verify_targets_pass(capsys, target, extra):
    code, out, _ = run(capsys, "verify", target, *extra)
    assert code == 0 and json.loads(out)["passed"] is True


def test_verify_counterexample_reports_failure(capsys):
    code, out, _ = run(capsys, "verify", "counterexample", "--k", "3")
    rec = json.loads(out)
    assert code == 1 and rec["passed"] is False and rec["gap"] < 0


def test_experiment_chi_csv_and_requirements(capsys, tmp_path):
    path = tmp_path / "chi.csv"
    code, _, err = run(capsys, "experiment", "chi", "--n", "50", "--d", "2.5", "--trials", "8",
                       "--out", str(path), "--require-band", "1.0")
    assert code == 0
    assert json.loads(err)["trials"] == 8
    assert len(read_records(path)) == 8
    code, _, err = run(capsys, "experiment", "chi", "--n", "50", "--d", "2.5", "--trials", "3",
                       "--out", str(path), "--require-exact", "1.01")
    assert code == 1 and json.loads(err)["failures"]


def test_experiment_uses_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CHROMLAB_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "experiment", "moments", "--k", "2", "--n", "4", "8", "--c", "0", "1",
                       "--format", "json")
    assert code == 0 and out == ""
    (f,) = tmp_path.iterdir()
    assert len(json.loads(f.read_text())) == 4


def test_bad_input_exit_codes(capsys, tmp_path):
    assert run(capsys, "thresholds", "--d", "-1")[0] == 2
    assert run(capsys, "experiment", "chi", "--n", "1000", "--d", "3")[0] == 2
    code, _, err = run(capsys, "chi", str(tmp_path / "absent.txt"))
    assert code == 2 and "absent.txt" in err
    assert run(capsys, "sample", "--n", "5")[0] == 2
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])


@pytest.mark.skipif(shutil.which("chromlab") is None, reason="console script not installed")
def test_console_script_pipe():
    sample = subprocess.run(["chromlab", "sample", "--n", "12", "--m", "20", "--seed", "1"],
                            capture_output=True, text=True, check=True)
    chi = subprocess.run(["chromlab", "chi", "-"], input=sample.stdout,
                         capture_output=True, text=True, check=True)
    assert json.loads(chi.stdout)["m"] == 20
