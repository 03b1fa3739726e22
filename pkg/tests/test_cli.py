"""Command-line behaviour: output documents, modes, config, exit codes."""

import json
import subprocess
import sys

import pytest

from cohdual.cli import main, parse_shape_spec
from cohdual.duality import GAMMA_FULL
from cohdual.exprio import write_document, element_to_document
from cohdual.independence import make_d


@pytest.fixture(autouse=True)
def _clean_config(monkeypatch):
    monkeypatch.delenv("COHDUAL_CONFIG", raising=False)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_doc(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv)
    return code, json.loads(out)


def test_shape_spec_spellings():
    assert parse_shape_spec("R", 2).roles == ("series", "series")
    assert parse_shape_spec("E", 2).roles == ("inverse", "inverse")
    assert parse_shape_spec("H:1", 3).roles == ("inverse", "series", "series")
    assert parse_shape_spec("D:1", 3).roles == ("series", "inverse", "inverse")
    assert parse_shape_spec("series,inverse").roles == ("series", "inverse")
    with pytest.raises(ValueError):
        parse_shape_spec("R")
    with pytest.raises(ValueError):
        parse_shape_spec("Q", 2)
    with pytest.raises(ValueError):
        parse_shape_spec("series,inverse", 3)


def test_dfam_document(capsys):
    code, doc = run_doc(capsys, "dfam", "--power", "2", "--lmax", "3")
    assert code == 0
    assert doc["kind"] == "element"
    assert doc["text"] == "1 + Y^-1*X + Y^-4*X^2 + Y^-9*X^3"
    assert doc["box"] == [3, 9]


def test_dfam_output_is_reproducible(capsys):
    code1, out1, _ = run_cli(capsys, "dfam", "--power", "3", "--lmax", "5")
    code2, out2, _ = run_cli(capsys, "dfam", "--power", "3", "--lmax", "5")
    assert code1 == code2 == 0
    assert out1 == out2


def test_out_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "d.json"
    code, out, _ = run_cli(capsys, "dfam", "--power", "1", "--lmax", "4",
                           "--out", str(target))
    assert code == 0
    assert target.read_bytes() == out.encode("ascii")


def test_delta_document_and_window(capsys):
    code, doc = run_doc(capsys, "delta", "1 + Y^-1*X", "--window", "0:3")
    assert code == 0
    assert doc["kind"] == "delta_profile"
    assert doc["start"] == 0
    assert doc["entries"] == [0, -1, None, None]


def test_delta_fit_failure_exits_one(capsys):
    code, doc = run_doc(capsys, "delta", "1 + Y^-1*X",
                        "--fit", "2", "--tail-start", "0")
    assert code == 1
    assert doc["fit"] is None
    assert doc["fit_power"] == 2


def test_delta_fit_needs_tail_start(capsys):
    code, _, err = run_cli(capsys, "delta", "1 + Y^-1*X", "--fit", "2")
    assert code == 64
    assert "tail-start" in err


def test_delta_reads_element_documents(capsys, tmp_path):
    path = tmp_path / "element.json"
    write_document(element_to_document(make_d(2, 6)), path)
    code, doc = run_doc(capsys, "delta", "@" + str(path))
    assert code == 0
    assert doc["entries"] == [0, -1, -4, -9, -16, -25, -36]


def test_missing_element_document(capsys, tmp_path):
    code, _, err = run_cli(capsys, "delta", "@" + str(tmp_path / "gone.json"))
    assert code == 64
    assert err


def test_act_and_derive_human_mode(capsys):
    code, out, _ = run_cli(capsys, "act", "Y", "1 + Y^-1*X", "--mode", "human")
    assert code == 0
    assert out == "X\n"
    code, out, _ = run_cli(capsys, "derive", "-j", "1", "1 + Y^-1*X",
                           "--mode", "human")
    assert code == 0
    assert out == "-Y^-1 - 2*Y^-2*X\n"


def test_pair_human_mode(capsys):
    code, out, _ = run_cli(capsys, "pair", "X^-1*Y^-2", "X*Y^2",
                           "--shape", "R", "-n", "2", "--mode", "human")
    assert code == 0
    assert out == "1\n"


def test_gamma_document(capsys):
    code, doc = run_doc(capsys, "gamma", "--shape", "E", "-n", "2",
                        "--gens", "0,1")
    assert code == 0
    assert doc["kind"] == "torsion_support"
    assert doc["result"] == GAMMA_FULL


def test_cohomology_verifies(capsys):
    code, doc = run_doc(capsys, "cohomology", "-n", "1", "-i", "1",
                        "--window", "2")
    assert code == 0
    assert doc["kind"] == "realization_check"
    assert doc["passed"] is True
    assert doc["nonzero_count"] == 2


def test_regular_verifies(capsys):
    code, out, _ = run_cli(capsys, "regular", "-n", "2", "-i", "1",
                           "--bound", "2", "--mode", "human")
    assert code == 0
    assert "verified: yes" in out


def test_indep_certificate(capsys):
    code, doc = run_doc(capsys, "indep", "1", "Y", "--lmax", "12")
    assert code == 0
    assert doc["kind"] == "independence_certificate"
    assert (doc["m0"], doc["a"], doc["b"]) == (2, 0, 1)
    assert doc["nonzero"] is True


def test_indep_torsion_is_inconclusive(capsys):
    code, doc = run_doc(capsys, "indep", "Y - X", "--lmax", "12")
    assert code == 2
    assert doc["kind"] == "inconclusive_window"
    assert doc["required_lmax"] is None


def test_indep_short_window_names_a_sufficient_one(capsys):
    code, doc = run_doc(capsys, "indep", "0", "1", "--lmax", "2")
    assert code == 2
    assert doc["required_lmax"] == 3


def test_check_suite(capsys):
    code, out, _ = run_cli(capsys, "check", "--suite", "io", "--seed", "5",
                           "--mode", "human")
    assert code == 0
    assert "suite io with seed 5: all passed" in out
    assert out.startswith("ok")


def test_usage_errors_exit_64(capsys):
    assert run_cli(capsys, "bogus")[0] == 64
    assert run_cli(capsys, "dfam", "--power", "1", "--lmax", "2", "--nope")[0] == 64
    assert run_cli(capsys, "delta", "++")[0] == 64
    assert run_cli(capsys, "delta", "X^99")[0] == 64
    assert run_cli(capsys)[0] == 64


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0


def test_config_file_presets_field(capsys, tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"field": "prime:7", "trunc": 5}))
    monkeypatch.setenv("COHDUAL_CONFIG", str(config))
    code, doc = run_doc(capsys, "act", "3", "5*X", "--shape", "R", "-n", "2")
    assert code == 0
    assert doc["field"] == "prime:7"
    assert doc["text"] == "X"
    assert doc["box"] == [5, 5]


def test_config_flag_overrides_file(capsys, tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"field": "prime:7"}))
    monkeypatch.setenv("COHDUAL_CONFIG", str(config))
    code, doc = run_doc(capsys, "act", "3", "5*X", "--shape", "R", "-n", "2",
                        "--field", "rational")
    assert code == 0
    assert doc["field"] == "rational"
    assert doc["text"] == "15*X"


def test_config_file_errors_exit_64(capsys, tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text("{broken")
    monkeypatch.setenv("COHDUAL_CONFIG", str(config))
    assert run_cli(capsys, "dfam", "--power", "1", "--lmax", "2")[0] == 64

    config.write_text(json.dumps({"color": "mauve"}))
    assert run_cli(capsys, "dfam", "--power", "1", "--lmax", "2")[0] == 64

    monkeypatch.setenv("COHDUAL_CONFIG", str(tmp_path / "absent.json"))
    assert run_cli(capsys, "dfam", "--power", "1", "--lmax", "2")[0] == 64


def test_module_entrypoint_runs():
    result = subprocess.run(
        [sys.executable, "-m", "cohdual", "dfam", "--power", "1", "--lmax", "3"],
        capture_output=True, text=True)
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["kind"] == "element"
    assert doc["text"] == "1 + Y^-1*X + Y^-2*X^2 + Y^-3*X^3"
