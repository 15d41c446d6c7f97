import csv
import io
import json

import pytest

from milnor_gamma import checks
from milnor_gamma.cli import main, render_number
from milnor_gamma.ktheory import VerificationReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_psi_a1(capsys):
    code, out, _ = run(capsys, "psi", "--family", "A", "--rank", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "psi-table"
    first = doc["payload"]["cycles"][0]
    assert len(first["slots"]) == 1
    assert first["slots"][0]["value"][0].startswith("-7.0898154036220644158561299264")


def test_psi_d4_csv_has_auxiliary_rows(capsys):
    code, out, _ = run(capsys, "psi", "--family", "D", "--rank", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][0] == "cycle"
    cycles = {r[0] for r in rows[1:]}
    assert {"v_1", "v_4", "beta_1", "beta_4", "alpha_1"} <= cycles
    assert len(rows) - 1 == 4 * len(cycles)


def test_psi_e8_grid(capsys):
    _, out, _ = run(capsys, "psi", "--family", "E8")
    cycles = json.loads(out)["payload"]["cycles"]
    assert all(len(c["slots"]) == 8 for c in cycles)
    assert len(cycles) == 15


@pytest.mark.parametrize("fam,rank,det,smith", [
    ("E6", None, "3", ["1", "1", "1", "1", "1", "3"]),
    ("A", "5", "6", None),
    ("E8", None, "1", None),
])
def test_matrix(capsys, fam, rank, det, smith):
    argv = ["matrix", "--family", fam] + (["--rank", rank] if rank else [])
    code, out, _ = run(capsys, *argv)
    payload = json.loads(out)["payload"]
    assert code == 0 and payload["determinant"] == det
    if smith:
        assert payload["smith"] == smith
        assert payload["gram"][1] == ["-1", "2", "-1", "1", "-1", "0"]


def test_verify_theorem1(capsys):
    code, out, _ = run(capsys, "verify", "theorem1", "--family", "D", "--rank", "5")
    doc = json.loads(out)
    assert code == 0 and doc["payload"]["passed"]


def test_verify_roots_e8(capsys):
    code, out, _ = run(capsys, "verify", "roots", "--family", "E8")
    report = json.loads(out)["payload"]["reports"][0]
    assert code == 0 and report["checks"][0]["witness"]["count"] == 240


def test_verify_oracle_e7(capsys):
    code, out, _ = run(capsys, "verify", "oracle", "--family", "E7", "--digits", "50")
    doc = json.loads(out)
    assert code == 0
    for check in doc["payload"]["reports"][0]["checks"]:
        dev = check["witness"].get("max_deviation") or check["witness"]["max_relative_deviation"]
        assert float(dev) < 1e-10


def test_verify_failure_exit_code(capsys, monkeypatch):
    def failing(scope, fam, n, digits=50):
        rep = VerificationReport(fam, n)
        rep.add("forced", False)
        return rep

    monkeypatch.setattr(checks, "run_scope", failing)
    code, out, _ = run(capsys, "verify", "roots", "--family", "E6")
    assert code == 1 and not json.loads(out)["payload"]["passed"]


@pytest.mark.parametrize("argv", [
    ["psi", "--family", "D", "--rank", "3"],
    ["psi", "--family", "Q"],
    ["psi"],
    ["matrix", "--family", "A"],
    ["matrix", "--family", "E7", "--rank", "6"],
    ["verify", "nothing"],
    ["verify", "roots", "--rank", "4"],
    ["psi", "--family", "E6", "--digits", "10"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("MILNOR_GAMMA_DIGITS", "many")
    code, _, err = run(capsys, "psi", "--family", "E6")
    assert code == 2 and "MILNOR_GAMMA_DIGITS" in err


def test_env_precision_is_used(capsys, monkeypatch):
    monkeypatch.setenv("MILNOR_GAMMA_DIGITS", "64")
    _, out, _ = run(capsys, "matrix", "--family", "E7")
    assert json.loads(out)["digits"] == 64


def test_output_is_deterministic_and_out_flag(capsys, tmp_path):
    _, first, _ = run(capsys, "chgamma", "--family", "E7")
    _, second, _ = run(capsys, "chgamma", "--family", "E7")
    assert first == second
    target = tmp_path / "doc.json"
    code, out, _ = run(capsys, "chgamma", "--family", "E7", "--out", str(target))
    assert code == 0 and out == "" and target.read_text() == first
    assert json.loads(first) == json.loads(target.read_text())


def test_catalog_and_pretty(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "E6")
    payload = json.loads(out)["payload"]
    assert code == 0 and payload["singularity"]["polynomial"] and len(payload["cycles"]) == 12
    code, out, _ = run(capsys, "matrix", "--family", "E6", "--format", "pretty")
    assert code == 0 and "smith" in out and "alpha_{1,2}" in out


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--family", "A", "--rank", "2", "--lambda", "1/2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 + 6 * 2


def test_number_rendering():
    assert render_number(0, 50) == "0"
    assert render_number("1e-60", 50) == "0"
    assert len(render_number(2, 50).replace(".", "").replace("-", "")) == 30
