import csv
import io
import json
import subprocess
import sys

import pytest

from starmop.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out) if out else None


def test_poly_examples(capsys):
    code, doc = run_json(capsys, "poly", "--params", "2", "--n", "1")
    assert code == 0
    assert doc["coefficients"] == [["-2", "0"], ["1", "0"]]
    code, doc = run_json(capsys, "poly", "--family", "charlier", "--r", "2", "--params", "1,2", "--n", "1,1")
    assert code == 0
    assert doc["coefficients"] == [["2", "0"], ["-4", "0"], ["1", "0"]]
    assert list(doc) == ["family", "r", "params", "multi_index", "basis", "coefficients",
                         "pathway", "agreement_max_delta"]
    assert float(doc["agreement_max_delta"]) < 1e-70


def test_poly_invalid_beta(capsys):
    code, _, err = run(capsys, "poly", "--family", "meixner", "--params", "1/2", "--beta", "-1", "--n", "1")
    assert code == 2 and "beta" in err


def test_poly_meixner_json_fields(capsys):
    code, doc = run_json(capsys, "poly", "--family", "meixner", "--params", "[0.25, [0.5, 0]]",
                         "--beta", "1/2", "--n", "2,1", "--pathway", "rodrigues")
    assert code == 0
    assert doc["beta"] == ["0.5", "0"]
    assert doc["pathway"] == "rodrigues"
    assert len(doc["coefficients"]) == 4 and doc["coefficients"][-1] == ["1", "0"]


def test_poly_pochhammer_basis(capsys):
    _, doc = run_json(capsys, "poly", "--params", "1,2", "--n", "1,1", "--basis", "pochhammer")
    # t^2 - 4t + 2 = (-t)_2 + 3(-t)_1 + 2
    assert doc["coefficients"] == [["2", "0"], ["3", "0"], ["1", "0"]]


def test_poly_complex_params_are_strings(capsys):
    _, doc = run_json(capsys, "poly", "--params", "1+i,2", "--n", "1,0")
    assert doc["coefficients"][0] == ["-1", "-1"]
    assert all(isinstance(x, str) for pair in doc["coefficients"] for x in pair)


def test_poly_validation(capsys):
    assert run(capsys, "poly", "--params", "1,1", "--n", "1,1")[0] == 2
    assert run(capsys, "poly", "--params", "1,2", "--n", "1")[0] == 2
    assert run(capsys, "poly", "--params", "1,2", "--r", "3", "--n", "1,1")[0] == 2
    assert run(capsys, "poly", "--params", "abc", "--n", "1")[0] == 2
    assert run(capsys, "poly", "--params", "1", "--n", "1", "--format", "csv")[0] == 2
    assert run(capsys, "poly", "--params", "1", "--n", "1", "--precision-bits", "16")[0] == 2


def test_non_normal_exit_code(capsys):
    code, _, _ = run(capsys, "poly", "--params", "1,1+0i", "--n", "1,1", "--pathway", "determinant")
    assert code == 2  # coinciding parameters are caught before the solve
    import starmop.cli as cli
    from starmop.errors import NonNormalIndexError

    def boom(args, bits):
        raise NonNormalIndexError("singular")
    original = cli.COMMANDS["poly"]
    cli.COMMANDS["poly"] = boom
    try:
        assert run(capsys, "poly")[0] == 3
    finally:
        cli.COMMANDS["poly"] = original


def test_recurrence_csv(capsys):
    code, out, _ = run(capsys, "recurrence", "--params", "1,2", "--n", "1,1", "--leg", "0", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    row = rows[0]
    assert (row["b_re"], row["d0_re"], row["d1_re"], row["residual_max_coeff"]) == ("3", "1", "2", "0")


def test_recurrence_zero_index_and_meixner(capsys):
    _, doc = run_json(capsys, "recurrence", "--params", "1,2", "--n", "0,0")
    assert all(d == ["0", "0"] for row in doc["rows"] for d in row["d"])
    _, doc = run_json(capsys, "recurrence", "--family", "meixner", "--params", "1/2", "--beta", "3", "--n", "0")
    assert doc["rows"][0]["b"] == ["3", "0"]  # beta c / (1 - c)


def test_recurrence_box(capsys):
    _, doc = run_json(capsys, "recurrence", "--family", "meixner", "--params", "1/4,1/3", "--beta", "1",
                      "--box", "2,1")
    assert len(doc["rows"]) == 6 * 2
    assert all(row["residual_max_coeff"] == "0" for row in doc["rows"])


def test_verify_default_smoke(capsys):
    code, doc = run_json(capsys, "verify")
    assert code == 0
    assert list(doc) == ["orthogonality", "pathways", "recurrence"]
    assert all(section["pass"] for section in doc.values())


def test_verify_perturbed_fails(capsys):
    code, doc = run_json(capsys, "verify", "--params", "1,2", "--n", "1,1", "--perturb", "1e-30")
    assert code == 1
    assert not doc["orthogonality"]["pass"]
    assert float(doc["orthogonality"]["max_residual"]) > 1e-31


def test_verify_validation(capsys):
    assert run(capsys, "verify", "--params", "1,2", "--n", "")[0] == 2
    assert run(capsys, "verify", "--family", "meixner", "--params", "2,1/2", "--beta", "1", "--n", "1,1")[0] == 2


def test_zeros(capsys):
    code, doc = run_json(capsys, "zeros", "--params", "1,2", "--n", "1,1")
    assert code == 0
    assert doc["all_positive_real_simple"] is True
    assert doc["t_roots"][0][0].startswith("0.5857864376269049511983112757903019214")
    assert doc["t_roots"][1][0].startswith("3.4142135623730950488016887242096980785")
    assert [z["ray"] for z in doc["star_zeros"]] == [0, 1, 0, 1]


def test_zeros_complex_parameters_report_roots(capsys):
    code, doc = run_json(capsys, "zeros", "--params", "1+i,2", "--n", "1,1")
    assert code == 0
    assert doc["classified"] is False and len(doc["t_roots"]) == 2


def test_limit(capsys):
    code, doc = run_json(capsys, "limit", "--params", "1", "--n", "1")
    assert code == 0
    assert doc["coefficient_distances"] == ["0"] * 9
    assert doc["fitted_rate"] is None
    code, doc = run_json(capsys, "limit", "--params", "1,2", "--n", "1,1", "--betas", "16,32,64,128")
    assert code == 0 and doc["fitted_rate"] < -0.8


def test_limit_invalid_gamma(capsys):
    assert run(capsys, "limit", "--params", "-3", "--n", "1", "--betas", "2")[0] == 2
    assert run(capsys, "limit", "--params", "-2", "--n", "1", "--betas", "2")[0] == 2


def test_output_file_and_determinism(tmp_path, capsys):
    target = tmp_path / "out.json"
    args = ["zeros", "--family", "meixner", "--params", "1/4,1/2", "--beta", "3", "--n", "2,2"]
    assert main(args + ["--out", str(target)]) == 0
    first = target.read_text()
    assert main(args + ["--out", str(target)]) == 0
    assert target.read_text() == first
    assert capsys.readouterr().out == ""


def test_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("MOP_PRECISION_BITS", "64")
    _, doc = run_json(capsys, "zeros", "--params", "1,2", "--n", "1,1")
    short = doc["t_roots"][0][0]
    monkeypatch.setenv("MOP_PRECISION_BITS", "512")
    _, doc = run_json(capsys, "zeros", "--params", "1,2", "--n", "1,1")
    assert len(doc["t_roots"][0][0]) > 2 * len(short)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "starmop", "poly", "--params", "2", "--n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"] == [["-2", "0"], ["1", "0"]]
