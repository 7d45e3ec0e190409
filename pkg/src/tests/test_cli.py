# SPDX-License-Identifier: MIT
import json

import numpy as np
import pytest
from loguru import logger

from src.main.app.cli import main

QUADRATIC_F = ["--f", "u^2/2 + u"]


@pytest.fixture(autouse=True)
def drop_console_sink():
    yield
    logger.remove()


def _run(capsys, *argv: str) -> tuple[int, dict | None, str]:
    code = main(["-e", "test", *argv])
    captured = capsys.readouterr()
    document = json.loads(captured.out) if captured.out.strip() else None
    return code, document, captured.err


def test_classify_quadratic(capsys):
    code, document, _ = _run(capsys, "classify", *QUADRATIC_F)
    assert code == 0
    assert document["schema"] == 1
    assert document["family"] == "quadratic"
    assert [g["name"] for g in document["generators"]] == ["V1", "V2", "V3"]
    assert document["spans_agree"] is True


def test_classify_binds_family_parameters(capsys):
    code, document, _ = _run(
        capsys, "classify", "--no-ansatz", "--f", "d*(a*u + b)^n + u", "--d", "2",
        "--a", "3", "--b", "1", "--n", "3",
    )
    assert code == 0
    assert document["family"] == "power"
    assert document["params"]["n"] == "3"
    assert document["ansatz_generators"] == []


def test_output_is_deterministic(capsys):
    first = _run(capsys, "verify-generator", *QUADRATIC_F, "--gen", "x*dx + t*dt")
    second = _run(capsys, "verify-generator", *QUADRATIC_F, "--gen", "x*dx + t*dt")
    assert first[:2] == second[:2]


def test_determine_classical(capsys):
    code, document, _ = _run(capsys, "determine")
    assert code == 0
    assert document["method"] == "classical"
    assert document["f"] == "f(u)"
    assert document["equation_count"] == len(document["equations"]) > 0
    assert document["metadata"]["prolongation_order"] == 4
    assert "u_tt" in document["metadata"]["elimination"]


def test_verify_generator_verdicts(capsys):
    code, document, _ = _run(
        capsys, "verify-generator", *QUADRATIC_F, "--gen", "x*dx + 2*t*dt - 2*u*du"
    )
    assert code == 0
    assert document["passed"] is True
    code, document, _ = _run(capsys, "verify-generator", *QUADRATIC_F, "--gen", "x*dx + t*dt")
    assert code == 2
    assert document["passed"] is False


def test_verify_generator_nonclassical(capsys):
    code, document, _ = _run(
        capsys,
        "verify-generator",
        *QUADRATIC_F,
        "--method",
        "nonclassical",
        "--gen",
        "x*dx + 2*t*dt - 2*u*du",
    )
    assert code == 0
    assert document["label"] == "nonclassical residuals"


def test_reduce_scaling(capsys):
    code, document, _ = _run(capsys, "reduce", *QUADRATIC_F)
    assert code == 0
    assert document["kind"] == "scaling"
    assert document["report"]["passed"] is True


def test_reduce_exp_reports_mismatch(capsys):
    code, document, _ = _run(capsys, "reduce", "--f", "exp(u) + u")
    assert code == 2
    assert document["family"] == "exp"
    assert document["report"]["passed"] is False


def test_reduce_travelling_wave(capsys):
    code, document, _ = _run(capsys, "reduce", *QUADRATIC_F, "--lambda", "1")
    assert code == 0
    assert document["kind"] == "travelling_wave"
    assert document["integrated"] is not None


def test_solve_time_profile_with_table(capsys, tmp_path):
    table = tmp_path / "profile.txt"
    code, document, _ = _run(
        capsys, "solve", "--k3", "1", "--h0", "4", "--branch", "-1", "--table", str(table)
    )
    assert code == 0
    assert document["what"] == "time_profile"
    assert document["points"] == 201
    assert np.loadtxt(table).shape == (201, 3)


def test_solve_quadrature(capsys):
    code, document, _ = _run(
        capsys, "solve", "--n", "3", "--k3", "-1", "--h0", "0", "--h1", "1"
    )
    assert code == 0
    assert document["what"] == "quadrature"


def test_solve_invalid_data_reports_error(capsys):
    code, document, _ = _run(capsys, "solve", "--k3", "1", "--k4", "-10", "--h0", "1")
    assert code == 2
    assert document["passed"] is False
    assert document["command"] == "solve"
    assert document["error"]["code"] == 3002


def test_unknown_nonlinearity_mixed_with_terms(capsys):
    code, document, _ = _run(capsys, "classify", "--f", "f(u) + u^2")
    assert code == 2
    assert document["passed"] is False
    assert document["error"]["code"] == 2009


def test_residual_of_travelling_wave(capsys):
    code, document, _ = _run(capsys, "residual", *QUADRATIC_F, "--span", "0,3")
    assert code == 0
    assert len(document["rows"]) == 21 * 21


def test_residual_needs_concrete_f(capsys):
    code, document, _ = _run(capsys, "residual")
    assert code == 2
    assert document["error"]["code"] == 2008


def test_out_file(capsys, tmp_path):
    target = tmp_path / "nested" / "doc.json"
    code = main(["-e", "test", "--out", str(target), "classify", "--no-ansatz", *QUADRATIC_F])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["family"] == "quadratic"


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--f", "u^^2"],
        ["frobnicate"],
        ["verify-generator", "--gen", "dx*dt"],
        ["residual", "--span", "3,1"],
    ],
)
def test_usage_and_parse_errors(capsys, argv):
    code, document, err = _run(capsys, *argv)
    assert code == 1
    assert document is None
    assert "boussym: error" in err
