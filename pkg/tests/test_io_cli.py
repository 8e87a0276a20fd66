import csv
import json
import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

import sik.cli as cli
from sik.io import (
    InputError,
    config_from_json,
    field_from_json,
    matrix_from_json,
    matrix_to_json,
    path_to_json,
    symplectic_path_from_json,
)
from sik.paths import rotation_path
from sik.report import AuditRecord, AuditReport, Check
from sik.symplectic import SymplecticSpace, random_hermitian, random_lagrangian

V2 = SymplecticSpace.standard(2)


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def lagrangians(tmp_path):
    rng = np.random.default_rng(7)
    return {name: write(tmp_path / f"{name}.json", matrix_to_json(random_lagrangian(V2, rng).cols))
            for name in ("l1", "l2", "m1", "m2")}


@given(st.integers(1, 5), st.integers(0, 5), st.integers(0, 2**31 - 1))
def test_matrix_roundtrip(r, c, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(M))))
    assert back.shape == (r, c)
    assert np.array_equal(back, M)


@pytest.mark.parametrize("obj, msg", [
    ([1, 2], "rows, cols and data"),
    ({"rows": 2, "cols": 1, "data": [[1, 0]]}, "rows\\*cols"),
    ({"rows": 1, "cols": 1, "data": [[1]]}, "pair"),
    ({"rows": 1, "cols": 1, "data": [["x", 0]]}, "pair"),
    ({"rows": "a", "cols": 1, "data": []}, "integers"),
])
def test_malformed_matrices(obj, msg):
    with pytest.raises(InputError, match=msg):
        matrix_from_json(obj)


def test_sampled_path_reproduces_index():
    path = rotation_path(V2, 2.5, 3.0)
    back = symplectic_path_from_json(json.loads(json.dumps(path_to_json(path, samples=65))))
    assert np.allclose(back.end, path.end, atol=1e-10)


def test_sampled_path_rejections():
    far = path_to_json(rotation_path(V2, 2.5, 3.0), samples=3)
    with pytest.raises(InputError, match="too far apart"):
        symplectic_path_from_json(far)
    bad = path_to_json(rotation_path(V2, 1.0, 1.0), samples=5)
    bad["samples"][2]["matrix"] = matrix_to_json(2 * np.eye(4))
    with pytest.raises(InputError, match="not symplectic"):
        symplectic_path_from_json(bad)


def test_hamiltonian_path_validation():
    H = matrix_to_json(random_hermitian(4, 0))
    with pytest.raises(InputError, match="breaks"):
        symplectic_path_from_json({"breaks": [0.0], "hamiltonians": [H]})
    with pytest.raises(InputError, match="Hermitian"):
        symplectic_path_from_json({"breaks": [0.0, 1.0], "hamiltonians": [matrix_to_json(np.triu(np.ones((4, 4))))]})


def test_field_shortcuts():
    assert field_from_json("zero", V2, 2).terms == []
    f = field_from_json({"scaled_abs_j": 1.5}, V2, 2)
    assert math.isclose(f.bound(), 1.5)
    with pytest.raises(InputError):
        field_from_json({"nope": 1}, V2, 2)


# ----------------------------------------------------------------- CLI


def test_cli_triple_and_hormander(lagrangians, capsys):
    assert cli.run(["triple", "--alpha", lagrangians["l1"], "--beta", lagrangians["l2"],
                    "--gamma", lagrangians["m1"]]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["diagnostics"]["agree"] and 0 <= out["value"] <= 2
    assert cli.run(["hormander", "--l1", lagrangians["l1"], "--l2", lagrangians["l2"],
                    "--m1", lagrangians["m1"], "--m2", lagrangians["m2"]]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["diagnostics"]["agree"]
    assert out["value"] == out["diagnostics"]["paths"]


def test_cli_index_verbs(tmp_path, capsys):
    p = write(tmp_path / "rot.json", path_to_json(rotation_path(V2, 2.5, 3.0), samples=65))
    assert cli.run(["index", "--path", p]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 4 * 2
    ham = write(tmp_path / "h.json", {"breaks": [0.0, 3.0], "hamiltonians": [matrix_to_json(2.5 * np.eye(4))]})
    assert cli.run(["index", "--path", ham]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 8


def test_cli_maslov_both_methods(tmp_path, capsys):
    rng = np.random.default_rng(3)
    A = -V2.Jinv @ random_hermitian(4, rng, 3.0)
    L0 = random_lagrangian(V2, rng).cols
    lam = {"samples": [{"t": float(t), "matrix": matrix_to_json(sla.expm(A * t) @ L0)}
                       for t in np.linspace(0, 1, 65)]}
    p = write(tmp_path / "lam.json", lam)
    mu = write(tmp_path / "mu.json", matrix_to_json(random_lagrangian(V2, rng).cols))
    assert cli.run(["maslov", "--lam", p, "--mu", mu, "--method", "both"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["diagnostics"]["crossings"] == out["value"]


def test_cli_input_errors(lagrangians, tmp_path, capsys):
    base = ["triple", "--alpha", lagrangians["l1"], "--beta", lagrangians["l2"], "--gamma"]
    assert cli.run(base + [str(tmp_path / "missing.json")]) == 2
    assert "no such file" in capsys.readouterr().err
    (tmp_path / "junk.json").write_text("{")
    assert cli.run(base + [str(tmp_path / "junk.json")]) == 2
    assert "not valid JSON" in capsys.readouterr().err
    small = write(tmp_path / "small.json", matrix_to_json(np.eye(2)[:, :1]))
    assert cli.run(base + [small]) == 2
    assert "dimension mismatch" in capsys.readouterr().err
    notlag = write(tmp_path / "nl.json", matrix_to_json(np.eye(4)[:, [0, 2]]))
    assert cli.run(base + [notlag]) == 2
    assert "not Lagrangian" in capsys.readouterr().err
    assert cli.run(base + [lagrangians["m1"], "--tol-rank", "2"]) == 2
    assert "tolerance misuse" in capsys.readouterr().err
    assert cli.run(base + [lagrangians["m1"], "--frobnicate"]) == 2


def test_cli_audit_is_reproducible(tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("SIK_THREADS", threads)
        out = tmp_path / f"a{threads}.csv"
        assert cli.run(["audit", "--suite", "section3", "--seeds", "3", "--n", "2", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rows = list(csv.DictReader(outs[0].decode().splitlines()))
    assert rows and all(r["pass"] == "1" for r in rows)
    assert all(r["instance"].startswith("section3/n=2/seed=") for r in rows)


def test_cli_audit_failure_exit_code(monkeypatch, tmp_path):
    def failing(name, seeds, n, tol):
        return AuditReport([AuditRecord("x", [Check("made-up", 1, 0, "==", False)])])

    monkeypatch.setattr(cli, "run_suite", failing)
    out = tmp_path / "fail.csv"
    assert cli.run(["audit", "--suite", "section2", "--seeds", "1", "--out", str(out)]) == 1
    assert "made-up" in out.read_text()


def test_cli_mean_index(tmp_path):
    cfg = {"n": 2, "torus_dim": 2, "velocity": [1.0, math.sqrt(2.0)], "field": {"scaled_abs_j": 2.5},
           "xi": [[0.0, 0.0]], "schedule": [16, 32, 64, 128], "step": 1.0}
    p = write(tmp_path / "cfg.json", cfg)
    out = tmp_path / "run.csv"
    assert cli.run(["mean-index", "--config", p, "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [int(r["tau"].split(".")[0]) for r in rows] == [16, 32, 64, 128]
    assert all(int(r["band_lo"]) <= int(r["i_tau"]) <= int(r["band_hi"]) for r in rows)
    summary = json.loads((tmp_path / "run.csv.summary.json").read_text())
    assert summary["reference_within_m_over_tau"]
    first = out.read_bytes()
    assert cli.run(["mean-index", "--config", p, "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_config_parsing_errors():
    with pytest.raises((InputError, ValueError)):
        config_from_json({"n": 2})
