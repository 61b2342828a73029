import io
import json

import numpy as np
import pytest

from leinertlab.cli import _int_list, dispatch
from leinertlab.fileio import (
    format_function,
    format_matrix,
    format_set,
    parse_coefficients,
    parse_function,
    parse_matrix,
    parse_sequence,
    parse_set,
)
from leinertlab.freegroup import parse_word
from leinertlab.line import FrequencyGrid, random_bandlimited


def run(*argv, env=None):
    buf = io.StringIO()
    code = dispatch(list(argv), out=buf, environ=env or {})
    return code, buf.getvalue()


def run_json(*argv, env=None):
    code, text = run("--json", *argv, env=env)
    return code, json.loads(text)


@pytest.fixture
def gens(tmp_path):
    p = tmp_path / "gens.txt"
    p.write_text("# free generators\nx1\nx2\n")
    return str(p)


def test_leinert_check(gens):
    code, doc = run_json("leinert", "check", "--set", gens, "--max-depth", "3")
    assert code == 0
    assert doc["result"]["verdict"] == "no_violation" and doc["result"]["depth"] == 3


def test_leinert_check_violation_json(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("x1\nx2\nx1*x3\nx2*x3\n")
    code, doc = run_json("leinert", "check", "--set", str(p), "--max-depth", "2")
    assert code == 0
    assert doc["result"]["witness"] == ["x1", "x2", "x2*x3", "x1*x3"]


def test_family_command():
    code, doc = run_json("leinert", "family", "--name", "UpperTriangularWeak", "--k", "2")
    assert code == 0 and doc["result"]["elements"] == ["e", "x1*x2^-1"]


def test_schur_sweep_csv():
    code, text = run("schur", "sweep", "--dims", "8,16", "--csv")
    assert code == 0
    table = [line for line in text.splitlines() if not line.startswith("#")]
    assert table[0] == "n,norm_H,norm_TriH,rho,skipped,tol"
    assert len(table) == 3


def test_flags_after_subcommand_and_before():
    a = run("--csv", "schur", "sweep", "--dims", "8")
    b = run("schur", "sweep", "--dims", "8", "--csv")
    assert a == b


def test_config_echoed():
    code, text = run("schur", "sweep", "--dims", "8")
    assert "# seed=20240601" in text and "# tol=" in text


def test_usage_errors(gens):
    assert run("leinert", "check", "--set", gens)[0] == 2
    assert run("leinert", "check", "--set", gens, "--max-depth", "x")[0] == 2
    assert run("--bogus")[0] == 2
    assert run("leinert", "check", "--set", "/nonexistent", "--max-depth", "1")[0] == 2
    assert run("schur", "sweep", "--dims", "16,8")[0] == 2


def test_parse_error_exit(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("x1*\n")
    assert run("leinert", "check", "--set", str(p), "--max-depth", "1")[0] == 2


def test_cap_exit(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("x1 1 0\nx2 1 0\n")
    assert run("--cap", "10", "norm", "sweep", "--coeffs", str(p), "--r-min", "1", "--r-max", "4")[0] == 3


def test_env_overrides(tmp_path):
    env = {"LEINERTLAB_FORMAT": "json", "LEINERTLAB_TOL": "1e-6", "LEINERTLAB_SEED": "7"}
    code, text = run("schur", "sweep", "--dims", "8", env=env)
    doc = json.loads(text)
    assert doc["config"]["tol"] == 1e-6 and doc["config"]["seed"] == 7
    # explicit flags beat the environment
    code, text = run("--tol", "1e-10", "schur", "sweep", "--dims", "8", env=env)
    assert json.loads(text)["config"]["tol"] == 1e-10
    assert run("schur", "sweep", "--dims", "8", env={"LEINERTLAB_TOL": "abc"})[0] == 2


def test_norm_sweep(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("x1 1 0\nx2 1 0\n")
    code, doc = run_json("norm", "sweep", "--coeffs", str(p), "--r-min", "1", "--r-max", "4")
    assert code == 0
    norms = [row["norm"] for row in doc["rows"]]
    assert norms == sorted(norms) and all(1.4 < x <= 2 for x in norms)
    assert doc["rows"][0]["row_bound"] == pytest.approx(np.sqrt(2))


def test_json_is_deterministic(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("x1 0.5 0.25\nx2*x1 -1 0\n")
    args = ("norm", "sweep", "--coeffs", str(p), "--r-min", "0", "--r-max", "3")
    assert run("--json", *args) == run("--json", *args)
    assert run("--csv", *args) == run("--csv", *args)


def test_schur_apply(tmp_path):
    n = 3
    sym = tmp_path / "s.txt"
    mat = tmp_path / "m.txt"
    sym.write_text(format_matrix(np.triu(np.ones((n, n)))))
    T = np.arange(9.0).reshape(3, 3)
    mat.write_text(format_matrix(T))
    code, doc = run_json("schur", "apply", "--symbol", str(sym), "--matrix", str(mat))
    assert code == 0
    got = np.array([[complex(*z) for z in row] for row in doc["result"]["matrix"]])
    assert np.array_equal(got, np.triu(T))


def test_line_interpolate(tmp_path):
    p = tmp_path / "phi.txt"
    p.write_text("0 1\n1 -1 0\n")
    code, doc = run_json("line", "interpolate", "--phi", str(p), "--eval-points", "0,0.25,1",
                         "--grid-m", "256", "--grid-k", "2")
    assert code == 0
    r = doc["result"]
    assert r["laws_hold"] and r["max_interp_error"] <= 1e-8
    assert [v["re"] for v in r["values"]] == pytest.approx([1.0, 0.5, -1.0])


def test_line_project(tmp_path):
    grid = FrequencyGrid(256, 2)
    v = random_bandlimited(grid, np.random.default_rng(0), spread=8)
    src = tmp_path / "v.txt"
    dst = tmp_path / "pv.txt"
    src.write_text(format_function(v))
    code, doc = run_json("line", "project", "--vhat", str(src), "--delta", "0.5", "--out", str(dst))
    assert code == 0 and doc["result"]["laws_hold"]
    pv = parse_function(dst.read_text(), 0.5)
    assert max(abs(x) for x in pv.values_at_integers().values.values()) <= 1e-8


def test_line_project_bad_grid(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("10 0.01\n" + "0 0\n" * 2000)
    assert run("line", "project", "--vhat", str(p))[0] == 2


def test_accept_only_and_tamper():
    code, doc = run_json("accept", "--only", "1,8")
    assert code == 0
    assert [c["criterion"] for c in doc["result"]["criteria"]] == [1, 8]
    code, doc = run_json("accept", "--only", "9", "--threshold", "c9_rel=1e-30")
    assert code == 1 and not doc["result"]["criteria"][0]["passed"]
    assert run("accept", "--threshold", "nope=1")[0] == 2


def test_int_list():
    assert _int_list("8,16,...,1024") == [8, 16, 32, 64, 128, 256, 512, 1024]
    assert _int_list("1,2,...,5") == [1, 2, 3, 4, 5]
    assert _int_list("3,5") == [3, 5]


# --- file formats -----------------------------------------------------------

def test_set_round_trip():
    E = parse_set("x1*x2^-1\n\n# c\nx1^2\ne\n")
    assert parse_set(format_set(E)) == E
    with pytest.raises(ValueError):
        parse_set("x1\nx1^1\n")


def test_coefficients_scalar_and_block():
    a = parse_coefficients("x1 1 2\nx2 0.5 0\n")
    assert a[parse_word("x1")] == 1 + 2j
    b = parse_coefficients("x1 1,0 0,1 0,0 2,0\n")
    assert np.array_equal(b.block(parse_word("x1")), [[1, 1j], [0, 2]])
    with pytest.raises(ValueError):
        parse_coefficients("x1 1 2 3\n")


def test_matrix_round_trip():
    A = np.array([[1 + 2j, 0], [0.1, -3j]])
    assert np.array_equal(parse_matrix(format_matrix(A)), A)
    with pytest.raises(ValueError):
        parse_matrix("2\n1 2\n")


def test_sequence_file():
    s = parse_sequence("0 1\n-3 0.5 2\n")
    assert s[0] == 1 and s[-3] == 0.5 + 2j and s[5] == 0


def test_function_round_trip():
    grid = FrequencyGrid(64, 1)
    v = random_bandlimited(grid, np.random.default_rng(1))
    w = parse_function(format_function(v), 0.5)
    assert w.grid == grid and np.array_equal(w.band, v.band)


def test_function_round_trip_keeps_lattice_terms():
    from leinertlab.line import a_norm, complement_projection

    grid = FrequencyGrid(64, 1)
    pv = complement_projection(random_bandlimited(grid, np.random.default_rng(2), spread=5))
    back = parse_function(format_function(pv), 0.5)
    assert back.lattice.values == pv.lattice.values
    assert a_norm(back - pv) == 0.0
