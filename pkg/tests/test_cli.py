import io
import json
import subprocess
import sys

import numpy as np
import pytest

from latgauss.cli import read_points_csv, run

A = {"dim": 2, "xi1": [-0.2, -0.2], "xi2": [[0.1, 0.0], [0.0, 0.2]]}
B = {"dim": 2, "xi1": [0.2, 0.2], "xi2": [[0.15, 0.0], [0.0, 0.25]]}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return write


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    text = out.getvalue()
    try:
        return code, json.loads(text)
    except json.JSONDecodeError:
        return code, text


def test_reproduce():
    code, res = call("reproduce")
    assert code == 0 and res["pass"] is True
    assert res["bhattacharyya"] == pytest.approx(1.6259948590224578, abs=1e-6)
    assert res["kl"] == pytest.approx(7.841371347366552, abs=1e-4)
    assert {"command", "accuracy", "config"} <= res.keys()


def test_theta(files):
    code, res = call("theta", "-p", files("a.json", {"xi1": [0.0], "xi2": [[1.0]]}))
    assert code == 0
    assert res["value"] == pytest.approx(1.0864348112133082, rel=1e-12)
    assert res["tail_bound"] <= 1e-12 and res["points_used"] > 0
    assert res["config"]["eps"] == 1e-12 and res["config"]["tol"] == 1e-10


def test_pmf(files):
    code, res = call("pmf", "-p", files("a.json", {"xi1": [0.0], "xi2": [[1.0]]}), "--point", "1")
    assert code == 0
    assert res["unnormalized"] == pytest.approx(0.04321391826377226, rel=1e-14)
    assert res["pmf"] == pytest.approx(0.04321391826377226 / 1.0864348112133082, rel=1e-12)


def test_pmf_off_lattice(files):
    code, res = call("pmf", "-p", files("a.json", {"xi1": [0.0], "xi2": [[1.0]]}), "--point", "0.5")
    assert code == 2 and res["error"]


def test_divergence_self_is_zero(files):
    pa = files("a.json", A)
    code, res = call("divergence", "--kind", "kl", "-p", pa, "-q", pa)
    assert code == 0 and res["value"] == pytest.approx(0.0, abs=1e-12)


def test_divergence_oracle(files):
    code, res = call("divergence", "--kind", "renyi", "--alpha", "0.5",
                     "-p", files("a.json", A), "-q", files("b.json", B), "--oracle")
    assert code == 0
    assert res["value"] == pytest.approx(res["oracle_value"], abs=1e-8)
    assert res["value"] == pytest.approx(2 * 1.6259948590224578, abs=2e-6)


def test_divergence_alias_and_missing_order(files):
    pa, pb = files("a.json", A), files("b.json", B)
    code, res = call("divergence", "--kind", "Hellinger", "-p", pa, "-q", pb)
    assert code == 0 and res["kind"] == "hellinger2"
    code, res = call("divergence", "--kind", "renyi", "-p", pa, "-q", pb)
    assert code == 2
    code, res = call("divergence", "--kind", "bogus", "-p", pa, "-q", pb)
    assert code == 2


def test_domain_error_exit_code(files):
    pa = files("a.json", {"xi1": [0.0], "xi2": [[0.1]]})
    pb = files("b.json", {"xi1": [0.0], "xi2": [[1.0]]})
    code, res = call("divergence", "--kind", "renyi", "--alpha", "2", "-p", pa, "-q", pb)
    assert code == 3 and res["error"] == "DomainError"


def test_convert_round_trip(files):
    code, nat = call("convert", "--to", "natural", "-p",
                     files("m.json", {"mu": [0.3, -0.1], "sigma": [[0.8, 0.0], [0.0, 1.2]]}))
    assert code == 0 and nat["iterations"] >= 1
    assert nat["accuracy"]["moment_residual"] <= 1e-10
    code, mom = call("convert", "--to", "moment", "-p",
                     files("n.json", {"xi1": nat["xi1"], "xi2": nat["xi2"]}))
    assert code == 0
    np.testing.assert_allclose(mom["mu"], [0.3, -0.1], atol=1e-9)
    np.testing.assert_allclose(mom["sigma"], [[0.8, 0.0], [0.0, 1.2]], atol=1e-9)


def test_convert_wrong_block(files):
    code, _ = call("convert", "--to", "natural", "-p", files("a.json", A))
    assert code == 2


def test_sample_determinism_and_csv(files, tmp_path):
    pa = files("a.json", A)
    code1, r1 = call("sample", "-p", pa, "-n", "50", "--seed", "3")
    code2, r2 = call("sample", "-p", pa, "-n", "50", "--seed", "3")
    assert code1 == code2 == 0 and r1["points"] == r2["points"]
    code, text = call("sample", "-p", pa, "-n", "20", "--seed", "3", "--method", "h2", "--csv")
    assert code == 0 and text.splitlines()[0] == "x1,x2"
    data = tmp_path / "s.csv"
    data.write_text(text)
    assert read_points_csv(str(data)).shape == (20, 2)


def test_mle(files, tmp_path):
    pa = files("a.json", A)
    _, text = call("sample", "-p", pa, "-n", "2000", "--seed", "1", "--csv")
    data = tmp_path / "s.csv"
    data.write_text(text)
    code, res = call("mle", "--data", str(data))
    assert code == 0 and res["n"] == 2000
    np.testing.assert_allclose(res["natural"]["xi2"], A["xi2"], atol=0.05)


def test_mle_degenerate(tmp_path):
    data = tmp_path / "z.csv"
    data.write_text("x1\n0\n0\n0\n")
    code, res = call("mle", "--data", str(data))
    assert code == 3 and res["error"] == "DegenerateSample"


def test_mle_bad_header(tmp_path):
    data = tmp_path / "z.csv"
    data.write_text("a,b\n0,1\n")
    assert call("mle", "--data", str(data))[0] == 2


def test_chernoff(files):
    code, res = call("chernoff", "-p", files("a.json", A), "-q", files("b.json", B))
    assert code == 0
    assert 0 < res["alpha_star"] < 1 and res["accuracy"]["kl_gap"] <= 1e-9


@pytest.mark.parametrize("bad", [
    "{not json",
    {"xi1": [0.0], "xi2": [[1.0]], "mu": [0.0], "sigma": [[1.0]]},
    {"xi1": [0.0, 0.0], "xi2": [[1.0, 2.0], [2.0, 1.0]]},
    {"xi1": [0.0], "xi2": [[1.0]], "dim": 2},
    {"xi1": [0.0]},
])
def test_invalid_parameter_files(files, bad):
    code, res = call("theta", "-p", files("bad.json", bad))
    assert code == 2 and "error" in res


def test_usage_errors():
    assert call("frobnicate")[0] == 2
    assert call("theta")[0] == 2


def test_config_echo_reproduces(files):
    code, res = call("theta", "-p", files("a.json", A), "--eps", "1e-9")
    echoed = files("echo.json", res["config"]["p"])
    code2, res2 = call("theta", "-p", echoed, "--eps", str(res["config"]["eps"]))
    assert code == code2 == 0 and res2["log_value"] == res["log_value"]


def test_shifted_lattice_file(files):
    lat = {"basis": [[1.0, 0.0], [0.0, 2.0]], "shift": [0.5, 0.0]}
    code, res = call("theta", "-p", files("l.json", {**A, "lattice": lat}))
    assert code == 0 and res["config"]["p"]["lattice"]["shift"] == [0.5, 0.0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latgauss", "reproduce"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
