import csv
import json
import math
import subprocess
import sys

import pytest

from qcspectral import bounds, cli


@pytest.fixture(autouse=True)
def out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    return tmp_path


def run_json(argv, path, capsys=None):
    code = cli.run(argv + ["--json", str(path)])
    return code, json.loads(path.read_text())


def test_catalog(tmp_path, capsys):
    code, doc = run_json(["catalog"], tmp_path / "c.json")
    assert code == 0 and len(doc["maps"]) == 5
    assert json.loads(capsys.readouterr().out)["command"] == "catalog"


def test_default_output_location(out_dir):
    assert cli.run(["catalog"]) == 0
    assert (out_dir / "qcspectral-catalog.json").exists()


def test_bound_rose_petal(tmp_path):
    code, doc = run_json(["bound", "--domain", "rose-petal", "--p", "3"], tmp_path / "b.json")
    assert code == 0
    res = doc["result"]
    _, inf_b = bounds.infimum_over_q(3, 3, 1.2)
    assert res["rhs"] == pytest.approx(inf_b / 8 * (2 * math.sqrt(2)) ** 3, rel=1e-13)
    assert res["mu_lower"] == pytest.approx(1 / res["rhs"])
    assert res["variant"] == "measure-preserving-inf" and res["beta"] == "inf"
    assert "image_area" in doc["quadrature"]


def test_bound_epicycloid_variants(tmp_path):
    code, doc = run_json(["bound", "--domain", "epicycloid:A=2,B=1,n=3", "--p", "3"],
                         tmp_path / "b.json")
    assert code == 0 and doc["result"]["variant"] == "inf-regular"
    code, doc = run_json(["bound", "--domain", "epicycloid:A=2,B=1,n=3", "--p", "3",
                          "--beta", "2"], tmp_path / "b2.json")
    assert code == 0 and doc["result"]["variant"] == "beta-regular"
    assert doc["quadrature"]["jacobian_power_integral"]["relative_increment"] < 1e-8


def test_norm(tmp_path):
    code, doc = run_json(["norm", "--domain", "epicycloid:A=2,B=1,n=3"], tmp_path / "n.json")
    assert code == 0
    assert doc["image_area"] == pytest.approx(4 * math.pi, rel=1e-12)
    code, doc = run_json(["norm", "--domain", "rose-petal", "--beta", "3"], tmp_path / "n3.json")
    assert doc["jacobian_norm"] == pytest.approx(math.pi ** (1 / 3), rel=1e-12)


def test_quasidisc(tmp_path):
    code, doc = run_json(["quasidisc", "--K", "2", "--p", "4", "--area", "3"], tmp_path / "q.json")
    assert code == 0
    assert doc["result"]["Mp_decimal"] is None
    lb = doc["lower_bound"]
    assert lb["mu_lower"]["ln"] == pytest.approx(lb["mu_lower_via_radius"]["ln"], rel=1e-14)


@pytest.mark.parametrize("argv", [
    ["bound", "--domain", "bogus", "--p", "3"],
    ["bound", "--domain", "identity", "--p", "2"],
    ["bound", "--domain", "epicycloid", "--p", "3", "--variant", "measure-preserving"],
    ["eigen", "--p", "1.5", "--rings", "2"],
    ["verify", "--p", "2", "--rings", "2"],
    ["quasidisc", "--K", "0.5", "--p", "3"],
    ["catalog", "--svg", "x.svg"],
    ["nosuchcommand"],
    ["bound"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.run(argv) == 2


def test_eigen_outputs(tmp_path):
    svg, csv_path, mesh_out = tmp_path / "e.svg", tmp_path / "e.csv", tmp_path / "m.txt"
    code, doc = run_json(["eigen", "--p", "3", "--rings", "6", "--svg", str(svg),
                          "--csv", str(csv_path), "--mesh-out", str(mesh_out)],
                         tmp_path / "e.json")
    assert code == 0 and doc["result"]["converged"]
    assert doc["mesh"]["triangles"] == 6 * 36
    assert 'class="boundary"' in svg.read_text()
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["x", "y", "u"] and len(rows) == 1 + doc["mesh"]["vertices"]
    assert mesh_out.read_text().startswith(str(doc["mesh"]["vertices"]))


def test_eigen_study_csv(tmp_path):
    csv_path = tmp_path / "s.csv"
    code, doc = run_json(["eigen", "--p", "2", "--rings", "4", "--study", "4,8",
                          "--csv", str(csv_path)], tmp_path / "s.json")
    assert code == 0 and doc["convergence_study"]["rings"] == [4, 8]
    assert next(csv.reader(csv_path.open())) == ["rings", "h", "mu"]


def test_eigen_non_converged_exit_code(tmp_path):
    code, doc = run_json(["eigen", "--p", "3", "--rings", "6", "--max-iter", "1"],
                         tmp_path / "e.json")
    assert code == 3 and not doc["result"]["converged"]


def test_verify_pass(tmp_path):
    code, doc = run_json(["verify", "--domain", "rose-petal", "--p", "3", "--rings", "12"],
                         tmp_path / "v.json")
    assert code == 0 and doc["result"]["status"] == "pass"
    assert doc["result"]["slack_ratio"]["ln"] > 0


def test_bound_csv_is_flat(tmp_path):
    csv_path = tmp_path / "b.csv"
    cli.run(["bound", "--domain", "identity", "--p", "4", "--csv", str(csv_path)])
    header, values = list(csv.reader(csv_path.open()))
    assert "result.rhs" in header and len(header) == len(values)


NUMERIC_CASES = [
    ["bound", "--domain", "ellipse-shear:a=0.5", "--p", "4"],
    ["quasidisc", "--K", "1.5", "--p", "3", "--area", "2"],
    ["verify", "--domain", "identity", "--p", "3", "--rings", "8"],
]


@pytest.mark.parametrize("argv", NUMERIC_CASES, ids=lambda a: a[0])
def test_from_json_round_trip(argv, tmp_path):
    first, second = tmp_path / "1.json", tmp_path / "2.json"
    assert cli.run(argv + ["--json", str(first)]) == 0
    assert cli.run(["--from-json", str(first), "--json", str(second)]) == 0
    a, b = json.loads(first.read_text()), json.loads(second.read_text())
    assert a == b
    # byte-identical
    assert first.read_bytes() == second.read_bytes()


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("command = bound\ndomain = rose-petal\np = 3\n")
    code, doc = run_json(["--config", str(cfg)], tmp_path / "c.json")
    assert code == 0 and doc["config"]["domain"] == "rose-petal"
    # command line overrides the file
    code, doc = run_json(["--config", str(cfg), "bound", "--p", "4"], tmp_path / "c2.json")
    assert code == 0 and doc["config"]["p"] == 4.0
    assert cli.run(["--config", str(tmp_path / "missing.cfg")]) == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "qcspectral", "catalog", "--json",
                          str(tmp_path / "c.json")], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["command"] == "catalog"
