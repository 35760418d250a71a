import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from holodeg.cli import RunConfig, run_command
from holodeg.errors import InputError


def dump(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def term(c, z, zbar):
    return {"re": float(np.real(c)), "im": float(np.imag(c)), "z": z, "zbar": zbar}


def poly2(*terms):
    return {"n": 2, "terms": [term(*t) for t in terms]}


CONJ = [poly2((1, [0, 0], [1, 0])), poly2((1, [0, 1], [0, 0]))]
IDENT = [poly2((1, [1, 0], [0, 0])), poly2((1, [0, 1], [0, 0]))]
LINE = {"base": [[0.1, 0], [0.2, 0]], "direction": [[1, 0], [0, 0]]}


def run(argv, capsys):
    code = run_command(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    return {
        "conj": dump(tmp_path, "conj.json", CONJ),
        "ident": dump(tmp_path, "ident.json", IDENT),
        "line": dump(tmp_path, "line.json", LINE),
        "ball": dump(tmp_path, "ball.json", {"type": "ball", "center": [[0, 0], [0, 0]],
                                             "radius": 1.0}),
        "u": dump(tmp_path, "u.json", {"terms": [{"re": 1, "im": 0, "i": 2, "j": 1}]}),
        "cz": dump(tmp_path, "cz.json", {"terms": [{"re": 1, "im": 0, "i": 0, "j": 1}]}),
        "tmp": tmp_path,
    }


def test_wind_from_samples(files, capsys):
    th = 2 * np.pi * np.arange(64) / 64
    path = dump(files["tmp"], "z3.json", [[v.real, v.imag] for v in np.exp(3j * th)])
    code, out = run(["wind", "--loop", path], capsys)
    assert code == 0 and out["winding"] == 3


def test_wind_from_polynomial_with_csv_and_figure(files, capsys):
    csv_path = files["tmp"] / "loop.csv"
    figs = files["tmp"] / "figs"
    code, out = run(["wind", "--poly", files["u"], "--export-csv", str(csv_path),
                     "--figures", str(figs)], capsys)
    assert code == 0 and out["winding"] == 1
    assert (figs / "loop.png").stat().st_size > 0
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["theta", "re", "im"]
    code, again = run(["wind", "--csv", str(csv_path)], capsys)
    assert again["winding"] == 1


def test_wind_needs_input(capsys):
    code, out = run(["wind"], capsys)
    assert code == 2 and out["error"] == "InputError"


def test_slice(files, capsys):
    code, out = run(["slice", "--line", files["line"], "--domain", files["ball"]], capsys)
    assert code == 0 and out["transversal"]
    assert out["slice"]["radius"] == pytest.approx(np.sqrt(1 - 0.04))


def test_slice_misses(files, capsys):
    far = dump(files["tmp"], "far.json", {"base": [[0, 0], [2, 0]], "direction": [[1, 0], [0, 0]]})
    code, out = run(["slice", "--line", far], capsys)
    assert code == 0 and out["transversal"] is False and out["slice"] is None


def test_split_poly_and_map(files, capsys):
    code, out = run(["split", "--poly", files["u"], "--radius", "2"], capsys)
    assert code == 0 and out["sIsConstant"] and out["maxReconstructionError"] < 1e-12
    code, out = run(["split", "--map", files["conj"], "--line", files["line"],
                     "--figures", str(files["tmp"] / "f")], capsys)
    assert code == 0 and not out["sIsConstant"]
    assert os.path.exists(out["figures"][0])


def test_extend_test_verdicts(files, capsys):
    code, out = run(["extend-test", "--map", files["conj"], "--lines", "20"], capsys)
    assert code == 1 and not out["extends"] and "witnessLine" in out
    code, out = run(["extend-test", "--map", files["ident"], "--lines", "20"], capsys)
    assert code == 0 and out["extends"]
    code, out = run(["extend-test", "--poly", files["cz"]], capsys)
    assert code == 1 and out["defect"] == pytest.approx(1.0)


def test_degree_oracle(files, capsys):
    figs = files["tmp"] / "z"
    code, out = run(["degree-oracle", "--map", files["conj"], "--figures", str(figs)], capsys)
    assert code == 0 and out["degree"] == -1 and len(out["zeros"]) == 1
    assert (figs / "zeros.png").exists()


def test_degree_oracle_degenerate(files, capsys):
    sq = dump(files["tmp"], "sq.json", [poly2((1, [2, 0], [0, 0])), poly2((1, [0, 1], [0, 0]))])
    code, out = run(["degree-oracle", "--map", sq], capsys)
    assert code == 3 and out["error"] == "IrregularZero"
    code, out = run(["degree-oracle", "--map", sq, "--regularize"], capsys)
    assert code == 0 and out["degree"] == 2


def test_degree_oracle_zero_on_boundary(files, capsys):
    bad = dump(files["tmp"], "bad.json", [poly2((1, [1, 0], [0, 0]), (-1, [0, 0], [0, 0])),
                                          poly2((1, [0, 1], [0, 0]))])
    code, out = run(["degree-oracle", "--map", bad], capsys)
    assert code == 2 and out["error"] == "ZeroOnBoundary"


def test_structured_degree(files, capsys):
    code, out = run(["structured-degree", "--map", files["conj"], "--line", files["line"],
                     "--figures", str(files["tmp"] / "s")], capsys)
    assert code == 0 and out["degree"] == -1 and out["method"] == "slice-winding"


def test_witness_and_refusal(files, capsys):
    code, out = run(["witness", "--map", files["conj"], "--figures", str(files["tmp"] / "w")],
                    capsys)
    assert code == 0 and out["sliceWinding"] == -1 and out["ambientDegree"]["degree"] == -1
    assert (files["tmp"] / "w" / "witness_slice.png").exists()
    code, out = run(["witness", "--map", files["ident"], "--lines", "20"], capsys)
    assert code == 1 and out["error"] == "DataExtends"


def test_linear_witness(files, capsys):
    A = dump(files["tmp"], "A.json", [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    code, out = run(["linear-witness", "--matrix", A], capsys)
    assert code == 0 and out["sign"] == -1
    M = dump(files["tmp"], "M.json", np.eye(4).tolist())
    code, out = run(["linear-witness", "--matrix", M], capsys)
    assert code == 1 and out["error"] == "IsComplexLinear"
    bad = dump(files["tmp"], "bad.json", [[1, 2, 3]])
    code, out = run(["linear-witness", "--matrix", bad], capsys)
    assert code == 2


def test_errors_are_json(files, capsys):
    code, out = run(["degree-oracle", "--map", str(files["tmp"] / "missing.json")], capsys)
    assert code == 2 and "message" in out
    code, out = run(["no-such-command"], capsys)
    assert code == 2 and out["error"] == "InputError"
    code, out = run([], capsys)
    assert code == 2
    junk = files["tmp"] / "junk.json"
    junk.write_text("{not json")
    code, out = run(["degree-oracle", "--map", str(junk)], capsys)
    assert code == 2


def test_dimension_mismatch(files, capsys):
    ball3 = dump(files["tmp"], "b3.json", {"type": "ball", "center": [[0, 0]] * 3, "radius": 1})
    code, out = run(["degree-oracle", "--map", files["conj"], "--domain", ball3], capsys)
    assert code == 2


def test_out_file(files, capsys):
    dest = files["tmp"] / "res" / "o.json"
    code = run_command(["degree-oracle", "--map", files["conj"], "--out", str(dest)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["degree"] == -1


def test_config_roundtrip_and_caps(tmp_path):
    cfg = RunConfig(seed=3, lines=17, grid_density=5)
    again = RunConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg
    for bad in ({"sampleCounts": {"boundary": 10 ** 7}}, {"sampleCounts": {"lambdaSteps": 10}},
                {"gridDensity": 0}, {"seed": -1}, {"tolerances": {"zeroTol": 0}}, [1, 2]):
        with pytest.raises(InputError):
            RunConfig.from_json(bad)


def test_config_file_is_used(files, capsys):
    cfg = dump(files["tmp"], "cfg.json", {"seed": 4, "sampleCounts": {"lines": 5}})
    code, out = run(["extend-test", "--map", files["ident"], "--config", cfg], capsys)
    assert code == 0 and out["linesTested"] == 5
    bad = dump(files["tmp"], "bad.json", {"sampleCounts": {"lines": 0}})
    code, out = run(["extend-test", "--map", files["ident"], "--config", bad], capsys)
    assert code == 2


def test_repeat_runs_are_byte_identical(files):
    def once(argv):
        return subprocess.run([sys.executable, "-m", "holodeg", *argv], capture_output=True,
                              check=False).stdout
    for argv in (["degree-oracle", "--map", files["conj"], "--seed", "5"],
                 ["extend-test", "--map", files["conj"], "--lines", "30"],
                 ["verify", "--only", "winding,split_identity", "--omit-runtime"]):
        a, b = once(argv), once(argv)
        assert a and a == b


def test_verify_subset_with_figures(tmp_path, capsys):
    code, out = run(["verify", "--only", "winding,linear_witness", "--figures", str(tmp_path)],
                    capsys)
    assert code == 0 and out["passed"] and out["seed"] == 7
    assert {r["name"] for r in out["records"]} == {"winding", "linear_witness", "oracle_stability"}
    assert (tmp_path / "verify.png").exists() and (tmp_path / "degrees.png").exists()


def test_verify_unknown_experiment(capsys):
    code, out = run(["verify", "--only", "nope"], capsys)
    assert code == 2
