import json
import subprocess
import sys

import numpy as np
import pytest

from crpoint.cli import main
from crpoint.jsonio import dumps
from crpoint.pairs import ELLIPTIC_MODEL, HYPERBOLIC_MODEL, MatrixPair, random_pair

SMALL_GRID = ["--grid-s", "16", "--grid-u", "8", "--grid-theta", "8", "--fd-points", "10"]


def _write(tmp_path, name, obj):
    f = tmp_path / name
    f.write_text(obj if isinstance(obj, str) else dumps(obj))
    return str(f)


def _pair_json(A, B):
    return MatrixPair(A, B).to_json()


@pytest.fixture
def files(tmp_path):
    nonsym = ELLIPTIC_MODEL.to_json()
    nonsym["B"][0][1] = [0.5, 0.0]
    return {
        "eli": _write(tmp_path, "eli.json", ELLIPTIC_MODEL.to_json()),
        "hyp": _write(tmp_path, "hyp.json", HYPERBOLIC_MODEL.to_json()),
        "typeI": _write(tmp_path, "t1.json", _pair_json(np.diag([1, np.exp(0.7j)]), [[1, 0.3j], [0.3j, 2]])),
        "typeII": _write(tmp_path, "t2.json", _pair_json([[0, 1], [1, 1j]], np.diag([0.1, 0.3]))),
        "singularA": _write(tmp_path, "sing.json", _pair_json(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))),
        "degenerate": _write(tmp_path, "deg.json", _pair_json(np.diag([1.0, 0.0]), np.zeros((2, 2)))),
        "random": _write(tmp_path, "rand.json", random_pair(0).to_json()),
        "nonsym": _write(tmp_path, "nonsym.json", nonsym),
        "garbage": _write(tmp_path, "garbage.json", "{oops"),
        "extra": _write(tmp_path, "extra.json", {**ELLIPTIC_MODEL.to_json(), "C": 1}),
        "missing": str(tmp_path / "nope.json"),
    }


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_models(files, capsys):
    code, out, _ = run(["classify", files["eli"]], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["sign"] == "elliptic" and rep["det4"] == 1.0
    assert set(rep) == {"sign", "det4", "det4_normalized", "cosquare_class", "genericity_defect"}
    code, out, _ = run(["classify", files["hyp"]], capsys)
    assert code == 0 and json.loads(out)["sign"] == "hyperbolic" and json.loads(out)["det4"] == -1.0


def test_normal_form_type_one(files, capsys):
    code, out, _ = run(["normal-form", files["typeI"]], capsys)
    assert code == 0
    nf = json.loads(out)
    assert nf["class"]["tag"] == "type_i" and "theta" in nf["class"]
    diag = [nf["B_reduced"][0][0], nf["B_reduced"][1][1]]
    assert all(d[0] >= 0 and abs(d[1]) < 1e-12 for d in diag)


@pytest.mark.parametrize(
    "argv, code, reason",
    [
        (["classify", "nonsym"], 2, "invalid_input"),
        (["classify", "garbage"], 2, "invalid_input"),
        (["classify", "extra"], 2, "invalid_input"),
        (["classify", "missing"], 2, "io"),
        (["classify", "degenerate"], 0, None),
        (["classify", "degenerate", "--strict"], 3, None),
        (["classify", "eli", "--threads", "0"], 2, "bad_threads"),
        (["classify", "eli", "--threads", "4"], 0, None),
        (["normal-form", "typeII"], 3, "non_generic:type_ii"),
        (["normal-form", "singularA"], 3, "degenerate_A"),
        (["normal-form", "eli"], 3, "degenerate_A"),
        (["normal-form", "typeI"], 0, None),
        (["homotopy", "eli"], 0, None),
        (["homotopy", "degenerate"], 3, "degenerate_pair"),
        (["homotopy", "nonsym"], 2, "invalid_input"),
        (["levi-scan", "--model", "hyperbolic", "--grid", "2000"], 0, None),
        (["levi-scan", "--model", "elliptic", "--grid", "500", "--include-origin"], 1, None),
        (["levi-scan", "--model", "elliptic", "--radius", "0.5"], 2, "bad_radius"),
        (["levi-scan", "--model", "parabolic"], 2, None),
        (["selftest", "--cases", "9"], 2, "bad_cases"),
        (["classify", "eli", "--tol", "-1"], 2, None),
        (["classify", "eli", "--unknown-flag"], 2, None),
        (["frobnicate"], 2, None),
    ],
)
def test_exit_code_matrix(files, capsys, argv, code, reason):
    argv = [files.get(a, a) for a in argv]
    got, out, err = run(argv, capsys)
    assert got == code
    if reason is not None:
        assert json.loads(err)["reason"] == reason


def test_homotopy_model_is_single_constant_segment(files, capsys):
    code, out, _ = run(["homotopy", files["eli"]], capsys)
    path = json.loads(out)
    assert code == 0 and len(path["segments"]) == 1 and path["segments"][0]["kind"] == "constant"
    assert path["certificate"]["min_abs_det4"] == 1.0


def test_homotopy_then_surface_check(files, tmp_path, capsys):
    out_path = str(tmp_path / "path.json")
    assert run(["homotopy", files["random"], "--out", out_path], capsys)[0] == 0
    code, out, _ = run(["surface-check", out_path, *SMALL_GRID], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] is True and rep["n_used"] == rep["n_required"]
    code, out, _ = run(["surface-check", out_path, *SMALL_GRID, "--n", "1"], capsys)
    assert json.loads(out)["n_used"] == 1


def test_surface_check_degenerate_path(tmp_path, capsys):
    from crpoint.homotopy import HomotopyPath
    from crpoint.segments import Linear

    path = HomotopyPath([Linear(ELLIPTIC_MODEL, HYPERBOLIC_MODEL, "cross")])
    f = _write(tmp_path, "bad.json", path.to_json())
    code, out, _ = run(["surface-check", f, *SMALL_GRID], capsys)
    assert code == 1 and "certificate" in json.loads(out)


def test_levi_scan_csv(tmp_path, capsys):
    csv = tmp_path / "spectra.csv"
    code, out, _ = run(["levi-scan", "--model", "hyperbolic", "--grid", "300", "--csv", str(csv)], capsys)
    assert code == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "lambda1,lambda2,lambda3" and len(rows) == 301


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "random"],
        ["normal-form", "typeI"],
        ["homotopy", "random", "--seed", "3"],
        ["levi-scan", "--model", "elliptic", "--grid", "1000"],
    ],
)
def test_byte_identical_output(files, capsys, argv):
    argv = [files.get(a, a) for a in argv]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second and first.endswith("\n")


def test_threads_do_not_change_output(files, capsys):
    _, a, _ = run(["homotopy", files["random"], "--threads", "1"], capsys)
    _, b, _ = run(["homotopy", files["random"], "--threads", "8"], capsys)
    assert a == b


def test_module_entry_point_and_env_threads(files):
    env = {"CRPOINT_THREADS": "zero", "PATH": ""}
    res = subprocess.run([sys.executable, "-m", "crpoint", "classify", files["eli"]],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 2 and json.loads(res.stderr)["reason"] == "bad_threads"
    env["CRPOINT_THREADS"] = "2"
    res = subprocess.run([sys.executable, "-m", "crpoint", "classify", files["eli"]],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0 and json.loads(res.stdout)["sign"] == "elliptic"


def test_selftest_subset(capsys):
    code, out, err = run(["selftest", "--cases", "2", "--scale", "0.05"], capsys)
    assert code == 0
    assert json.loads(out)["criteria"][0]["criterion"] == 2
    assert err.startswith("[PASS] 2.")
