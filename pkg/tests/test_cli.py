import json

import numpy as np

from curveinv.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_invariants_circle(capsys):
    code, out = run_cli(capsys, "invariants", "--preset", "circle", "--n", "64", "--refine", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "1"
    res = doc["results"]
    assert abs(res["writhe"]["value"]) < 1e-10
    assert abs(res["twist_principal"]["value"]) < 1e-10
    assert res["self_linking"]["lk"] == 0
    assert res["calugareanu"]["residual"] < 1e-6


def test_invariants_trefoil_closure(capsys):
    code, out = run_cli(capsys, "invariants", "--preset", "torus_knot",
                        "--params", "p=2,q=3,R=2,r=0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["calugareanu"]["residual"] < 1e-3
    assert doc["results"]["self_linking"]["lk"] == -3


def test_invariants_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, out = run_cli(capsys, "invariants", "--curve", str(bad))
    assert code == 2
    assert json.loads(out)["error"] == "ParseError"


def test_invariants_bad_preset_params_exit_2(capsys):
    code, out = run_cli(capsys, "invariants", "--preset", "torus_knot",
                        "--params", "p=2,q=4")
    assert code == 2
    assert json.loads(out)["error"] == "InvalidParams"


def test_numerical_failure_exit_3(capsys):
    # inflected curve: total torsion is undefined
    code, out = run_cli(capsys, "invariants", "--preset", "twisted_unknot",
                        "--params", "amplitude=0.2")
    assert code == 3
    assert json.loads(out)["error"] == "CurvatureVanishes"


def test_verify_integrality_circle(capsys):
    code, out = run_cli(capsys, "verify", "integrality", "--preset", "circle",
                        "--n", "128", "--refine", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["details"]["k"] == 0


def test_verify_writhe_inversion_trefoil(capsys):
    code, out = run_cli(capsys, "verify", "writhe_inversion", "--preset", "trefoil",
                        "--centers", "1", "--n", "512", "--refine", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert all(r < 1e-3 for r in doc["residuals"])
    assert len(doc["inversions"]) == 1


def test_verify_explicit_center(capsys):
    code, out = run_cli(capsys, "verify", "binormal_relation", "--preset", "trefoil",
                        "--center", "8,-3,1", "--radius", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["residuals"][0] < 1e-4


def test_determinism_byte_identical(capsys):
    _, first = run_cli(capsys, "invariants", "--preset", "trefoil", "--n", "256",
                       "--refine", "1", "--epsilon", "0.05")
    _, second = run_cli(capsys, "invariants", "--preset", "trefoil", "--n", "256",
                        "--refine", "1", "--epsilon", "0.05")
    assert first == second

    _, v1 = run_cli(capsys, "verify", "integrality", "--preset", "circle",
                    "--n", "128", "--refine", "1")
    _, v2 = run_cli(capsys, "verify", "integrality", "--preset", "circle",
                    "--n", "128", "--refine", "1")
    assert v1 == v2


def test_export_curve_rows(capsys):
    code, out = run_cli(capsys, "export", "curve", "--preset", "trefoil", "--n", "512")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "u,x,y,z"
    assert len(lines) == 513


def test_export_indicatrix_unit_norm(capsys):
    code, out = run_cli(capsys, "export", "indicatrix", "--preset", "trefoil",
                        "--sign", "+", "--n", "64")
    assert code == 0
    rows = [list(map(float, line.split(","))) for line in out.strip().split("\n")[1:]]
    pts = np.array(rows)[:, 1:]
    assert np.abs(np.linalg.norm(pts, axis=1) - 1).max() < 1e-10


def test_export_inverted_curve_matches_pointwise(capsys):
    from curveinv import Inversion, invert_point, make_preset
    code, out = run_cli(capsys, "export", "inverted-curve", "--preset", "trefoil",
                        "--center", "10,0,0", "--radius", "5", "--n", "32")
    assert code == 0
    rows = [list(map(float, line.split(","))) for line in out.strip().split("\n")[1:]]
    curve = make_preset("trefoil")
    inv = Inversion(np.array([10.0, 0.0, 0.0]), 5.0)
    for u, x, y, z in rows:
        expect = invert_point(inv, curve.position(u))
        assert np.abs(np.array([x, y, z]) - expect).max() < 1e-12


def test_export_determinism(capsys):
    _, a = run_cli(capsys, "export", "curve", "--preset", "ellipse", "--n", "64")
    _, b = run_cli(capsys, "export", "curve", "--preset", "ellipse", "--n", "64")
    assert a == b


def test_export_to_directory(capsys, tmp_path):
    code, _ = run_cli(capsys, "export", "curve", "--preset", "circle",
                      "--n", "64", "--out-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "curve.csv").exists()


def test_verify_failure_exit_3(capsys):
    # absurdly tight tolerance forces a fail verdict
    code, out = run_cli(capsys, "verify", "writhe_inversion", "--preset", "trefoil",
                        "--centers", "1", "--n", "512", "--refine", "1",
                        "--tolerance", "1e-18")
    assert code == 3
    assert json.loads(out)["pass"] is False
