"""Command-line front end: exit codes, file formats, determinism."""
import json

import numpy as np
import pytest

from bennett8.cli import main

SPH = {
    "schema_version": 1,
    "kind": "spherical8",
    "u1": 0.25,
    "u2": 0.25 + np.pi / 3,
    "u3": 0.25 + np.pi / 3 + np.pi / 4,
    "beta1": np.pi / 4,
    "beta2": np.pi / 5,
    "branch1": "plus",
    "branch2": "minus",
}
SPA = dict(SPH, kind="spatial8", a1=0.8, a2=0.6)


def write_spec(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok(tmp_path, capsys):
    path = write_spec(tmp_path, SPH)
    assert main(["validate", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "spherical8"
    assert "beta3" in doc and "branch3" in doc
    assert doc["derived"]["c31"] == pytest.approx(doc["derived"]["c21"] * doc["derived"]["c32"])


def test_validate_rejects_bad_range(tmp_path, capsys):
    bad = dict(SPH, u3=0.25 + 1.8 + 1.6)
    path = write_spec(tmp_path, bad)
    assert main(["validate", path]) == 1
    err = capsys.readouterr().err
    diag = json.loads(err)
    assert diag["error"] == "InvalidSpec"
    assert "below pi" in diag["message"]


def test_validate_rejects_unknown_field(tmp_path, capsys):
    path = write_spec(tmp_path, dict(SPH, extra=1.0))
    assert main(["validate", path]) == 1
    assert "unknown fields" in json.loads(capsys.readouterr().err)["message"]


def test_validate_rejects_unknown_kind_and_version(tmp_path, capsys):
    assert main(["validate", write_spec(tmp_path, dict(SPH, kind="hexaflexagon"))]) == 1
    capsys.readouterr()
    assert main(["validate", write_spec(tmp_path, dict(SPH, schema_version=2))]) == 1


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.json")]) == 1


def test_pose_collapse_scene(tmp_path, capsys):
    path = write_spec(tmp_path, SPH)
    assert main(["pose", path, "--phi", "0"]) == 0
    scene = json.loads(capsys.readouterr().out)
    assert scene["aligned"] is True
    assert scene["symmetry"] is None
    ids = sorted(j["id"] for j in scene["joints"])
    assert len(ids) == 12 and len(set(ids)) == 12
    for joint in scene["joints"]:
        assert abs(joint["position"][2]) < 1e-12


def test_pose_scene_structure_and_obj(tmp_path, capsys):
    path = write_spec(tmp_path, SPA)
    out = tmp_path / "scene.json"
    obj = tmp_path / "scene.obj"
    assert main(
        ["pose", path, "--phi", "0.8", "--segments", "16", "--out", str(out), "--obj", str(obj)]
    ) == 0
    scene = json.loads(out.read_text())
    bar_ids = sorted(b["id"] for b in scene["bars"])
    assert bar_ids == ["g0", "g1", "g2", "g3", "h0", "h1", "h2", "h3"]
    assert sorted(scene["symmetry"]["axes"]) == ["s1", "s2", "s3", "s4", "s5", "s6"]
    assert scene["symmetry"]["line_n"]["id"] == "n"
    assert scene["symmetry"]["axis_t"]["id"] == "t"
    assert max(scene["residuals"].values()) < 1e-9
    text = obj.read_text()
    assert text.startswith("# bennett8 scene export")
    assert "\no n\n" in text and "\no t\n" in text
    # polylines sampled at the requested resolution
    circle_bar = json.loads(out.read_text())["bars"][0]
    assert len(circle_bar["polyline"]) == 16


def test_pose_cell_specs(tmp_path, capsys):
    iso = {
        "schema_version": 1,
        "kind": "spherical-isogram",
        "alpha": np.pi / 3,
        "beta": np.pi / 4,
        "branch": "plus",
    }
    assert main(["pose", write_spec(tmp_path, iso), "--phi", "1.0"]) == 0
    scene = json.loads(capsys.readouterr().out)
    assert scene["residuals"]["closure"] < 1e-12
    ben = {
        "schema_version": 1,
        "kind": "bennett-isogram",
        "alpha_twist": np.pi / 2,
        "beta_twist": np.pi / 6,
        "a_len": 2.0,
        "b_len": 1.0,
    }
    assert main(["pose", write_spec(tmp_path, ben, "b.json"), "--phi", "1.2"]) == 0
    scene = json.loads(capsys.readouterr().out)
    assert scene["phi2"] != 0
    assert scene["residuals"]["closure"] < 1e-9


def test_sweep_csv_and_determinism(tmp_path, capsys):
    path = write_spec(tmp_path, SPH)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["sweep", path, "--from", "-1.2", "--to", "1.2", "--samples", "9"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    header = lines[0].split(",")
    assert header[0] == "phi1"
    assert "R01_x" in header and "res_closure" in header and header[-1] == "error"
    assert len(lines) == 10


def test_sweep_spatial_header(tmp_path, capsys):
    path = write_spec(tmp_path, SPA)
    assert main(["sweep", path, "--from", "-0.5", "--to", "0.5", "--samples", "3"]) == 0
    header = capsys.readouterr().out.splitlines()[0].split(",")
    assert "I01_x" in header and "res_cells" in header


def test_verify_passes_and_fails_by_tolerance(tmp_path, capsys):
    path = write_spec(tmp_path, SPH)
    assert main(["verify", path, "--phi-grid", "7"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert "mobility" in out
    # absurd tolerance turns every family into a failure: exit code 2
    assert main(["verify", path, "--phi-grid", "5", "--tol", "1e-20"]) == 2


def test_verify_spatial(tmp_path, capsys):
    path = write_spec(tmp_path, SPA)
    assert main(["verify", path, "--phi-grid", "5"]) == 0
    out = capsys.readouterr().out
    assert "helical" in out and "FAIL" not in out


def test_derive_round_trip(tmp_path, capsys):
    path = write_spec(tmp_path, SPA)
    assert main(["derive", path]) == 0
    completed = json.loads(capsys.readouterr().out)
    assert {"beta3", "branch3", "b1", "b2", "b3"} <= set(completed)
    path2 = write_spec(tmp_path, completed, "completed.json")
    assert main(["validate", path2]) == 0
