import json
import os

import pytest

from confcohom.cli import main


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def plane_module(tmp_path):
    return write(tmp_path, "plane.json", {"type": "module", "ring": "Q", "ranks": {"2": 1}})


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cohomology_command(plane_module, capsys, tmp_path):
    out_path = str(tmp_path / "result.json")
    code, _, _ = run(
        capsys,
        [
            "cohomology",
            "--input",
            plane_module,
            "--n",
            "2",
            "--upset",
            "full",
            "--characters",
            "--output",
            out_path,
        ],
    )
    assert code == 0
    data = json.loads(open(out_path).read())
    assert data["cohomology"] == [
        {"degree": 3, "free_rank": 1, "torsion": []},
        {"degree": 4, "free_rank": 1, "torsion": []},
    ]
    assert data["characters"][0]["by_cycle_type"] == {"[1, 1]": 1, "[2]": 1}
    assert not os.path.exists(out_path + ".tmp")  # atomic write cleans up


def test_cohomology_point_cdga(capsys, tmp_path):
    point = write(
        tmp_path,
        "point.json",
        {
            "type": "cdga",
            "ring": "Q",
            "basis": [{"name": "e", "degree": 0}],
            "d": [],
            "mult": [["e", "e", [["e", 1]]]],
        },
    )
    code, out, _ = run(capsys, ["cohomology", "--input", point, "--n", "3", "--upset", "full"])
    assert code == 0
    assert json.loads(out)["cohomology"] == []
    code, out, _ = run(
        capsys, ["cohomology", "--input", point, "--n", "3", "--upset", "full", "--mode", "CD"]
    )
    assert code == 0
    assert json.loads(out)["cohomology"] == [{"degree": 0, "free_rank": 1, "torsion": []}]


def test_e1_command(plane_module, capsys):
    code, out, _ = run(capsys, ["e1", "--input", plane_module, "--n", "2", "--upset", "full"])
    assert code == 0
    data = json.loads(out)
    assert {entry["p"] for entry in data["e1"]} == {0, 1}


def test_upset_file_and_k_equals(plane_module, capsys, tmp_path):
    upset = write(tmp_path, "upset.json", {"n": 3, "generators": [[[1, 2, 3]]]})
    code, out, _ = run(
        capsys,
        ["cohomology", "--input", plane_module, "--n", "3", "--upset", "file:" + str(upset)],
    )
    assert code == 0
    via_file = json.loads(out)["cohomology"]
    code, out, _ = run(
        capsys, ["cohomology", "--input", plane_module, "--n", "3", "--upset", "k-equals:3"]
    )
    assert json.loads(out)["cohomology"] == via_file


def test_malformed_input_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, ["cohomology", "--input", str(bad), "--n", "2"])
    assert code == 1
    assert "error" in json.loads(err.splitlines()[-1])


def test_scale_bound_exits_two(plane_module, capsys):
    code, _, err = run(capsys, ["poset", "--n", "10", "--variant", "hatcheck"])
    assert code == 2
    assert json.loads(err.splitlines()[-1])["kind"] == "scale-bound"


def test_poset_command(capsys):
    code, out, _ = run(capsys, ["poset", "--n", "4", "--variant", "hatcheck"])
    assert code == 0
    assert "H^3 rank 6" in out


def test_series_command(capsys):
    code, out, _ = run(capsys, ["series", "--p", "t^2", "--k", "2", "--max-arity", "2"])
    assert code == 0
    assert "arity 2: (-t^3 + t^4) s_(2)" in out
    code, out, _ = run(capsys, ["series", "--p", "0", "--k", "2", "--max-arity", "3"])
    assert code == 0
    assert "arity 0: (1) s_()" in out
    code, _, _ = run(capsys, ["series", "--p", "t^", "--k", "2", "--max-arity", "2"])
    assert code == 1


def test_series_euler(capsys):
    code, out, _ = run(capsys, ["series", "--p", "t^2", "--k", "2", "--max-arity", "2", "--euler"])
    assert code == 0
    assert "arity 2" not in out  # the two terms cancel at t = 1


def test_ce_compare_command(plane_module, capsys):
    code, out, _ = run(capsys, ["ce-compare", "--input", plane_module, "--n", "3"])
    assert code == 0
    assert out.strip().endswith("match") or "match" in out


def test_ainfty_command(capsys, tmp_path):
    fixture = write(
        tmp_path,
        "dga.json",
        {
            "ring": "Q",
            "basis": [
                {"name": "s", "degree": 1},
                {"name": "x", "degree": 2},
                {"name": "sx", "degree": 3},
                {"name": "x2", "degree": 4},
            ],
            "d": [["s", "x", 1], ["sx", "x2", 1]],
            "mult": [
                ["s", "x", [["sx", 1]]],
                ["x", "s", [["sx", 1]]],
                ["x", "x", [["x2", 1]]],
            ],
            "ideal": ["x", "sx", "x2"],
        },
    )
    code, out, _ = run(capsys, ["ainfty-check", "--input", fixture, "--max-n", "5"])
    assert code == 0
    data = json.loads(out)
    assert data["hypotheses_ok"] and data["relations_ok"]


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, ["selftest", "--only", "configuration-space-oracle"])
    assert code == 0
    assert "PASS configuration-space-oracle" in out


def test_determinism(plane_module, capsys):
    argv = ["cohomology", "--input", plane_module, "--n", "3", "--upset", "full", "--characters", "--e1"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2


def test_jobs_flag(plane_module, capsys):
    code, out, _ = run(capsys, ["--jobs", "2", "cohomology", "--input", plane_module, "--n", "2"])
    assert code == 0
    code, _, _ = run(capsys, ["--jobs", "0", "cohomology", "--input", plane_module, "--n", "2"])
    assert code == 1
