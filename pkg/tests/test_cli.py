import json
import subprocess
import sys

from thetacat.cli import main


def run_cli(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def test_faces_command(tmp_path):
    code, data = run_cli(tmp_path, "faces", "t[2,1]")
    assert code == 0
    assert data["count"] == 5
    assert data["inner_count"] == 1
    assert data["outer_count"] == 4


def test_faces_bad_shape_token(tmp_path, capsys):
    code = main(["faces", "2,1"])
    assert code == 1


def test_hom_command(tmp_path):
    code, data = run_cli(tmp_path, "hom", "t[1]", "t[1]")
    assert code == 0
    assert data["count"] == 3
    assert data["by_degree"] == {"1": 2, "2": 1}


def test_check_pass(tmp_path):
    code, data = run_cli(
        tmp_path,
        "check", "--mode", "strict-groupoid", "--nerve", "B1:Z2",
        "--max-dim", "2", "--max-entry", "2",
    )
    assert code == 0
    assert data["verdict"] == "pass"


def test_check_fail_witness(tmp_path):
    code, data = run_cli(
        tmp_path,
        "check", "--mode", "groupoid", "--nerve", "B2strict:Z2",
        "--max-dim", "2", "--max-entry", "2",
    )
    assert code == 2
    assert data["verdict"] == "fail"
    assert data["witness"]["shape"] == [2, 1]
    assert data["witness"]["horn"] == [2, 0]


def test_check_table_input(tmp_path):
    from thetacat.groups import cyclic
    from thetacat.nerves import nerve_b1
    from thetacat.presheaves import TablePresheaf, table_to_json
    from thetacat.subshapes import WindowSpec

    tbl = TablePresheaf.from_presheaf(nerve_b1(cyclic(2)), WindowSpec(1, 2))
    path = tmp_path / "presheaf.json"
    path.write_text(json.dumps(table_to_json(tbl)))
    code, data = run_cli(
        tmp_path,
        "check", "--mode", "cat", "--input", str(path),
        "--max-dim", "1", "--max-entry", "2",
    )
    assert code == 0 and data["verdict"] == "pass"


def test_check_usage_errors(tmp_path):
    assert main(["check", "--mode", "cat"]) == 1
    assert main(["check", "--mode", "nonsense", "--nerve", "B1:Z2"]) == 1
    assert main(["check", "--mode", "cat", "--nerve", "B9:Z2"]) == 1


def test_window_cap_enforced(tmp_path):
    code = main(
        ["check", "--mode", "cat", "--nerve", "B1:Z2", "--max-dim", "7"]
    )
    assert code == 1


def test_certify_command(tmp_path):
    code, data = run_cli(tmp_path, "certify", "t[2]", "--gamma", "1:0,1:2")
    assert code == 0
    assert data["verified"] and data["steps"] == 1


def test_certify_bad_gamma(tmp_path):
    assert main(["certify", "t[2]", "--gamma", "1:0"]) == 1
    assert main(["certify", "t[2]", "--gamma", "zzz"]) == 1


def test_probe_full(tmp_path):
    code, data = run_cli(tmp_path, "probe", "t[3]", "--target", "full")
    assert code == 0
    assert data["found"] and data["verified"]
    assert len(data["certificate"]["steps"]) == 4


def test_probe_budget_exceeded(tmp_path):
    code, data = run_cli(
        tmp_path, "probe", "t[3]", "--target", "full", "--budget", "3"
    )
    assert code == 3
    assert not data["found"]


def test_h2_command(tmp_path):
    code, data = run_cli(tmp_path, "h2", "--group", "Z2", "--coeff", "Z3")
    assert code == 0
    assert data["z2"] == 3 and data["h2_classes"] == 1
    assert data["nat_maps"] == 3 and data["maps_equal_cocycles"]
    assert data["round_trip_ok"] and data["agree"]
    assert data["num_classes"] == 1


def test_h2_nonabelian_coeff(tmp_path):
    assert main(["h2", "--group", "Z2", "--coeff", "S3"]) == 1


def test_h2_custom_group_file(tmp_path):
    from thetacat.groups import klein_four

    path = tmp_path / "v4.json"
    path.write_text(json.dumps(klein_four().to_json()))
    code, data = run_cli(tmp_path, "h2", "--group", "Z2", "--coeff", f"@{path}")
    assert code == 0 and data["coeff"] == "V4"


def test_selftest_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["selftest", "--seed", "42", "--out", str(out1)]) == 0
    assert main(["selftest", "--seed", "42", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    data = json.loads(out1.read_text())
    assert data["verdict"] == "pass"


def test_console_script_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "thetacat.cli", "faces", "t[2]"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 3
