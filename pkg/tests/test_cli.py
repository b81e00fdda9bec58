import json
import subprocess
import sys

import pytest

from tnncells.cli import main, parse_index_list, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_matrix(tmp_path, rows, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(rows))
    return str(path)


def test_parse_index_list():
    assert parse_index_list("1,2") == (1, 2)
    assert parse_index_list(" 2 1 ") == (1, 2)
    assert parse_index_list("") == ()
    with pytest.raises(UsageError):
        parse_index_list("1,a")


def test_poset_dot(tmp_path, capsys):
    out = tmp_path / "p.dot"
    code, stdout, _ = run(capsys, "poset", "--type", "A2", "--j", "1", "--format", "dot", "--out", str(out))
    assert code == 0
    assert "7 nodes" in stdout and "(3, 3, 1)" in stdout
    assert out.read_text().count("[label=") == 7


def test_poset_json_to_stdout(capsys):
    code, stdout, err = run(capsys, "poset", "--type", "A2", "--j", "")
    assert code == 0
    doc = json.loads(stdout)
    assert len(doc["nodes"]) == 19 and doc["J"] == []
    assert "f-vector (6, 8, 4, 1)" in err


def test_poset_output_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "poset", "--type", "B2", "--j", "2", "--out", str(a))
    run(capsys, "poset", "--type", "B2", "--j", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv, code", [
    (["poset", "--type", "Z9"], 2),
    (["poset", "--type", "A2", "--j", "3"], 2),
    (["poset", "--type", "A2", "--j", "x"], 2),
    (["poset"], 2),
    (["frobnicate"], 2),
    (["poset", "--type", "E8"], 3),
    (["poset", "--type", "A3", "--cap", "10"], 3),
    (["poset", "--type", "D5"], 3),
    (["verify", "--trials", "0"], 2),
    (["verify", "--type", "B2", "--trials", "1"], 2),
    (["verify", "--type", "A6", "--trials", "1"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert run(capsys, *argv)[0] == code


def test_cap_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("TNNCELLS_CAP", "5")
    assert run(capsys, "poset", "--type", "A2")[0] == 3
    assert run(capsys, "poset", "--type", "A2", "--cap", "100")[0] == 0


def test_check_a2(capsys):
    code, stdout, _ = run(capsys, "check", "--type", "A2")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert len(lines) == 4 and all(line.startswith("ok") for line in lines)
    assert "J={1,2}: 1 nodes" in lines[-1]


def test_check_a3(capsys, tmp_path):
    out = tmp_path / "check.json"
    code, stdout, _ = run(capsys, "check", "--type", "A3", "--out", str(out))
    assert code == 0 and len(stdout.strip().splitlines()) == 8
    assert all(entry["ok"] for entry in json.loads(out.read_text()))


def test_classify(tmp_path, capsys):
    ident = write_matrix(tmp_path, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "id.json")
    assert run(capsys, "classify", ident)[1].strip() == "(e, e)"
    y1 = write_matrix(tmp_path, [["1", "0", "0"], ["1/1", "1", "0"], ["0", "0", "1"]], "y1.json")
    assert run(capsys, "classify", y1, "--type", "A2")[1].strip() == "(e, s1)"
    s1 = write_matrix(tmp_path, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], "s1.json")
    code, stdout, _ = run(capsys, "classify", s1, "--j", "1")
    assert code == 0 and stdout.strip() == "(s1, s1, e)"
    assert run(capsys, "classify", ident, "--j", "")[1].strip() == "(e, e)"


@pytest.mark.parametrize("rows", [
    [[2, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[1, 1], [1, 1]],
    [[1, 0], [0]],
    "not a matrix",
])
def test_classify_rejects_bad_input(tmp_path, capsys, rows):
    assert run(capsys, "classify", write_matrix(tmp_path, rows))[0] == 2


def test_classify_rejects_type_mismatch(tmp_path, capsys):
    ident = write_matrix(tmp_path, [[1, 0], [0, 1]])
    assert run(capsys, "classify", ident, "--type", "A2")[0] == 2
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2


def test_verify_a2_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, stdout, _ = run(capsys, "verify", "--type", "A2", "--trials", "20", "--seed", "0", "--out", str(a))
    assert code == 0
    assert "full coverage on 19/19 cells" in stdout
    run(capsys, "verify", "--type", "A2", "--trials", "20", "--seed", "0", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["ok"] and {s["name"] for s in doc["suites"]} >= {
        "round_trip", "tilde_symmetry", "phi_translation", "reduction", "degenerations_full_flag"}


def test_verify_a3_single_j(capsys):
    code, stdout, _ = run(capsys, "verify", "--type", "A3", "--j", "2", "--trials", "5")
    assert code == 0
    assert "parabolic_J=[2]" in stdout and "FAIL" not in stdout


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tnncells.cli", "poset", "--type", "Z9"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
