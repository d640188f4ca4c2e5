import json
import subprocess
import sys

import pytest

from aglab.cli import bundled_chains_text, main
from aglab.harness import example_fixture
from aglab.magma import serialize_magma
from conftest import golden_keys


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def example_file(tmp_path):
    p = tmp_path / "example.txt"
    p.write_text(serialize_magma(example_fixture()))
    return str(p)


def test_check_text(capsys, example_file):
    code, out, _ = run(capsys, "check", example_file)
    assert code == 0
    assert "is_left_invertive" in out and "left identities" in out


def test_check_json(capsys, example_file):
    code, out, _ = run(capsys, "check", example_file, "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["is_left_invertive"] and not d["is_ag_star"]
    assert d["left_identities"] == ["e"]


def test_global_flags_before_subcommand(capsys, example_file):
    a = run(capsys, "--format", "json", "check", example_file)
    b = run(capsys, "check", example_file, "--format", "json")
    assert a == b


def test_json_output_is_byte_identical(capsys, example_file):
    first = run(capsys, "classify", example_file, "--format", "json")[1]
    second = run(capsys, "classify", example_file, "--format", "json")[1]
    assert first == second


def test_classify_json(capsys, example_file):
    code, out, _ = run(capsys, "classify", example_file, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["is_ag"]
    assert d["classes"]["regular"]["witnesses"]["d"] is None
    assert d["classes"]["regular"]["first_failing"] == "c"


def test_classify_non_ag_banner(capsys, tmp_path):
    p = tmp_path / "lz.txt"
    p.write_text("2\n0 0\n1 0\n")
    code, out, _ = run(capsys, "classify", str(p))
    assert code == 0
    assert "is_ag=false" in out


@pytest.mark.parametrize("content", ["", "2\n0 0\n", "3\n0 1 2\n0 1 2\n0 1 9\n", '{"order": 2}'])
def test_malformed_input_exit_2(capsys, tmp_path, content):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    code, _, err = run(capsys, "check", str(p))
    assert code == 2
    assert err.startswith("error:")


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "classify", str(tmp_path / "nope.txt"))
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["enum"],
    ["enum", "--order", "0"],
    ["enum", "--order", "3", "--class", "semisimple"],
    ["enum", "--order", "4", "--naive"],
    ["--workers", "0", "enum", "--order", "2"],
    ["verify-theorems", "--max-order", "0"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_enum_count(capsys, golden_counts):
    for n in (1, 2, 3):
        code, out, _ = run(capsys, "enum", "--order", str(n), "--ag", "--count-only")
        assert code == 0 and int(out) == golden_counts["ag"][str(n)][0]
    code, out, _ = run(capsys, "enum", "--order", "3", "--ag-star", "--up-to-iso", "--count-only", "--format", "json")
    assert json.loads(out)["count"] == 12


def test_enum_canonical_keys(capsys):
    code, out, _ = run(capsys, "enum", "--order", "3", "--ag", "--left-identity", "--canonical-keys")
    assert out.split() == golden_keys("ag_li_order3_iso.txt")
    code, naive, _ = run(capsys, "enum", "--order", "3", "--ag", "--left-identity", "--canonical-keys", "--naive")
    assert naive == out


def test_enum_workers_match_single(capsys):
    single = run(capsys, "enum", "--order", "3", "--ag")[1]
    multi = run(capsys, "enum", "--order", "3", "--ag", "--workers", "4")[1]
    assert single == multi
    assert single.count("\n\n") == 105


def test_enum_json_lines(capsys):
    code, out, _ = run(capsys, "enum", "--order", "2", "--ag", "--up-to-iso", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 3 and all(r["order"] == 2 for r in rows)


def test_enum_class_filter(capsys):
    code, out, _ = run(capsys, "enum", "--order", "3", "--ag", "--class", "regular", "--count-only")
    assert int(out) == 30


def test_verify_theorems(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--max-order", "3", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert d["properties"]["example_fixture"]["passed"]


def test_verify_theorems_exploratory_text(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--max-order", "3", "--exploratory")
    assert code == 0
    assert "[explore]" in out and "least witness" in out


def test_verify_theorems_mutated_fixture(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--max-order", "2", "--mutate-fixture", "--format", "json")
    d = json.loads(out)
    assert code == 1 and not d["passed"]
    assert not d["properties"]["example_fixture"]["passed"]


def test_replay_bundled(capsys):
    code, out, _ = run(capsys, "replay")
    assert code == 0
    assert out.count("PASS") == 8


def test_replay_soundness_json(capsys):
    code, out, _ = run(capsys, "replay", "--soundness-order", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert len(d["soundness"]) == 8


def test_replay_corrupted_step(capsys, tmp_path):
    text = bundled_chains_text().replace("step (aa)(xy)          by L2 at ε fwd\nstep (aa)t",
                                         "step (aa)(yx)          by L2 at ε fwd\nstep (aa)t", 1)
    assert text != bundled_chains_text()
    p = tmp_path / "bad.chains"
    p.write_text(text)
    code, out, err = run(capsys, "replay", str(p))
    assert code == 1
    assert "error: chain weak-to-right, step 2:" in err


def test_replay_empty_file(capsys, tmp_path):
    p = tmp_path / "empty.chains"
    p.write_text("# nothing here\n")
    code, _, err = run(capsys, "replay", str(p))
    assert code == 0 and "warning" in err


def test_replay_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.chains"
    p.write_text("chain c\nlaws L1\nstep (ab\nstep b\n")
    assert run(capsys, "replay", str(p))[0] == 2


def test_module_entry_point(example_file):
    proc = subprocess.run([sys.executable, "-m", "aglab", "check", example_file, "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["is_medial"]
