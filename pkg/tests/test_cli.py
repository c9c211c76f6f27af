import json
import subprocess
import sys
from pathlib import Path

import pytest

from hderlab.cli import main

FIXTURES = Path(__file__).parent / "fixtures"

COMMANDS = [
    (["check", "dual_pair.json"], 0),
    (["check", "split_pair.json"], 0),
    (["cohomology", "split_pair.json", "--degree", "2"], 0),
    (["cohomology", "split_pair.json", "--degree", "1", "--coefficients", "trivial"], 0),
    (["cohomology", "nil_central.json", "--degree", "2", "--coefficients", "file"], 0),
    (["classify-central", "nil_central.json"], 0),
    (["extend-abelian", "dual_cocycle.json"], 0),
    (["extend-abelian", "dual_bad_cocycle.json"], 1),
    (["cocycle-from-section", "dual_cocycle.json"], 0),
    (["deform-verify", "dual_deform.json"], 0),
    (["deform-verify", "dual_deform_bad.json"], 1),
    (["deform-obstruct", "dual_deform.json"], 0),
    (["deform-obstruct", "nil_deform_blocked.json"], 1),
    (["deform-extend", "dual_deform.json", "--to", "4"], 0),
    (["deform-extend", "nil_deform_blocked.json"], 1),
    (["deform-trivialize", "dual_deform.json"], 0),
    (["deform-trivialize", "nil_deform_blocked.json", "--to", "1"], 1),
    (["free-tensor", "tensor_line.json"], 0),
    (["free-tensor", "tensor_line.json", "--degree", "3"], 0),
]


def _argv(args):
    return [args[0], str(FIXTURES / args[1]), *args[2:]]


@pytest.mark.parametrize("args,expected", COMMANDS, ids=lambda v: " ".join(v) if isinstance(v, list) else str(v))
def test_exit_codes(args, expected, capsys):
    assert main(_argv(args)) == expected
    capsys.readouterr()


@pytest.mark.parametrize("args,expected", COMMANDS, ids=lambda v: " ".join(v) if isinstance(v, list) else str(v))
def test_json_reports_are_reproducible(args, expected, capsys):
    argv = [*_argv(args), "--json"]
    assert main(argv) == expected
    first = capsys.readouterr().out
    assert main(argv) == expected
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["command"] == args[0]
    assert report["ok"] == (expected == 0)
    assert report["timing_ms"] == 0
    assert set(report) == {"ok", "command", "results", "violations", "timing_ms"}


def test_subprocess_runs_are_byte_identical():
    argv = [sys.executable, "-m", "hderlab.cli", "cohomology",
            str(FIXTURES / "split_pair.json"), "--degree", "2", "--json"]
    first = subprocess.run(argv, capture_output=True, check=True)
    second = subprocess.run(argv, capture_output=True, check=True)
    assert first.stdout == second.stdout


def test_parse_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": {"dim": 1, "table": [[["x"]]]}}')
    assert main(["check", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "algebra.table[0][0][0]" in err


def test_float_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": {"dim": 1, "table": [[[0.5]]]}}')
    assert main(["check", str(bad)]) == 2
    assert "float" in capsys.readouterr().err


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["check", str(bad)]) == 2
    capsys.readouterr()


def test_missing_file_exits_2(capsys):
    assert main(["check", "/nonexistent/file.json"]) == 2
    capsys.readouterr()


def test_missing_section_exits_2(tmp_path, capsys):
    doc = tmp_path / "doc.json"
    doc.write_text('{"algebra": {"dim": 1, "table": [[["0"]]]}}')
    assert main(["deform-verify", str(doc)]) == 2
    capsys.readouterr()


def test_dimension_cap(monkeypatch, capsys):
    monkeypatch.setenv("HDERLAB_MAX_DIM", "1")
    assert main(["check", str(FIXTURES / "dual_pair.json")]) == 2
    assert "HDERLAB_MAX_DIM" in capsys.readouterr().err
    monkeypatch.setenv("HDERLAB_MAX_DIM", "12")
    assert main(["check", str(FIXTURES / "dual_pair.json")]) == 0
    capsys.readouterr()


def test_cap_guards_constructed_tensor_algebra(monkeypatch, tmp_path, capsys):
    doc = tmp_path / "tensor.json"
    doc.write_text(json.dumps({
        "algebra": {"dim": 1, "table": [[["0"]]]},
        "hder": {"rank": 1, "maps": [[["0"]]]},
        "tensor": {"vdim": 2, "degree": 2,
                   "thetas": [[["1", "0"], ["0", "1"]]]},
    }))
    # 1 + 2 + 4 = 7 basis words exceeds the default cap of 6
    assert main(["free-tensor", str(doc)]) == 2
    capsys.readouterr()
    monkeypatch.setenv("HDERLAB_MAX_DIM", "7")
    assert main(["free-tensor", str(doc)]) == 0
    capsys.readouterr()


def test_check_reports_violation_with_exit_1(tmp_path, capsys):
    doc = tmp_path / "doc.json"
    doc.write_text(json.dumps({
        "algebra": {"dim": 2, "unit": 0,
                    "table": [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "0"]]]},
        "hder": {"rank": 1, "maps": [[["1", "0"], ["0", "1"]]]},
    }))
    assert main([*("check", str(doc))]) == 1
    out = capsys.readouterr().out
    assert "violation" in out


def test_human_output_has_summary_lines(capsys):
    assert main(["cohomology", str(FIXTURES / "split_pair.json"), "--degree", "2"]) == 0
    out = capsys.readouterr().out
    assert "command: cohomology" in out
    assert "ok: yes" in out
    assert '"betti": 0' in out


def test_fixture_parse_normalize_roundtrip():
    # parse -> serialize -> parse is a fixed point
    from hderlab.serialize import (
        algebra_to_json, hder_to_json, parse_algebra, parse_hder,
    )
    doc = json.loads((FIXTURES / "dual_pair.json").read_text())
    alg = parse_algebra(doc["algebra"])
    hd = parse_hder(doc["hder"], alg.dim)
    again = parse_algebra(algebra_to_json(alg))
    assert again == alg
    assert parse_hder(hder_to_json(hd), 2) == hd


def test_section_mismatch_exits_1(tmp_path, capsys):
    doc = json.loads((FIXTURES / "dual_cocycle.json").read_text())
    doc["section"] = [["1", "0"], ["0", "1"], ["0", "0"], ["0", "1"]]
    # p o s = id still holds only if the top block is the identity; break it
    doc["section"][0] = ["0", "0"]
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    assert main(["cocycle-from-section", str(path)]) == 1
    capsys.readouterr()


def test_unverified_deformation_exits_1_on_obstruction_commands(capsys):
    for cmd in ("deform-obstruct", "deform-extend", "deform-trivialize"):
        code = main([cmd, str(FIXTURES / "dual_deform_bad.json")])
        assert code == 1, cmd
        out = capsys.readouterr().out
        assert "does not verify" in out
