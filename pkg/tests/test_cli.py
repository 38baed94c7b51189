import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from sogkit import ParseError, WorkspaceReferenceError, parse_input, run_command
from sogkit.cli import VERBS, main

INPUTS = Path(__file__).resolve().parents[1] / "demos" / "inputs"
MANIFEST = json.loads((INPUTS / "manifest.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_entry(capsys, entry):
    return run(capsys, entry["verb"], *entry["names"], "--in", str(INPUTS / entry["file"]))


def test_manifest_covers_every_verb():
    assert set(VERBS) <= {e["verb"] for e in MANIFEST}
    assert {e["exit"] for e in MANIFEST} == {0, 1, 2}


@pytest.mark.parametrize("entry", MANIFEST,
                         ids=lambda e: f"{e['file']}:{e['verb']}:{'-'.join(e['names'])}")
def test_manifest_exit_codes_and_determinism(capsys, entry):
    code, out = run_entry(capsys, entry)
    assert code == entry["exit"], out
    cert = json.loads(out)
    assert cert["schema"] == "sogkit/1"
    assert cert["status"] == {0: "pass", 1: "fail", 2: "error"}[code]
    code2, out2 = run_entry(capsys, entry)
    assert (code2, out2) == (code, out)


def test_check_purity_reports_pair(capsys):
    code, out = run(capsys, "check-purity", "phi", "--in", str(INPUTS / "chain_2z_in_z.json"))
    assert code == 1
    assert json.loads(out)["result"]["violations"] == [[0, 1]]


def test_monoid_check_all_flags(capsys):
    code, out = run(capsys, "monoid-check", "--in", str(INPUTS / "z2_block_table.json"))
    assert code == 0
    assert all(json.loads(out)["result"]["flags"].values())


def test_blueprint_o3(capsys):
    code, out = run(capsys, "blueprint", "--in", str(INPUTS / "o3_blueprint.json"))
    assert code == 0
    assert json.loads(out)["result"]["certificate"]["stages"] == ["O_3"]


def test_unknown_verb(capsys):
    code, out = run(capsys, "frobnicate", "--in", str(INPUTS / "empty.json"))
    assert code == 2
    assert json.loads(out)["errors"][0]["kind"] == "UnknownVerb"


def test_out_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "cert.json"
    code, out = run(capsys, "monoid-check", "--in", str(INPUTS / "z2_block_table.json"),
                    "--out", str(target))
    assert code == 0
    assert target.read_text() == out


def test_oracle_flag_adds_comparison(capsys):
    code, plain = run(capsys, "check-purity", "--in", str(INPUTS / "chain_pure.json"))
    code2, with_oracle = run(capsys, "check-purity", "--in", str(INPUTS / "chain_pure.json"),
                             "--oracle")
    assert code == code2 == 0
    assert plain != with_oracle


def test_parse_input_examples():
    ws = parse_input([INPUTS / "empty.json"])
    assert ws.names() == []
    with pytest.raises(ParseError):
        parse_input([INPUTS / "bad_rectangular.json"])
    with pytest.raises(WorkspaceReferenceError):
        parse_input([INPUTS / "bad_reference.json"])


def test_parse_input_rejects_malformed_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        parse_input([p])


def test_run_command_in_process():
    ws = parse_input([INPUTS / "z2_block_table.json"])
    code, cert = run_command(ws, "monoid-decompose")
    assert code == 0 and cert["status"] == "pass"


@pytest.mark.skipif(shutil.which("sogkit") is None, reason="console script not installed")
def test_console_script_is_byte_deterministic():
    args = ["sogkit", "cover", "--in", str(INPUTS / "chain_presentation.json")]
    a = subprocess.run(args, capture_output=True)
    b = subprocess.run(args, capture_output=True)
    assert a.returncode == b.returncode
    assert a.stdout == b.stdout and a.stdout


def test_module_entry_point():
    args = [sys.executable, "-m", "sogkit.cli", "monoid-check", "--in",
            str(INPUTS / "m3_semilattice.json")]
    res = subprocess.run(args, capture_output=True)
    assert res.returncode == 1
    assert json.loads(res.stdout)["result"]["flags"]["refinement"] is False
