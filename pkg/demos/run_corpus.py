"""Run every entry of demos/inputs/manifest.json through the CLI and report exit codes.

    python demos/run_corpus.py
"""

import contextlib
import io
import json
import sys
from pathlib import Path

from sogkit.cli import main

INPUTS = Path(__file__).resolve().parent / "inputs"


def run(entry):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([entry["verb"], *entry["names"], "--in", str(INPUTS / entry["file"])])
    return code, json.loads(buf.getvalue())


def main_corpus():
    manifest = json.loads((INPUTS / "manifest.json").read_text())
    mismatches = 0
    for entry in manifest:
        code, cert = run(entry)
        flag = "ok" if code == entry["exit"] else "MISMATCH"
        mismatches += code != entry["exit"]
        target = " ".join(entry["names"]) or "-"
        print(f"{flag:8} exit={code} {cert['status']:5} {entry['verb']:16} {target:12} {entry['file']}")
    print(f"{len(manifest)} runs, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main_corpus())
