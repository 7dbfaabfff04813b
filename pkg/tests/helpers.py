"""Shared paths and helpers for the test suite."""

import contextlib
import io
import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).parent / "golden"


def run_cli(argv):
    """Run the command-line entry point; returns (status, stdout, stderr)."""
    from clog.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = main([str(a) for a in argv])
    return status, out.getvalue(), err.getvalue()


def check_golden(name, text):
    """Compare ``text`` with tests/golden/<name>; CLOG_UPDATE_GOLDEN=1 rewrites it."""
    path = GOLDEN / name
    if os.environ.get("CLOG_UPDATE_GOLDEN") == "1":
        path.write_text(text, encoding="utf-8")
    if not path.exists():
        pytest.fail(f"missing golden file {path.name}; rerun with CLOG_UPDATE_GOLDEN=1")
    assert text == path.read_text(encoding="utf-8"), f"output differs from golden/{name}"
