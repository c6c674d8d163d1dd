"""Shared helpers: a tiny hand-written instance and a solver-CLI shim."""

import subprocess
import sys

import pytest

from gnn_trainer.data import Instance, read_instance

TINY_BMG = (
    "bmg 1\n"
    "g 3 4 7\n"
    "ba 0 2\nba 1 1\nba 2 1\n"
    "bc 0 1\nbc 1 1\nbc 2 1\nbc 3 2\n"
    "e 0 0 8.0\ne 0 1 6.0\ne 0 2 4.0\n"
    "e 1 1 7.0\ne 1 3 9.0\n"
    "e 2 0 3.0\ne 2 3 1.0\n"
)


@pytest.fixture
def tiny_instance(tmp_path) -> Instance:
    path = tmp_path / "tiny.bmg"
    path.write_text(TINY_BMG, encoding="utf-8")
    return read_instance(path)


def run_solver_cli(*args: str) -> str:
    """Invoke the solver package's CLI; the only coupling point."""
    result = subprocess.run(
        [sys.executable, "-m", "bmatch.cli", *args],
        check=True,
        capture_output=True,
        text=True,
    )
    return result.stdout
