#!/usr/bin/env python3
"""The whole command-line workflow in one temp directory.

Generates an instance, perturbs it, solves it three ways, dumps and
reuses thresholds, verifies the matching file, and runs the comparison
table that fails loudly if any two solvers ever disagree.
"""

import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args: str) -> str:
    cmd = [sys.executable, "-m", "bmatch.cli", *args]
    print(f"$ bmatch {' '.join(args)}")
    out = subprocess.run(cmd, check=True, capture_output=True, text=True).stdout
    print(out)
    return out


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    base, noisy = d / "base.bmg", d / "noisy.bmg"
    thr, match = d / "base.thr", d / "noisy.match"

    run("gen", "--ads", "25", "--consumers", "80", "--degree", "uniform:3:10",
        "--weights", "uniform:1:6", "--seed", "7", "-o", str(base))
    run("perturb", "-i", str(base), "--sigma-sq", "0.1", "--seed", "1", "-o", str(noisy))
    run("solve", "--algo", "bsuitor", "-i", str(base), "--dump-thresholds", str(thr))
    run("solve", "--algo", "pivot", "--predictor", "warmstart", "--warm", str(thr),
        "-i", str(noisy), "-o", str(match), "--report", str(d / "runs.jsonl"))
    run("verify", "-i", str(noisy), "-m", str(match))
    run("compare", "-i", str(noisy), "--algos",
        "greedy,bsuitor,pivot:quantile,pivot:warmstart", "--warm", str(thr))

    print("report lines written:")
    print((d / "runs.jsonl").read_text())
