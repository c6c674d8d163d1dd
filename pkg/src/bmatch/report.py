"""Machine-readable run reports (one JSON object per solver run)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class RunReport:
    """What a single solve did: identity, result, and phase timings.

    `iterations` counts pour rounds for the round-based solver and
    fine-tune rounds for the pivot solver; serial greedy reports 0.
    Timings are wall-clock seconds and informational only.
    """

    instance_digest: str
    solver: str
    predictor: str | None
    matching_value: float
    iterations: int
    timings: dict[str, float] = field(default_factory=dict)
    worker_count: int = 1
    seed: int | None = None

    def to_json(self) -> str:
        payload = {
            "instance": self.instance_digest,
            "solver": self.solver,
            "predictor": self.predictor,
            "matching_value": self.matching_value,
            "iterations": self.iterations,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
            "workers": self.worker_count,
            "seed": self.seed,
        }
        return json.dumps(payload, sort_keys=True)


def append_report(path, report: RunReport) -> None:
    """Append one report line to a JSONL file."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
