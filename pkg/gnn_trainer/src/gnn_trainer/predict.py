"""Apply a trained model to an instance and emit ``.piv`` predictions.

Run as a module::

    python -m gnn_trainer.predict --checkpoint model.pt -i instance.bmg -o out.piv
"""

from __future__ import annotations

import argparse
import logging

import torch

from .data import Instance, extract_samples, read_instance, write_pivots
from .model import ThresholdNet
from .train import batch_samples, load_checkpoint

logger = logging.getLogger(__name__)


def predict_thresholds(
    model: ThresholdNet, instance: Instance, max_neighbors: int = 1024
) -> dict[int, float]:
    """One raw-weight pivot per ad, denormalized to the instance's scale.

    Ads whose features cannot be computed are omitted; the solver
    defaults missing entries to 0, which is always safe.
    """
    low, span = instance.weight_scale()
    out: dict[int, float] = {}
    try:
        samples = extract_samples(instance, None, max_neighbors)
    except Exception:
        logger.exception("feature extraction failed for the whole instance")
        return out
    if not samples:
        return out
    ad_x, neighbor_x, mask, _ = batch_samples(samples)
    with torch.no_grad():
        preds = model(ad_x, neighbor_x, mask)
    for sample, pred in zip(samples, preds.tolist()):
        out[sample.ad_id] = low + span * float(pred)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="predict pivots for an instance")
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("-i", "--input", required=True, help="instance (.bmg)")
    parser.add_argument("-o", "--output", required=True, help="predictions (.piv)")
    args = parser.parse_args(argv)

    model, max_neighbors = load_checkpoint(args.checkpoint)
    instance = read_instance(args.input)
    pivots = predict_thresholds(model, instance, max_neighbors)
    write_pivots(args.output, pivots)
    print(f"wrote {len(pivots)} predictions to {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
