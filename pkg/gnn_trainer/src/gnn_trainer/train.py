"""Supervised training of the threshold predictor.

Labels come from ``.thr`` dumps of already-solved instances; the loss is
mean squared error on per-instance normalized thresholds.  Config is a
single YAML file; see `TrainConfig` for the keys.

Run as a module::

    python -m gnn_trainer.train --config train.yaml
"""

from __future__ import annotations

import argparse
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import yaml

from .data import (
    AD_FEATURES,
    MAX_NEIGHBORS,
    NEIGHBOR_FEATURES,
    AdSample,
    extract_samples,
    read_instance,
    read_labels,
)
from .errors import EmptyTrainingSetError, MalformedFileError
from .model import ThresholdNet


@dataclass
class TrainConfig:
    instances: list[str]
    labels: list[str]
    val_instances: list[str] = field(default_factory=list)
    val_labels: list[str] = field(default_factory=list)
    checkpoint: str = "model.pt"
    loss_curve: str = ""
    epochs: int = 300
    learning_rate: float = 3e-3
    embed_dim: int = 32
    channels: int = 16
    num_layers: int = 2
    max_neighbors: int = MAX_NEIGHBORS
    seed: int = 0

    @classmethod
    def from_yaml(cls, path) -> "TrainConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise MalformedFileError(f"{path}: unknown config keys {sorted(unknown)}")
        return cls(**raw)


def batch_samples(
    samples: list[AdSample], dtype=torch.float32
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pad one instance's samples into (ad_x, neighbor_x, mask, labels)."""
    n_max = max((s.neighbor_features.shape[0] for s in samples), default=0)
    n_max = max(n_max, 1)
    ad_x = torch.tensor(np.stack([s.features for s in samples]), dtype=dtype)
    neighbor_x = torch.zeros(len(samples), n_max, NEIGHBOR_FEATURES, dtype=dtype)
    mask = torch.zeros(len(samples), n_max, dtype=dtype)
    for i, s in enumerate(samples):
        n = s.neighbor_features.shape[0]
        if n:
            neighbor_x[i, :n] = torch.tensor(s.neighbor_features, dtype=dtype)
            mask[i, :n] = 1.0
    labels = torch.tensor(
        [s.label if s.label is not None else 0.0 for s in samples], dtype=dtype
    )
    return ad_x, neighbor_x, mask, labels


def _load_batches(instance_paths, label_paths, max_neighbors, dtype):
    if len(instance_paths) != len(label_paths):
        raise MalformedFileError("instances and labels lists differ in length")
    batches = []
    for inst_path, label_path in zip(instance_paths, label_paths):
        instance = read_instance(inst_path)
        labels = read_labels(label_path, instance.num_ads)
        samples = extract_samples(instance, labels, max_neighbors)
        if samples:
            batches.append(batch_samples(samples, dtype))
    return batches


def _epoch_loss(model, batches) -> float:
    losses = []
    with torch.no_grad():
        for ad_x, neighbor_x, mask, labels in batches:
            pred = model(ad_x, neighbor_x, mask)
            losses.append(torch.mean((pred - labels) ** 2).item())
    return float(np.mean(losses))


def train(config: TrainConfig) -> tuple[ThresholdNet, list[dict]]:
    """Train to convergence; returns the best-validation model and history.

    History has one entry per epoch: ``{"epoch", "train_mse", "val_mse"}``
    (``val_mse`` is the training loss when no validation set is given).
    Epoch 0 records the untrained model's loss.
    """
    if not config.instances:
        raise EmptyTrainingSetError("no training instances configured")
    torch.manual_seed(config.seed)
    random.seed(config.seed)

    train_batches = _load_batches(
        config.instances, config.labels, config.max_neighbors, torch.float32
    )
    if not train_batches:
        raise EmptyTrainingSetError("training instances contain no ads")
    val_batches = (
        _load_batches(config.val_instances, config.val_labels, config.max_neighbors, torch.float32)
        if config.val_instances
        else train_batches
    )

    model = ThresholdNet(
        AD_FEATURES,
        NEIGHBOR_FEATURES,
        embed_dim=config.embed_dim,
        channels=config.channels,
        num_layers=config.num_layers,
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    history = [
        {"epoch": 0, "train_mse": _epoch_loss(model, train_batches),
         "val_mse": _epoch_loss(model, val_batches)}
    ]
    best_val = history[0]["val_mse"]
    best_state = {k: v.clone() for k, v in model.state_dict().items()}

    order = list(range(len(train_batches)))
    for epoch in range(1, config.epochs + 1):
        model.train()
        random.shuffle(order)
        for i in order:
            ad_x, neighbor_x, mask, labels = train_batches[i]
            optimizer.zero_grad()
            pred = model(ad_x, neighbor_x, mask)
            loss = torch.mean((pred - labels) ** 2)
            loss.backward()
            optimizer.step()
        model.eval()
        entry = {
            "epoch": epoch,
            "train_mse": _epoch_loss(model, train_batches),
            "val_mse": _epoch_loss(model, val_batches),
        }
        history.append(entry)
        if entry["val_mse"] < best_val:
            best_val = entry["val_mse"]
            best_state = {k: v.clone() for k, v in model.state_dict().items()}

    model.load_state_dict(best_state)
    model.eval()
    return model, history


def save_checkpoint(path, model: ThresholdNet, config: TrainConfig) -> None:
    torch.save(
        {
            "state_dict": model.state_dict(),
            "embed_dim": config.embed_dim,
            "channels": config.channels,
            "num_layers": config.num_layers,
            "max_neighbors": config.max_neighbors,
        },
        path,
    )


def load_checkpoint(path) -> tuple[ThresholdNet, int]:
    payload = torch.load(path, weights_only=True)
    model = ThresholdNet(
        AD_FEATURES,
        NEIGHBOR_FEATURES,
        embed_dim=payload["embed_dim"],
        channels=payload["channels"],
        num_layers=payload["num_layers"],
    )
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload["max_neighbors"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="train the threshold predictor")
    parser.add_argument("--config", required=True, help="YAML config file")
    args = parser.parse_args(argv)

    config = TrainConfig.from_yaml(args.config)
    model, history = train(config)
    save_checkpoint(config.checkpoint, model, config)
    if config.loss_curve:
        Path(config.loss_curve).write_text(
            json.dumps(history, indent=2) + "\n", encoding="utf-8"
        )
    last = history[-1]
    best = min(h["val_mse"] for h in history)
    print(
        f"trained {last['epoch']} epochs: train_mse={last['train_mse']:.6f} "
        f"best val_mse={best:.6f} -> {config.checkpoint}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
