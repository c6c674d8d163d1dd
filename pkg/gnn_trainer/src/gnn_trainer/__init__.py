"""Trains a multichannel graph-network pivot predictor for the solver.

Reads solved instances (``.bmg``) with their threshold labels
(``.thr``), learns the mapping, and writes raw-weight predictions
(``.piv``) the solver's file predictor consumes.
"""

from .data import (
    AD_FEATURES,
    MAX_NEIGHBORS,
    NEIGHBOR_FEATURES,
    AdSample,
    Instance,
    extract_samples,
    read_instance,
    read_labels,
    write_pivots,
)
from .model import MultichannelLayer, ThresholdNet, multichannel_aggregate
from .predict import predict_thresholds
from .train import TrainConfig, batch_samples, load_checkpoint, save_checkpoint, train
from . import errors

__all__ = [
    "AD_FEATURES",
    "MAX_NEIGHBORS",
    "NEIGHBOR_FEATURES",
    "AdSample",
    "Instance",
    "MultichannelLayer",
    "ThresholdNet",
    "TrainConfig",
    "batch_samples",
    "errors",
    "extract_samples",
    "load_checkpoint",
    "multichannel_aggregate",
    "predict_thresholds",
    "read_instance",
    "read_labels",
    "save_checkpoint",
    "train",
    "write_pivots",
]
