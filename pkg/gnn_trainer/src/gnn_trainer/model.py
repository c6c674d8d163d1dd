"""Multichannel graph network for per-ad threshold regression.

A plain sum or mean over a huge, skewed neighborhood crushes most of its
information.  Instead, every layer learns a soft assignment of each
neighbor to a small number of channels (a softmax row per neighbor),
sum-pools within channels, and concatenates across channels, so similar
neighbors share a slot and dissimilar ones keep separate ones.  The ad
embedding is then updated from itself plus the flattened channel
summary, and after the final layer a small head regresses one value:
the normalized weight threshold for that ad.

Neighbor encodings stay fixed across layers; only the ad embedding
evolves.  Assignment networks are shared across ads but separate per
layer.
"""

from __future__ import annotations

import torch
from torch import Tensor, nn


def multichannel_aggregate(neighbor_embeddings: Tensor, assignment: Tensor) -> Tensor:
    """Pool neighbor embeddings into channels: ``assignment^T @ embeddings``.

    Accepts ``(n, d)`` with ``(n, c)``, or batched ``(A, n, d)`` with
    ``(A, n, c)``; returns ``(c, d)`` or ``(A, c, d)``.  Permuting the
    neighbor rows of both inputs together leaves the result unchanged.
    """
    if neighbor_embeddings.dim() == 2:
        if assignment.shape[0] != neighbor_embeddings.shape[0]:
            raise ValueError(
                f"assignment rows {assignment.shape[0]} != neighbors "
                f"{neighbor_embeddings.shape[0]}"
            )
        return assignment.transpose(0, 1) @ neighbor_embeddings
    if assignment.shape[:2] != neighbor_embeddings.shape[:2]:
        raise ValueError("batched shapes disagree")
    return assignment.transpose(1, 2) @ neighbor_embeddings


def _mlp(sizes: list[int], dtype) -> nn.Sequential:
    layers: list[nn.Module] = []
    for i in range(len(sizes) - 1):
        layers.append(nn.Linear(sizes[i], sizes[i + 1], dtype=dtype))
        if i < len(sizes) - 2:
            layers.append(nn.ReLU())
    return nn.Sequential(*layers)


class MultichannelLayer(nn.Module):
    """One aggregate-and-combine step."""

    def __init__(self, neighbor_dim: int, ad_dim: int, channels: int, dtype):
        super().__init__()
        self.channels = channels
        self.assign = _mlp([neighbor_dim, 2 * channels, channels], dtype)
        self.combiner = _mlp([ad_dim + channels * neighbor_dim, 2 * ad_dim, ad_dim], dtype)

    def assignment(self, neighbor_embeddings: Tensor, mask: Tensor | None = None) -> Tensor:
        """Soft channel assignment; each (real) row sums to one."""
        scores = torch.softmax(self.assign(neighbor_embeddings), dim=-1)
        if mask is not None:
            scores = scores * mask.unsqueeze(-1)
        return scores

    def combine(self, ad_embedding: Tensor, pooled: Tensor) -> Tensor:
        """Update the ad embedding from the flattened channel summary."""
        flat = pooled.reshape(*pooled.shape[:-2], -1)
        return self.combiner(torch.cat([ad_embedding, flat], dim=-1))

    def forward(
        self, ad_embedding: Tensor, neighbor_embeddings: Tensor, mask: Tensor | None = None
    ) -> Tensor:
        scores = self.assignment(neighbor_embeddings, mask)
        pooled = multichannel_aggregate(neighbor_embeddings, scores)
        return self.combine(ad_embedding, pooled)


class ThresholdNet(nn.Module):
    """Feature encoders, K multichannel layers, and a scalar head.

    `forward` is batched over the ads of one instance: ad features
    ``(A, ad_features)``, padded neighbor features ``(A, n_max,
    neighbor_features)``, and a 0/1 mask ``(A, n_max)`` marking real
    rows.  Output is ``(A,)`` of normalized threshold predictions.
    """

    def __init__(
        self,
        ad_features: int,
        neighbor_features: int,
        embed_dim: int = 32,
        channels: int = 16,
        num_layers: int = 2,
        dtype=torch.float32,
    ):
        super().__init__()
        self.ad_encoder = _mlp([ad_features, embed_dim, embed_dim], dtype)
        self.neighbor_encoder = _mlp([neighbor_features, embed_dim, embed_dim], dtype)
        self.layers = nn.ModuleList(
            MultichannelLayer(embed_dim, embed_dim, channels, dtype)
            for _ in range(num_layers)
        )
        self.head = _mlp([embed_dim, embed_dim, 1], dtype)

    def forward(self, ad_x: Tensor, neighbor_x: Tensor, mask: Tensor) -> Tensor:
        h = self.ad_encoder(ad_x)
        encoded = self.neighbor_encoder(neighbor_x) * mask.unsqueeze(-1)
        for layer in self.layers:
            h = layer(h, encoded, mask)
        return self.head(h).squeeze(-1)
