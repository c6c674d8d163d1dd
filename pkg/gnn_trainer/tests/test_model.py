import pytest
import torch

from gnn_trainer.model import MultichannelLayer, ThresholdNet, multichannel_aggregate
from gnn_trainer.data import AD_FEATURES, NEIGHBOR_FEATURES


def test_aggregate_identity_assignment_preserves_rows():
    h = torch.randn(4, 5)
    s = torch.eye(4)
    assert torch.equal(multichannel_aggregate(h, s), h)


def test_aggregate_single_channel_sums_columns():
    h = torch.randn(6, 3)
    s = torch.zeros(6, 4)
    s[:, 0] = 1.0
    pooled = multichannel_aggregate(h, s)
    assert torch.allclose(pooled[0], h.sum(dim=0))
    assert torch.equal(pooled[1:], torch.zeros(3, 3))


def test_aggregate_permutation_invariance():
    torch.manual_seed(0)
    h = torch.randn(7, 4, dtype=torch.float64)
    s = torch.rand(7, 3, dtype=torch.float64)
    perm = torch.randperm(7)
    assert torch.allclose(
        multichannel_aggregate(h, s),
        multichannel_aggregate(h[perm], s[perm]),
        atol=1e-6,
    )


def test_aggregate_shape_mismatch_raises():
    with pytest.raises(ValueError):
        multichannel_aggregate(torch.randn(4, 5), torch.randn(3, 2))
    with pytest.raises(ValueError):
        multichannel_aggregate(torch.randn(2, 4, 5), torch.randn(2, 3, 2))


def test_assignment_rows_are_distributions():
    torch.manual_seed(1)
    layer = MultichannelLayer(neighbor_dim=5, ad_dim=5, channels=4, dtype=torch.float32)
    scores = layer.assignment(torch.randn(9, 5))
    assert scores.shape == (9, 4)
    assert (scores >= 0).all()
    assert torch.allclose(scores.sum(dim=-1), torch.ones(9), atol=1e-6)


def test_combine_with_zeroed_final_layer_returns_bias():
    torch.manual_seed(2)
    layer = MultichannelLayer(neighbor_dim=3, ad_dim=4, channels=2, dtype=torch.float32)
    final = layer.combiner[-1]
    with torch.no_grad():
        final.weight.zero_()
        final.bias.copy_(torch.tensor([1.0, -2.0, 3.0, 0.5]))
    out = layer.combine(torch.zeros(4), torch.zeros(2, 3))
    assert torch.equal(out, torch.tensor([1.0, -2.0, 3.0, 0.5]))


@pytest.mark.parametrize("n_neighbors", [1, 3, 17])
def test_layer_output_dimension_independent_of_neighbor_count(n_neighbors):
    torch.manual_seed(3)
    layer = MultichannelLayer(neighbor_dim=6, ad_dim=6, channels=4, dtype=torch.float32)
    out = layer(torch.randn(6), torch.randn(n_neighbors, 6))
    assert out.shape == (6,)


def test_network_permutation_invariance_end_to_end():
    torch.manual_seed(4)
    model = ThresholdNet(AD_FEATURES, NEIGHBOR_FEATURES, embed_dim=12, channels=4)
    ad_x = torch.randn(2, AD_FEATURES)
    neighbor_x = torch.randn(2, 9, NEIGHBOR_FEATURES)
    mask = torch.ones(2, 9)
    baseline = model(ad_x, neighbor_x, mask)
    perm = torch.randperm(9)
    permuted = model(ad_x, neighbor_x[:, perm], mask[:, perm])
    assert torch.allclose(baseline, permuted, atol=1e-6)


def test_padding_mask_ignores_fake_rows():
    torch.manual_seed(5)
    model = ThresholdNet(AD_FEATURES, NEIGHBOR_FEATURES, embed_dim=12, channels=4)
    ad_x = torch.randn(1, AD_FEATURES)
    real = torch.randn(1, 5, NEIGHBOR_FEATURES)
    mask = torch.ones(1, 5)
    padded = torch.cat([real, torch.full((1, 3, NEIGHBOR_FEATURES), 99.0)], dim=1)
    padded_mask = torch.cat([mask, torch.zeros(1, 3)], dim=1)
    assert torch.allclose(
        model(ad_x, real, mask), model(ad_x, padded, padded_mask), atol=1e-6
    )


def test_degree_zero_ad_still_predicts():
    torch.manual_seed(6)
    model = ThresholdNet(AD_FEATURES, NEIGHBOR_FEATURES, embed_dim=12, channels=4)
    ad_x = torch.randn(1, AD_FEATURES)
    neighbor_x = torch.zeros(1, 1, NEIGHBOR_FEATURES)
    mask = torch.zeros(1, 1)
    out = model(ad_x, neighbor_x, mask)
    assert out.shape == (1,)
    assert torch.isfinite(out).all()
