import math

import numpy as np
import pytest

from gnn_trainer.data import (
    AD_FEATURES,
    NEIGHBOR_FEATURES,
    extract_samples,
    read_instance,
    read_labels,
    write_pivots,
)
from gnn_trainer.errors import MalformedFileError


def test_read_instance_explicit_capacities(tiny_instance):
    assert tiny_instance.num_ads == 3
    assert tiny_instance.num_consumers == 4
    assert list(tiny_instance.ad_capacity) == [2, 1, 1]
    assert list(tiny_instance.consumer_capacity) == [1, 1, 1, 2]
    assert tiny_instance.weight_low == 1.0
    assert tiny_instance.weight_high == 9.0


def test_read_instance_default_capacity_rule(tmp_path):
    path = tmp_path / "d.bmg"
    path.write_text(
        "bmg 1\ng 1 3 3\ne 0 0 1.0\ne 0 1 2.0\ne 0 2 3.0\n", encoding="utf-8"
    )
    inst = read_instance(path)
    assert list(inst.ad_capacity) == [2]  # ceil(3/2)
    assert list(inst.consumer_capacity) == [1, 1, 1]


@pytest.mark.parametrize(
    "text",
    [
        "not a header\n",
        "bmg 1\ne 0 0 1.0\n",
        "bmg 1\ng 1 1 2\ne 0 0 1.0\n",
        "bmg 1\ng 1 1 1\nzz\ne 0 0 1.0\n",
    ],
)
def test_read_instance_rejects_malformed(tmp_path, text):
    path = tmp_path / "bad.bmg"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MalformedFileError):
        read_instance(path)


def test_read_labels_with_sentinel(tmp_path):
    path = tmp_path / "l.thr"
    path.write_text("0 4.0 0 2\n1 -inf -1 -1\n2 1.0 2 3\n", encoding="utf-8")
    assert read_labels(path, 3) == [4.0, None, 1.0]


@pytest.mark.parametrize(
    "text,ads",
    [
        ("0 4.0 0 2\n", 2),           # missing ad 1
        ("0 4.0 0 2\n0 3.0 0 1\n", 1),  # duplicate
        ("0 x 0 2\n", 1),
        ("0 4.0 0\n", 1),
    ],
)
def test_read_labels_rejects_malformed(tmp_path, text, ads):
    path = tmp_path / "l.thr"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MalformedFileError):
        read_labels(path, ads)


def test_extract_samples_shapes_and_finiteness(tiny_instance):
    samples = extract_samples(tiny_instance)
    assert len(samples) == tiny_instance.num_ads
    for ad, sample in enumerate(samples):
        assert sample.features.shape == (AD_FEATURES,)
        degree = len(tiny_instance.ad_weights[ad])
        assert sample.neighbor_features.shape == (degree, NEIGHBOR_FEATURES)
        assert np.isfinite(sample.features).all()
        assert np.isfinite(sample.neighbor_features).all()
        assert sample.label is None


def test_labels_normalized_by_weight_scale(tiny_instance):
    samples = extract_samples(tiny_instance, labels=[5.0, 9.0, 1.0])
    # scale maps 1..9 onto 0..1
    assert samples[0].label == pytest.approx(0.5)
    assert samples[1].label == pytest.approx(1.0)
    assert samples[2].label == pytest.approx(0.0)


def test_exhausted_ad_label_falls_below_min_weight(tiny_instance):
    samples = extract_samples(tiny_instance, labels=[5.0, None, 1.0])
    low, span = tiny_instance.weight_scale()
    min_incident = tiny_instance.ad_weights[1].min()
    assert samples[1].label == pytest.approx((min_incident - 0.02 * span - low) / span)
    assert samples[1].label < (min_incident - low) / span


def test_neighbor_competition_feature(tiny_instance):
    # Consumer 1 has incident weights {6, 7}; ad 0's 6.0 has one heavier rival.
    samples = extract_samples(tiny_instance)
    row = samples[0].neighbor_features[1]  # ad 0's neighbors sorted by id: 0,1,2
    assert row[5] == pytest.approx(1 / 2)


def test_subsampling_keeps_heaviest(tmp_path):
    lines = ["bmg 1", "g 1 10 10", "ba 0 2"]
    lines += [f"bc {c} 1" for c in range(10)]
    lines += [f"e 0 {c} {float(c + 1)!r}" for c in range(10)]
    path = tmp_path / "s.bmg"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    inst = read_instance(path)
    samples = extract_samples(inst, max_neighbors=4)
    assert samples[0].neighbor_features.shape[0] == 4
    # heaviest four weights are 7..10 -> normalized >= (7-1)/9
    assert samples[0].neighbor_features[:, 0].min() >= (7.0 - 1.0) / 9.0 - 1e-12


def test_write_pivots_clamps_negative(tmp_path):
    path = tmp_path / "p.piv"
    write_pivots(path, {1: -0.5, 0: 2.0})
    assert path.read_text(encoding="utf-8") == "0 2.0\n1 0.0\n"


def test_degenerate_uniform_weight_scale(tmp_path):
    path = tmp_path / "u.bmg"
    path.write_text("bmg 1\ng 1 2 2\ne 0 0 3.0\ne 0 1 3.0\n", encoding="utf-8")
    inst = read_instance(path)
    low, span = inst.weight_scale()
    assert span == 1.0  # guarded against zero division
    samples = extract_samples(inst, labels=[3.0])
    assert math.isfinite(samples[0].label)
