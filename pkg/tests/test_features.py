import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from ldgp import (
    FeatureConfig,
    GrayImage,
    extract_dataset_features,
    extract_feature,
    partition_regions,
    quantize_code,
    save_features,
    synth_dataset,
)

from conftest import random_image


class TestQuantize:
    @pytest.mark.parametrize(
        "code, code_bits, bins, expected",
        [
            (63, 6, 8, 7),
            (48, 6, 8, 6),
            (8, 6, 8, 1),
            (0, 6, 8, 0),
            (255, 8, 8, 7),
            (255, 8, 256, 255),
            (5, 6, 64, 5),
        ],
    )
    def test_examples(self, code, code_bits, bins, expected):
        assert quantize_code(code, code_bits, bins) == expected

    @given(st.integers(0, 63), st.sampled_from([2, 4, 8, 16, 32, 64]))
    def test_matches_arithmetic_oracle(self, code, bins):
        assert quantize_code(code, 6, bins) == oracles.quantize(code, 6, bins)

    def test_monotone_and_surjective(self):
        vals = [quantize_code(c, 6, 8) for c in range(64)]
        assert vals == sorted(vals)
        assert set(vals) == set(range(8))

    def test_bins_validation(self):
        with pytest.raises(ValueError):
            quantize_code(0, 6, 3)
        with pytest.raises(ValueError):
            quantize_code(0, 6, 128)
        with pytest.raises(ValueError):
            quantize_code(0, 6, 0)

    def test_array_input(self):
        codes = np.array([[0, 8], [48, 63]], dtype=np.uint8)
        out = quantize_code(codes, 6, 8)
        assert out.tolist() == [[0, 1], [6, 7]]


class TestPartition:
    def test_even_grid(self):
        regions = partition_regions(8, 8, 4, 4)
        assert len(regions) == 16
        assert all(
            r.row_stop - r.row_start == 2 and r.col_stop - r.col_start == 2 for r in regions
        )

    def test_uneven_grid_floor_edges(self):
        regions = partition_regions(10, 10, 4, 4)
        row_edges = sorted({r.row_start for r in regions} | {r.row_stop for r in regions})
        assert row_edges == [0, 2, 5, 7, 10]
        heights = [regions[i * 4].row_stop - regions[i * 4].row_start for i in range(4)]
        assert heights == [2, 3, 2, 3]

    def test_single_region(self):
        regions = partition_regions(5, 5, 1, 1)
        assert len(regions) == 1
        r = regions[0]
        assert (r.row_start, r.col_start, r.row_stop, r.col_stop) == (0, 0, 5, 5)

    def test_exact_tiling(self, rng):
        h, w = 11, 13
        cover = np.zeros((h, w), dtype=int)
        for r in partition_regions(w, h, 3, 5):
            cover[r.row_start : r.row_stop, r.col_start : r.col_stop] += 1
        assert (cover == 1).all()

    def test_row_major_order(self):
        regions = partition_regions(8, 8, 2, 2)
        origins = [(r.row_start, r.col_start) for r in regions]
        assert origins == [(0, 0), (0, 4), (4, 0), (4, 4)]

    def test_grid_larger_than_image(self):
        with pytest.raises(ValueError):
            partition_regions(8, 3, 4, 4)
        with pytest.raises(ValueError):
            partition_regions(3, 8, 4, 4)


class TestFeatureConfig:
    def test_defaults(self):
        cfg = FeatureConfig("ldgp")
        assert (cfg.order, cfg.grid_rows, cfg.grid_cols, cfg.bins) == (2, 4, 4, 8)
        assert cfg.code_bits == 6
        assert cfg.feature_length == 128

    def test_lengths(self):
        assert FeatureConfig("ldgp", bins=8).feature_length == 128
        assert FeatureConfig("ldp", bins=8).feature_length == 512
        assert FeatureConfig("lbp", bins=8).feature_length == 128
        assert FeatureConfig("ldgp", bins=16).feature_length == 256

    def test_image_count(self):
        assert FeatureConfig("ldgp").image_count == 1
        assert FeatureConfig("lbp").image_count == 1
        assert FeatureConfig("ldp").image_count == 4

    def test_validation(self):
        with pytest.raises(ValueError):
            FeatureConfig("sift")
        with pytest.raises(ValueError):
            FeatureConfig("ldgp", bins=3)
        with pytest.raises(ValueError):
            FeatureConfig("ldgp", bins=128)
        with pytest.raises(ValueError):
            FeatureConfig("ldgp", order=1)
        with pytest.raises(ValueError):
            FeatureConfig("ldgp", grid_rows=0)


class TestExtractFeature:
    def test_constant_image_mass_in_bin_zero(self):
        img = GrayImage(np.full((8, 8), 9, dtype=np.uint8))
        cfg = FeatureConfig("ldgp", grid_rows=2, grid_cols=2, bins=8)
        vec = extract_feature(img, cfg)
        assert vec.values.shape == (32,)
        # every code is 0 so each region puts all 16 pixels in bin 0
        expected = np.zeros(32, dtype=np.int64)
        expected[0::8] = 16
        assert np.array_equal(vec.values, expected)

    def test_histogram_sums_per_region(self, rng):
        img = random_image(rng, 12, 12)
        cfg = FeatureConfig("ldgp", grid_rows=3, grid_cols=3, bins=8)
        vec = extract_feature(img, cfg)
        per_region = vec.values.reshape(9, 8).sum(axis=1)
        assert (per_region == 16).all()

    def test_total_mass_counts_all_planes(self, rng):
        img = random_image(rng, 8, 8)
        cfg = FeatureConfig("ldp", grid_rows=2, grid_cols=2, bins=8)
        vec = extract_feature(img, cfg)
        assert int(vec.values.sum()) == 4 * 64

    @pytest.mark.parametrize("descriptor", ["ldgp", "lbp", "ldp"])
    def test_matches_bruteforce_oracle(self, rng, descriptor):
        img = random_image(rng, 12, 12)
        cfg = FeatureConfig(descriptor, grid_rows=4, grid_cols=4, bins=8)
        vec = extract_feature(img, cfg)
        want = oracles.feature(img.pixels.tolist(), descriptor, cfg.order, 4, 4, 8)
        assert vec.values.tolist() == want

    def test_uneven_image_matches_oracle(self, rng):
        img = random_image(rng, 10, 14)
        cfg = FeatureConfig("ldgp", grid_rows=4, grid_cols=4, bins=16)
        vec = extract_feature(img, cfg)
        want = oracles.feature(img.pixels.tolist(), "ldgp", 2, 4, 4, 16)
        assert vec.values.tolist() == want


class TestDatasetFeatures:
    def test_row_per_entry(self):
        ds = synth_dataset(2, 3, 16, 16, seed=5)
        cfg = FeatureConfig("ldgp")
        feats = extract_dataset_features(ds, cfg)
        assert feats.shape == (6, 128)
        assert feats.dtype == np.int64

    def test_threads_do_not_change_result(self):
        ds = synth_dataset(3, 4, 20, 20, seed=9)
        cfg = FeatureConfig("ldp")
        one = extract_dataset_features(ds, cfg, threads=1)
        two = extract_dataset_features(ds, cfg, threads=2)
        assert np.array_equal(one, two)

    def test_save_features_schema(self, tmp_path):
        ds = synth_dataset(2, 2, 16, 16, seed=3)
        cfg = FeatureConfig("ldgp", grid_rows=2, grid_cols=2, bins=8)
        feats = extract_dataset_features(ds, cfg)
        out = tmp_path / "f.json"
        save_features(out, ds, feats, cfg)
        doc = json.loads(out.read_text())
        assert list(doc.keys()) == ["descriptor", "order", "grid", "bins", "entries"]
        assert doc["descriptor"] == "ldgp"
        assert doc["order"] == 2
        assert doc["grid"] == [2, 2]
        assert doc["bins"] == 8
        assert len(doc["entries"]) == 4
        first = doc["entries"][0]
        assert list(first.keys()) == ["path", "label", "vector"]
        assert first["vector"] == feats[0].tolist()
