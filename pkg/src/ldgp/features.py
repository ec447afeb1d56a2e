"""Code images to matchable features: quantization, region grids, histograms.

A feature vector is the concatenation, region by region (row-major), then
code image by code image, of bins-sized count histograms of uniformly
quantized codes. Counts are raw (not normalized): every region's histogram
sums to that region's pixel count per code image.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import lbp_image, ldp_image
from .codec import LDGP_BITS, ldgp_image
from .image import GrayImage, LabeledDataset

DESCRIPTORS = ("ldgp", "ldp", "lbp")


@dataclass(frozen=True)
class FeatureConfig:
    """Descriptor choice plus histogram settings.

    bins must be a power of two no larger than 2^code_bits; order applies to
    ldgp/ldp (>= 2) and is ignored by lbp.
    """

    descriptor: str
    order: int = 2
    grid_rows: int = 4
    grid_cols: int = 4
    bins: int = 8

    def __post_init__(self):
        if self.descriptor not in DESCRIPTORS:
            raise ValueError(f"unknown descriptor {self.descriptor!r}, expected one of {DESCRIPTORS}")
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValueError("grid dimensions must be >= 1")
        if self.bins < 1 or self.bins & (self.bins - 1):
            raise ValueError(f"bins must be a power of two, got {self.bins}")
        if self.bins > 1 << self.code_bits:
            raise ValueError(f"bins {self.bins} exceeds code range 2^{self.code_bits}")
        if self.descriptor != "lbp" and self.order < 2:
            raise ValueError(f"order must be >= 2 for {self.descriptor}, got {self.order}")

    @property
    def code_bits(self) -> int:
        return LDGP_BITS if self.descriptor == "ldgp" else 8

    @property
    def image_count(self) -> int:
        """Code images produced per input image (4 for ldp, else 1)."""
        return 4 if self.descriptor == "ldp" else 1

    @property
    def region_count(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def feature_length(self) -> int:
        return self.region_count * self.bins * self.image_count


@dataclass(frozen=True)
class FeatureVector:
    """Concatenated per-region histogram counts plus the config that built them."""

    values: np.ndarray
    config: FeatureConfig

    def __post_init__(self):
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Region:
    """Half-open pixel rectangle [row_start, row_stop) x [col_start, col_stop)."""

    row_start: int
    row_stop: int
    col_start: int
    col_stop: int


def quantize_code(code: int, code_bits: int, bins: int) -> int:
    """Uniformly map a code in [0, 2^code_bits) onto [0, bins)."""
    if bins < 1 or bins & (bins - 1):
        raise ValueError(f"bins must be a power of two, got {bins}")
    if bins > 1 << code_bits:
        raise ValueError(f"bins {bins} exceeds code range 2^{code_bits}")
    return code >> (code_bits - (bins.bit_length() - 1))


def partition_regions(width: int, height: int, grid_rows: int, grid_cols: int) -> list[Region]:
    """Tile an image into a row-major grid of floor-boundary rectangles.

    Region (r, c) spans rows [floor(r*H/R), floor((r+1)*H/R)) and the
    analogous columns; the regions tile the image exactly.
    """
    if grid_rows < 1 or grid_cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    if grid_rows > height or grid_cols > width:
        raise ValueError(
            f"grid {grid_rows}x{grid_cols} larger than image {width}x{height}"
        )
    row_edges = [r * height // grid_rows for r in range(grid_rows + 1)]
    col_edges = [c * width // grid_cols for c in range(grid_cols + 1)]
    return [
        Region(row_edges[r], row_edges[r + 1], col_edges[c], col_edges[c + 1])
        for r in range(grid_rows)
        for c in range(grid_cols)
    ]


def _code_images(image: GrayImage, config: FeatureConfig):
    if config.descriptor == "ldgp":
        return (ldgp_image(image, config.order),)
    if config.descriptor == "ldp":
        return ldp_image(image, config.order)
    return (lbp_image(image),)


def extract_feature(image: GrayImage, config: FeatureConfig) -> FeatureVector:
    """Run the configured codec and build the concatenated region histograms."""
    code_images = _code_images(image, config)
    regions = partition_regions(image.width, image.height, config.grid_rows, config.grid_cols)
    shift = config.code_bits - (config.bins.bit_length() - 1)
    parts = []
    for region in regions:
        for ci in code_images:
            block = ci.codes[region.row_start : region.row_stop, region.col_start : region.col_stop]
            parts.append(np.bincount((block >> shift).ravel(), minlength=config.bins))
    return FeatureVector(np.concatenate(parts).astype(np.int64), config)


def extract_dataset_features(dataset: LabeledDataset, config: FeatureConfig, threads: int = 1) -> np.ndarray:
    """Feature matrix (one row per dataset entry, dataset order).

    threads > 1 extracts entries in a worker pool; output is identical
    regardless of thread count.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads == 1:
        rows = [extract_feature(e.image, config).values for e in dataset.entries]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda e: extract_feature(e.image, config).values, dataset.entries))
    return np.stack(rows)


def save_features(path, dataset: LabeledDataset, matrix: np.ndarray, config: FeatureConfig) -> None:
    """Write extracted features as JSON with a fixed field layout."""
    doc = {
        "descriptor": config.descriptor,
        "order": config.order,
        "grid": [config.grid_rows, config.grid_cols],
        "bins": config.bins,
        "entries": [
            {"path": e.path, "label": e.label, "vector": [int(v) for v in row]}
            for e, row in zip(dataset.entries, matrix)
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
