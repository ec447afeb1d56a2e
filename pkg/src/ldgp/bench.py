"""Timing harness and Gaussian-noise robustness sweeps.

Extraction and matching times grow linearly with image size, image count
and feature length, so the harness reports medians over repeated runs (a
single run on a shared machine is too noisy to expose the feature-length
ratio between descriptors). Disk I/O is never inside a timed section.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, replace
from statistics import median

import numpy as np

from .features import FeatureConfig, extract_dataset_features, extract_feature
from .image import GrayImage, LabeledDataset

_INT_MAX = np.iinfo(np.int64).max


@dataclass(frozen=True)
class TimingRow:
    """One benchmarked configuration; t_e/t_m are medians in seconds."""

    descriptor: str
    order: int
    width: int
    height: int
    gamma_count: int
    feature_len: int
    t_e_sec: float | None = None
    t_m_sec: float | None = None
    reps: int = 0
    threads: int = 1


def add_gaussian_noise(image: GrayImage, variance: float, seed: int) -> GrayImage:
    """Add zero-mean Gaussian noise of the given variance, rounded and clamped.

    Deterministic under seed; variance 0 returns an identical image.
    """
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(variance), size=image.pixels.shape)
    noisy = np.clip(np.rint(image.pixels.astype(np.float64) + noise), 0, 255)
    return GrayImage(noisy.astype(np.uint8))


def time_extraction(
    dataset: LabeledDataset, config: FeatureConfig, repetitions: int = 3, threads: int = 1
) -> TimingRow:
    """Median wall-clock time to extract features for every dataset image."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    times = []
    for _ in range(repetitions):
        start = time.perf_counter()
        extract_dataset_features(dataset, config, threads=threads)
        times.append(time.perf_counter() - start)
    first = dataset.entries[0].image
    return TimingRow(
        descriptor=config.descriptor,
        order=config.order,
        width=first.width,
        height=first.height,
        gamma_count=dataset.image_count,
        feature_len=config.feature_length,
        t_e_sec=median(times),
        reps=repetitions,
        threads=threads,
    )


def _loo_match_pass(features: np.ndarray) -> np.ndarray:
    """All-pairs leave-one-out matching: nearest index for every probe."""
    n = len(features)
    chosen = np.empty(n, dtype=np.int64)
    for i in range(n):
        dists = np.abs(features - features[i]).sum(axis=1)
        dists[i] = _INT_MAX
        chosen[i] = np.argmin(dists)
    return chosen


def time_matching(
    features: np.ndarray,
    config: FeatureConfig,
    width: int,
    height: int,
    repetitions: int = 3,
) -> TimingRow:
    """Median wall-clock time of a full all-pairs leave-one-out matching pass."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    features = features.astype(np.int64, copy=False)
    times = []
    for _ in range(repetitions):
        start = time.perf_counter()
        _loo_match_pass(features)
        times.append(time.perf_counter() - start)
    return TimingRow(
        descriptor=config.descriptor,
        order=config.order,
        width=width,
        height=height,
        gamma_count=len(features),
        feature_len=config.feature_length,
        t_m_sec=median(times),
        reps=repetitions,
    )


def bench_descriptor(
    dataset: LabeledDataset, config: FeatureConfig, repetitions: int = 3, threads: int = 1
) -> TimingRow:
    """Extraction and matching medians for one descriptor config, merged."""
    row = time_extraction(dataset, config, repetitions=repetitions, threads=threads)
    features = extract_dataset_features(dataset, config, threads=threads)
    matched = time_matching(features, config, row.width, row.height, repetitions=repetitions)
    return replace(row, t_m_sec=matched.t_m_sec)


def _noise_seed(seed: int, sweep_index: int, image_index: int) -> int:
    return int(np.random.SeedSequence((seed, sweep_index, image_index)).generate_state(1)[0])


def noise_sweep(
    dataset: LabeledDataset,
    config: FeatureConfig,
    variances,
    seed: int,
    threads: int = 1,
) -> list[tuple[float, float]]:
    """Recognition rate with noisy probes against the clean gallery.

    For each requested variance every dataset image is perturbed with
    per-image seeded Gaussian noise, its features become the probe set, and
    the untouched features of all images form the gallery. Returns one
    (variance, rate) row per variance, in request order.
    """
    variances = list(variances)
    if not variances:
        raise ValueError("at least one variance is required")
    gallery = extract_dataset_features(dataset, config, threads=threads)
    labels = dataset.labels()
    rows = []
    for vi, variance in enumerate(variances):
        noisy_entries = [
            add_gaussian_noise(e.image, variance, _noise_seed(seed, vi, i))
            for i, e in enumerate(dataset.entries)
        ]
        matches = 0
        for i, noisy in enumerate(noisy_entries):
            probe = extract_feature(noisy, config).values
            dists = np.abs(gallery - probe).sum(axis=1)
            j = int(np.argmin(dists))
            matches += labels[i] == labels[j]
        rows.append((float(variance), 100.0 * matches / len(labels)))
    return rows


def write_timing_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["descriptor", "order", "width", "height", "gamma_count",
             "feature_len", "t_e_sec", "t_m_sec", "reps", "threads"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.descriptor,
                    r.order,
                    r.width,
                    r.height,
                    r.gamma_count,
                    r.feature_len,
                    "" if r.t_e_sec is None else f"{r.t_e_sec:.6f}",
                    "" if r.t_m_sec is None else f"{r.t_m_sec:.6f}",
                    r.reps,
                    r.threads,
                ]
            )


def write_noise_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variance", "gamma"])
        for variance, gamma in rows:
            writer.writerow([f"{variance:g}", f"{gamma:.4f}"])
