"""L1 nearest-neighbor matching and recognition-rate evaluation protocols.

All distances are exact integer sums of absolute differences; there is no
floating point anywhere in the matching path. Ties are broken by the lowest
gallery index, so every protocol is deterministic (k-fold splitting under a
fixed seed).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .features import FeatureConfig, FeatureVector, extract_dataset_features
from .image import LabeledDataset

_INT_MAX = np.iinfo(np.int64).max


def _vector(x) -> np.ndarray:
    values = x.values if isinstance(x, FeatureVector) else np.asarray(x)
    return values.astype(np.int64, copy=False)


def l1_distance(x, y) -> int:
    """Sum of absolute elementwise differences of two equal-length vectors."""
    xv, yv = _vector(x), _vector(y)
    if xv.shape != yv.shape:
        raise ValueError(f"length mismatch: {xv.shape} vs {yv.shape}")
    return int(np.abs(xv - yv).sum())


@dataclass(frozen=True)
class Gallery:
    """Feature matrix with parallel labels (and optional source paths)."""

    features: np.ndarray
    labels: tuple[str, ...]
    paths: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError("gallery features must be a 2-D matrix")
        if len(self.labels) != len(self.features):
            raise ValueError("labels must parallel the feature rows")
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.paths is not None:
            object.__setattr__(self, "paths", tuple(self.paths))

    def __len__(self) -> int:
        return len(self.features)

    @classmethod
    def from_dataset(cls, dataset: LabeledDataset, config: FeatureConfig, threads: int = 1) -> "Gallery":
        matrix = extract_dataset_features(dataset, config, threads=threads)
        return cls(matrix, tuple(dataset.labels()), tuple(dataset.paths()))


def _distances_to(features: np.ndarray, probe: np.ndarray) -> np.ndarray:
    return np.abs(features - probe).sum(axis=1)


def nn_classify(probe, gallery: Gallery) -> tuple[str, int, int]:
    """Label, index and distance of the probe's nearest gallery entry.

    Ties are broken by the lowest gallery index.
    """
    if len(gallery) == 0:
        raise ValueError("empty gallery")
    pv = _vector(probe)
    if pv.shape[0] != gallery.features.shape[1]:
        raise ValueError(f"length mismatch: probe {pv.shape[0]} vs gallery {gallery.features.shape[1]}")
    dists = _distances_to(gallery.features.astype(np.int64, copy=False), pv)
    idx = int(np.argmin(dists))
    return gallery.labels[idx], idx, int(dists[idx])


@dataclass(frozen=True)
class ProbeDecision:
    probe_index: int
    probe_path: str
    probe_label: str
    match_index: int
    match_path: str
    match_label: str
    distance: int

    @property
    def correct(self) -> bool:
        return self.probe_label == self.match_label


@dataclass(frozen=True)
class EvalReport:
    """Per-probe decisions plus the aggregate recognition rate."""

    matches: int
    total: int
    decisions: tuple[ProbeDecision, ...]
    fold_rates: tuple[float, ...] = field(default_factory=tuple)

    @property
    def recognition_rate(self) -> float:
        return 100.0 * self.matches / self.total


def evaluate_loo(dataset: LabeledDataset, config: FeatureConfig, threads: int = 1) -> EvalReport:
    """Leave-one-out evaluation: each image probes all remaining images.

    A probe counts as a match when its nearest neighbor's label equals its
    own; the total equals the dataset size.
    """
    n = dataset.image_count
    if n < 2:
        raise ValueError("single-image dataset: leave-one-out needs at least 2 images")
    matrix = extract_dataset_features(dataset, config, threads=threads)
    labels = dataset.labels()
    paths = dataset.paths()
    decisions = []
    matches = 0
    for i in range(n):
        dists = _distances_to(matrix, matrix[i])
        dists[i] = _INT_MAX  # exclude self; argmin then picks the lowest true index
        j = int(np.argmin(dists))
        decisions.append(
            ProbeDecision(i, paths[i], labels[i], j, paths[j], labels[j], int(dists[j]))
        )
        matches += labels[i] == labels[j]
    return EvalReport(matches, n, tuple(decisions))


def _stratified_quotas(sizes: list[int], fraction: float) -> list[int]:
    """Per-class probe counts: exact global total round(fraction * n), each
    class keeping at least one gallery image."""
    total = sum(sizes)
    target = round(fraction * total)
    if target == 0:
        raise ValueError(f"probe fraction {fraction} selects no probes from {total} images")
    caps = [s - 1 for s in sizes]
    if target > sum(caps):
        raise ValueError(f"probe fraction {fraction} leaves a class with an empty gallery")
    quotas = [int(fraction * s) for s in sizes]
    remainders = sorted(
        range(len(sizes)), key=lambda i: (-(fraction * sizes[i] - quotas[i]), i)
    )
    short = target - sum(quotas)
    while short > 0:
        for i in remainders:
            if short == 0:
                break
            if quotas[i] < caps[i]:
                quotas[i] += 1
                short -= 1
    return quotas


def evaluate_split_kfold(
    dataset: LabeledDataset,
    config: FeatureConfig,
    probe_fraction: float,
    folds: int,
    seed: int,
    threads: int = 1,
) -> EvalReport:
    """Averaged recognition rate over seeded random probe/gallery splits.

    Parameters
    ----------
    probe_fraction : float in (0, 1)
        Fraction of the dataset drawn as probes each fold, stratified per
        class so no class loses its entire gallery.
    folds : int
        Number of independent splits; the reported rate is the mean of the
        per-fold rates (all folds draw the same probe count, so it equals
        the pooled rate).
    seed : int
        Drives one RNG stream consumed fold by fold; identical inputs give
        an identical report.
    """
    if not 0.0 < probe_fraction < 1.0:
        raise ValueError(f"probe_fraction must be in (0, 1), got {probe_fraction}")
    if folds < 1:
        raise ValueError(f"folds must be >= 1, got {folds}")
    labels = dataset.labels()
    paths = dataset.paths()
    classes = sorted(set(labels))
    members = {c: [i for i, lab in enumerate(labels) if lab == c] for c in classes}
    quotas = _stratified_quotas([len(members[c]) for c in classes], probe_fraction)

    matrix = extract_dataset_features(dataset, config, threads=threads)
    rng = np.random.default_rng(seed)
    decisions = []
    fold_rates = []
    matches_all = 0
    total_all = 0
    for _ in range(folds):
        probe_idx: list[int] = []
        for c, quota in zip(classes, quotas):
            probe_idx.extend(int(i) for i in rng.choice(members[c], size=quota, replace=False))
        probe_set = set(probe_idx)
        gallery_idx = [i for i in range(len(labels)) if i not in probe_set]
        gallery = matrix[gallery_idx]
        fold_matches = 0
        for i in sorted(probe_idx):
            dists = _distances_to(gallery, matrix[i])
            g = int(np.argmin(dists))
            j = gallery_idx[g]
            decisions.append(
                ProbeDecision(i, paths[i], labels[i], j, paths[j], labels[j], int(dists[g]))
            )
            fold_matches += labels[i] == labels[j]
        fold_rates.append(100.0 * fold_matches / len(probe_idx))
        matches_all += fold_matches
        total_all += len(probe_idx)
    return EvalReport(matches_all, total_all, tuple(decisions), tuple(fold_rates))


def write_eval_csv(report: EvalReport, path) -> None:
    """Per-probe decision rows plus a trailing `#gamma` summary line."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["probe_path", "probe_label", "match_path", "match_label", "distance", "correct"])
        for d in report.decisions:
            writer.writerow(
                [d.probe_path, d.probe_label, d.match_path, d.match_label, d.distance, int(d.correct)]
            )
        fh.write(f"#gamma,{report.recognition_rate:.4f},Nm,{report.matches},Nt,{report.total}\n")
