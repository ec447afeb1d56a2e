"""Local pattern descriptors (6-bit directional gradient codes, LBP and LDP
baselines) with spatial-histogram features, L1 nearest-neighbor recognition,
and timing/noise benchmarking."""

from .baselines import NEIGHBOR_OFFSETS, lbp_image, ldp_image
from .bench import (
    TimingRow,
    add_gaussian_noise,
    bench_descriptor,
    noise_sweep,
    time_extraction,
    time_matching,
    write_noise_csv,
    write_timing_csv,
)
from .codec import CodeImage, encode_pair, ldgp_code, ldgp_image
from .derivatives import DIRECTIONS, MAX_ORDER, DerivativeField, Direction, derivative_field
from .features import (
    DESCRIPTORS,
    FeatureConfig,
    FeatureVector,
    Region,
    extract_dataset_features,
    extract_feature,
    partition_regions,
    quantize_code,
    save_features,
)
from .image import (
    DatasetEntry,
    DatasetError,
    GrayImage,
    ImageIOError,
    LabeledDataset,
    load_dataset,
    load_image,
    synth_dataset,
    write_pgm,
)
from .recognition import (
    EvalReport,
    Gallery,
    ProbeDecision,
    evaluate_loo,
    evaluate_split_kfold,
    l1_distance,
    nn_classify,
    write_eval_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CodeImage",
    "DatasetEntry",
    "DatasetError",
    "DerivativeField",
    "DESCRIPTORS",
    "DIRECTIONS",
    "Direction",
    "EvalReport",
    "FeatureConfig",
    "FeatureVector",
    "Gallery",
    "GrayImage",
    "ImageIOError",
    "LabeledDataset",
    "MAX_ORDER",
    "NEIGHBOR_OFFSETS",
    "ProbeDecision",
    "Region",
    "TimingRow",
    "add_gaussian_noise",
    "bench_descriptor",
    "derivative_field",
    "encode_pair",
    "evaluate_loo",
    "evaluate_split_kfold",
    "extract_dataset_features",
    "extract_feature",
    "l1_distance",
    "lbp_image",
    "ldgp_code",
    "ldgp_image",
    "ldp_image",
    "load_dataset",
    "load_image",
    "nn_classify",
    "noise_sweep",
    "partition_regions",
    "quantize_code",
    "save_features",
    "synth_dataset",
    "time_extraction",
    "time_matching",
    "write_eval_csv",
    "write_noise_csv",
    "write_pgm",
    "write_timing_csv",
]
