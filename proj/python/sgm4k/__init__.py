"""Semi-global stereo matching with a 4-pixel-per-clock estimated 0-degree path.

Images are numpy arrays: uint8 (h, w) for grayscale inputs, float32 (h, w) for
ground truth (non-finite = unknown), int32 (h, w) for disparity maps with
INVALID_DISPARITY marking rejected pixels, and uint8 (h, w, d) cost volumes.
"""

from sgm4k._core import (
    CENSUS_BITS,
    INVALID_DISPARITY,
    LAMBDA_NO_CORRECTION,
    FormatError,
    IoError,
    ParamError,
    aggregate_0deg_4ppc,
    aggregate_path,
    bad_pixel_rate,
    census_transform,
    cost_volume,
    estimate_prev,
    hamming,
    load_pfm,
    load_pgm,
    lr_check,
    mde_per_second,
    mde_rounded,
    median3x3,
    noc_mask,
    path_step,
    reference_context_count,
    run_4ppc,
    run_sgm,
    run_streaming,
    save_disparity,
    save_pfm,
    save_pgm,
    scale_ground_truth,
    select_disparity,
)

__all__ = [
    "CENSUS_BITS",
    "INVALID_DISPARITY",
    "LAMBDA_NO_CORRECTION",
    "FormatError",
    "IoError",
    "ParamError",
    "aggregate_0deg_4ppc",
    "aggregate_path",
    "bad_pixel_rate",
    "census_transform",
    "cost_volume",
    "estimate_prev",
    "hamming",
    "load_pfm",
    "load_pgm",
    "lr_check",
    "mde_per_second",
    "mde_rounded",
    "median3x3",
    "noc_mask",
    "path_step",
    "reference_context_count",
    "run_4ppc",
    "run_sgm",
    "run_streaming",
    "save_disparity",
    "save_pfm",
    "save_pgm",
    "scale_ground_truth",
    "select_disparity",
]

__version__ = "0.1.0"
