"""scalogen: synthetic time series via patch-matched wavelet scalograms.

Workflow: simulate or load a series, take its continuous wavelet transform,
normalize, synthesize patch-similar scalograms by multi-scale sliced-OT patch
matching, denormalize, invert by least squares, and evaluate the pool with
k-NN precision/recall.
"""

__version__ = "0.1.0"

from .seeding import mix_seed, splitmix64
from .processes import (
    BRIDGE,
    DRIFTED,
    WIENER,
    Dataset,
    ProcessSpec,
    TimeSeries,
    load_dataset,
    save_dataset,
    simulate,
    simulate_dataset,
)
from .wavelet import (
    NormParams,
    Scalogram,
    WaveletConfig,
    cwt,
    cwt_batch,
    denormalize,
    icwt,
    icwt_batch,
    load_scalogram,
    morlet_kernel,
    normalize,
    operator_matrix,
    save_scalogram,
)
from .patch_synth import (
    PatchSet,
    Pyramid,
    SynthConfig,
    build_pyramid,
    extract_patches,
    fold_patches,
    ot_patch_update,
    resize_width,
    swd,
    synthesize,
    synthesize_batch,
)
from .metrics import EvalReport, FeatureSet, knn_radii, precision_recall
from .pipeline import (
    MODE_RESHUFFLE,
    MODE_RETARGET,
    ExperimentConfig,
    RunManifest,
    run_experiment,
    run_table,
)

__all__ = [
    "__version__",
    "mix_seed",
    "splitmix64",
    "WIENER",
    "BRIDGE",
    "DRIFTED",
    "TimeSeries",
    "ProcessSpec",
    "Dataset",
    "simulate",
    "simulate_dataset",
    "save_dataset",
    "load_dataset",
    "WaveletConfig",
    "NormParams",
    "Scalogram",
    "morlet_kernel",
    "operator_matrix",
    "cwt",
    "cwt_batch",
    "normalize",
    "denormalize",
    "icwt",
    "icwt_batch",
    "save_scalogram",
    "load_scalogram",
    "SynthConfig",
    "Pyramid",
    "PatchSet",
    "build_pyramid",
    "resize_width",
    "extract_patches",
    "fold_patches",
    "swd",
    "ot_patch_update",
    "synthesize",
    "synthesize_batch",
    "FeatureSet",
    "EvalReport",
    "knn_radii",
    "precision_recall",
    "ExperimentConfig",
    "RunManifest",
    "MODE_RESHUFFLE",
    "MODE_RETARGET",
    "run_experiment",
    "run_table",
]
