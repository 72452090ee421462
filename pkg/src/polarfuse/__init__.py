"""polarfuse: thermal/visual face recognition via pixel-level fusion,
log-polar transformation, eigenface PCA and a tanh MLP classifier."""

from .dataset import DatasetManifest, ManifestRecord, load_manifest, synth_dataset
from .eigenspace import EigenspaceModel, KPolicy
from .eigenspace import fit as fit_eigenspace
from .eigenspace import project, reconstruct
from .errors import PolarFuseError
from .fusion import FusionWeights, fuse
from .imagecore import GrayImage, load_pgm, resize_nearest, save_pgm
from .logpolar import LogPolarParams, center_and_radius, log_polar
from .mlp import MlpModel, TrainConfig, classify, forward, gradient, new_network, train
from .pipeline import (
    Method,
    PipelineConfig,
    TrainedPipeline,
    evaluate,
    incremental_protocol,
    kfold_protocol,
    preprocess,
    train_pipeline,
)
from .report import ExperimentReport, ReportRow, report_from_counts

__version__ = "0.1.0"

__all__ = [
    "DatasetManifest",
    "EigenspaceModel",
    "ExperimentReport",
    "FusionWeights",
    "GrayImage",
    "KPolicy",
    "LogPolarParams",
    "ManifestRecord",
    "Method",
    "MlpModel",
    "PipelineConfig",
    "PolarFuseError",
    "ReportRow",
    "TrainConfig",
    "TrainedPipeline",
    "center_and_radius",
    "classify",
    "evaluate",
    "fit_eigenspace",
    "forward",
    "fuse",
    "gradient",
    "incremental_protocol",
    "kfold_protocol",
    "load_manifest",
    "load_pgm",
    "log_polar",
    "new_network",
    "preprocess",
    "project",
    "reconstruct",
    "report_from_counts",
    "resize_nearest",
    "save_pgm",
    "synth_dataset",
    "train",
    "train_pipeline",
]
