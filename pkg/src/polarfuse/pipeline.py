"""The two recognition pipelines and their evaluation protocols.

Method orderings:
  * fuse-first:  log_polar(fuse(visual, thermal))
  * polar-first: fuse(log_polar(visual), log_polar(thermal))

Either way the preprocessed image feeds an eigenface projection and a tanh
MLP with one output per subject (one-hot targets at +/-0.9).

Protocols:
  * incremental: fixed 50/50 per-subject train/test split, one training
    run, then test cases growing by one reserved test image per subject;
  * k-fold: per-subject samples split into k equal folds, each fold tested
    once against a model trained on the rest.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

import numpy as np

from . import eigenspace, mlp
from .dataset import DatasetManifest, ManifestRecord
from .errors import (
    DegenerateData,
    IndivisibleFolds,
    InsufficientSamples,
    IoFailure,
    TooFewSubjects,
)
from .fusion import FusionWeights, fuse
from .imagecore import GrayImage
from .logpolar import LogPolarParams, log_polar
from .report import ExperimentReport, ReportRow

TARGET_HI = 0.9
TARGET_LO = -0.9

PIPE_MAGIC = b"PFPIPE1"


class Method(enum.Enum):
    FUSE_FIRST = "fuse-first"
    POLAR_FIRST = "polar-first"


@dataclass(frozen=True)
class PipelineConfig:
    method: Method = Method.FUSE_FIRST
    weights: FusionWeights = field(default_factory=FusionWeights)
    lp: LogPolarParams = field(default_factory=LogPolarParams)
    pca_policy: eigenspace.KPolicy = field(default_factory=eigenspace.KPolicy)
    mlp_hidden: tuple[int, ...] = (100,)
    train: mlp.TrainConfig = field(default_factory=mlp.TrainConfig)

    def echo(self) -> tuple[tuple[str, str], ...]:
        """Config summary for report headers."""
        pca = (
            f"k={self.pca_policy.fixed_k}"
            if self.pca_policy.fixed_k is not None
            else f"tau={self.pca_policy.variance_fraction}"
        )
        return (
            ("method", self.method.value),
            ("weights", f"a={self.weights.a},b={self.weights.b}"),
            (
                "logpolar",
                f"angular={self.lp.angular_samples},radial={self.lp.radial_samples},"
                f"size={self.lp.out_size}",
            ),
            ("pca", pca),
            ("hidden", ",".join(str(h) for h in self.mlp_hidden)),
            (
                "train",
                f"lr={self.train.lr},mc={self.train.mc},epochs={self.train.epochs},"
                f"goal={self.train.grad_goal},seed={self.train.seed}",
            ),
        )


def preprocess(pair: tuple[GrayImage, GrayImage], cfg: PipelineConfig) -> GrayImage:
    """Apply the configured fusion/log-polar ordering to one image pair."""
    v, t = pair
    if cfg.method is Method.FUSE_FIRST:
        return log_polar(fuse(v, t, cfg.weights), cfg.lp)
    return fuse(log_polar(v, cfg.lp), log_polar(t, cfg.lp), cfg.weights)


@dataclass(frozen=True)
class TrainedPipeline:
    eigen: eigenspace.EigenspaceModel
    network: mlp.MlpModel
    subjects: tuple[str, ...]  # output index -> subject id


def train_pipeline(training, cfg: PipelineConfig) -> TrainedPipeline:
    """Fit eigenspace + MLP on (pair, subject) training samples.

    Deterministic given cfg.train.seed. Raises DegenerateData when the
    preprocessed training images carry no variance.
    """
    subjects = tuple(sorted({s for _, s in training}))
    if len(subjects) < 2:
        raise TooFewSubjects(f"need >= 2 subjects, got {len(subjects)}")
    index = {s: i for i, s in enumerate(subjects)}

    processed = [(preprocess(pair, cfg), subj) for pair, subj in training]
    eig = eigenspace.fit([img for img, _ in processed], cfg.pca_policy)
    if eig.k == 0:
        raise DegenerateData("all preprocessed training images are identical")

    data = []
    for img, subj in processed:
        target = np.full(len(subjects), TARGET_LO)
        target[index[subj]] = TARGET_HI
        data.append((eigenspace.project(eig, img), target))

    net = mlp.new_network(
        [eig.k, *cfg.mlp_hidden, len(subjects)], seed=cfg.train.seed
    )
    net, _ = mlp.train(net, data, cfg.train)
    return TrainedPipeline(eig, net, subjects)


def evaluate(tp: TrainedPipeline, testing, cfg: PipelineConfig) -> tuple[int, int]:
    """(correct, total) over (pair, subject) test samples."""
    if not testing:
        raise ValueError("testing set must be nonempty")
    correct = 0
    for pair, subj in testing:
        features = eigenspace.project(tp.eigen, preprocess(pair, cfg))
        predicted = tp.subjects[mlp.classify(tp.network, features)]
        correct += predicted == subj
    return correct, len(testing)


def _shuffled(items: list, rng: np.random.Generator) -> list:
    order = rng.permutation(len(items))
    return [items[i] for i in order]


def incremental_split(manifest: DatasetManifest, steps: int, seed: int):
    """Per-subject 50/50 split (seeded shuffle): the smaller half trains,
    the rest is the ordered test reservation. Test case c uses the first c
    reserved records per subject, so test sets are nested.

    Returns (training_records, reserved) with reserved a dict mapping
    subject id to its ordered list of test ManifestRecord.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    rng = np.random.default_rng(np.uint64(seed))
    groups = manifest.by_subject()
    training: list[ManifestRecord] = []
    reserved: dict[str, list[ManifestRecord]] = {}
    for subj in sorted(groups):
        samples = _shuffled(groups[subj], rng)
        n_train = len(samples) // 2
        test = samples[n_train:]
        if n_train < 1 or len(test) < steps:
            raise InsufficientSamples(
                f"subject {subj}: {len(samples)} samples cannot reserve "
                f"{steps} test images next to a training half"
            )
        training.extend(samples[:n_train])
        reserved[subj] = test
    return training, reserved


def incremental_protocol(
    manifest: DatasetManifest, cfg: PipelineConfig, steps: int, seed: int
) -> ExperimentReport:
    """Train once on a per-subject 50/50 split, then report test cases that
    grow by one reserved test image per subject (nested test sets)."""
    train_recs, reserved = incremental_split(manifest, steps, seed)
    training = [(manifest.load_pair(r), r.subject_id) for r in train_recs]
    loaded = {
        rec: (manifest.load_pair(rec), rec.subject_id)
        for recs in reserved.values()
        for rec in recs
    }
    tp = train_pipeline(training, cfg)
    rows = []
    for c in range(1, steps + 1):
        testing = [loaded[r] for subj in sorted(reserved) for r in reserved[subj][:c]]
        correct, total = evaluate(tp, testing, cfg)
        rows.append(ReportRow(test_case=c, total=total, per_class=c, correct=correct))
    echo = cfg.echo() + (("protocol", f"incremental,steps={steps},seed={seed}"),)
    return ExperimentReport(tuple(rows), echo)


def kfold_partition(manifest: DatasetManifest, k: int, seed: int):
    """Per-subject stratified partition into k equal folds.

    Returns a list of k lists of ManifestRecord. Every subject's sample
    count must be divisible by k.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(np.uint64(seed))
    folds: list[list[ManifestRecord]] = [[] for _ in range(k)]
    groups = manifest.by_subject()
    for subj in sorted(groups):
        recs = groups[subj]
        if len(recs) % k != 0:
            raise IndivisibleFolds(
                f"subject {subj} has {len(recs)} samples, not divisible by k={k}"
            )
        shuffled = _shuffled(recs, rng)
        size = len(recs) // k
        for i in range(k):
            folds[i].extend(shuffled[i * size:(i + 1) * size])
    return folds


def kfold_protocol(
    manifest: DatasetManifest, cfg: PipelineConfig, k: int, seed: int
) -> ExperimentReport:
    """k-fold cross-validation: each fold tested once against a model
    trained on the remaining folds. Row per fold; per_class column carries
    the fold's training-image count."""
    folds = kfold_partition(manifest, k, seed)
    loaded = {
        rec: (manifest.load_pair(rec), rec.subject_id)
        for fold in folds
        for rec in fold
    }
    rows = []
    for i in range(k):
        testing = [loaded[rec] for rec in folds[i]]
        training = [loaded[rec] for j in range(k) if j != i for rec in folds[j]]
        tp = train_pipeline(training, cfg)
        correct, total = evaluate(tp, testing, cfg)
        rows.append(
            ReportRow(
                test_case=i + 1, total=total, per_class=len(training), correct=correct
            )
        )
    echo = cfg.echo() + (("protocol", f"kfold,k={k},seed={seed}"),)
    return ExperimentReport(tuple(rows), echo)


def pipeline_to_bytes(tp: TrainedPipeline) -> bytes:
    """Deterministic binary container: subject map, eigenspace blob, MLP
    blob, each length-prefixed."""
    parts = [PIPE_MAGIC, struct.pack("<Q", len(tp.subjects))]
    for subj in tp.subjects:
        raw = subj.encode("utf-8")
        parts.append(struct.pack("<Q", len(raw)))
        parts.append(raw)
    for blob in (eigenspace.model_to_bytes(tp.eigen), mlp.model_to_bytes(tp.network)):
        parts.append(struct.pack("<Q", len(blob)))
        parts.append(blob)
    return b"".join(parts)


def save_pipeline(tp: TrainedPipeline, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(pipeline_to_bytes(tp))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_pipeline(path) -> TrainedPipeline:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if blob[: len(PIPE_MAGIC)] != PIPE_MAGIC:
        raise IoFailure(f"{path}: bad magic, not a trained pipeline")
    off = len(PIPE_MAGIC)
    (n_subjects,) = struct.unpack_from("<Q", blob, off)
    off += 8
    subjects = []
    for _ in range(n_subjects):
        (length,) = struct.unpack_from("<Q", blob, off)
        off += 8
        subjects.append(blob[off:off + length].decode("utf-8"))
        off += length
    parts = []
    for _ in range(2):
        (length,) = struct.unpack_from("<Q", blob, off)
        off += 8
        parts.append(blob[off:off + length])
        off += length
    eig = eigenspace.model_from_bytes(parts[0], path)
    net = mlp.model_from_bytes(parts[1], path)
    return TrainedPipeline(eig, net, tuple(subjects))
