"""Multilayer perceptron with tanh units, trained by full-batch gradient
descent with heavy-ball momentum:

    dw(t) = mc * dw(t-1) - lr * grad E(w(t)),   w(t+1) = w(t) + dw(t)

E is the mean squared error E = (1/(2*batch)) * sum ||out - target||^2.
Inputs are affinely rescaled per feature from their observed training range
to [-1, 1] before the first layer.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    BadArchitecture,
    BadTargets,
    DimensionMismatch,
    IoFailure,
)

MAGIC = b"PFMLP1"

DEFAULT_EPOCHS = 700_000
DEFAULT_LR = 0.02
DEFAULT_MC = 0.09
DEFAULT_GRAD_GOAL = 1e-6


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = DEFAULT_EPOCHS
    lr: float = DEFAULT_LR
    mc: float = DEFAULT_MC
    grad_goal: float = DEFAULT_GRAD_GOAL
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if not (0 <= self.mc < 1):
            raise ValueError(f"mc must be in [0, 1), got {self.mc}")
        if self.grad_goal <= 0:
            raise ValueError(f"grad_goal must be positive, got {self.grad_goal}")


@dataclass(frozen=True)
class TrainLog:
    """Per-epoch mean squared error and why training stopped."""

    errors: np.ndarray = field(repr=False)
    stop_reason: str = "max_epochs"  # "max_epochs" | "grad_goal"

    @property
    def epochs_run(self) -> int:
        return len(self.errors)


@dataclass(frozen=True)
class MlpModel:
    """Layered weights and biases plus the per-feature input scaling.

    weights[l] has shape (layer_sizes[l+1], layer_sizes[l]); biases[l] has
    length layer_sizes[l+1]. input_scale is an (input_dim, 2) array of
    (lo, hi) pairs; a feature x maps to 2*(x - lo)/(hi - lo) - 1.
    """

    layer_sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...] = field(repr=False)
    biases: tuple[np.ndarray, ...] = field(repr=False)
    input_scale: np.ndarray = field(repr=False)

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]


def new_network(layer_sizes, seed: int) -> MlpModel:
    """Fresh network with weights and biases i.i.d. uniform on [-0.5, 0.5].

    Same (layer_sizes, seed) always yields the identical network. The input
    scaling starts as the identity placeholder (-1, 1) per feature and is
    overwritten by train().
    """
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise BadArchitecture(f"need >= 2 layers, all sizes >= 1, got {sizes}")
    rng = np.random.default_rng(np.uint64(seed))
    weights = tuple(
        rng.uniform(-0.5, 0.5, size=(sizes[l + 1], sizes[l]))
        for l in range(len(sizes) - 1)
    )
    biases = tuple(
        rng.uniform(-0.5, 0.5, size=sizes[l + 1]) for l in range(len(sizes) - 1)
    )
    scale = np.tile(np.array([-1.0, 1.0]), (sizes[0], 1))
    return MlpModel(sizes, weights, biases, scale)


def _scale_inputs(model: MlpModel, x: np.ndarray) -> np.ndarray:
    lo = model.input_scale[:, 0]
    hi = model.input_scale[:, 1]
    return 2.0 * (x - lo) / (hi - lo) - 1.0


def _as_batch(model: MlpModel, x) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if arr.shape[1] != model.input_dim:
        raise DimensionMismatch(
            f"input dim {arr.shape[1]}, network expects {model.input_dim}"
        )
    return arr


def _forward_batch(model: MlpModel, x: np.ndarray):
    """Activations per layer for a (batch, input_dim) matrix."""
    activations = [_scale_inputs(model, x)]
    for w, b in zip(model.weights, model.biases):
        activations.append(np.tanh(activations[-1] @ w.T + b))
    return activations


def forward(model: MlpModel, x) -> np.ndarray:
    """Network output for a single input vector; components in (-1, 1)."""
    batch = _as_batch(model, x)
    if batch.shape[0] != 1:
        raise DimensionMismatch("forward takes a single input vector")
    return _forward_batch(model, batch)[-1][0]


def classify(model: MlpModel, x) -> int:
    """Index of the largest output; ties break toward the lowest index."""
    return int(np.argmax(forward(model, x)))


def _check_targets(model: MlpModel, targets: np.ndarray):
    if targets.ndim != 2 or targets.shape[1] != model.output_dim:
        raise DimensionMismatch(
            f"target dim {targets.shape}, network outputs {model.output_dim}"
        )
    if np.any(targets < -1.0) or np.any(targets > 1.0):
        raise BadTargets("targets must lie in [-1, 1] componentwise")


def _gradient_batch(model: MlpModel, xs: np.ndarray, targets: np.ndarray):
    """Gradients of E and the batch MSE, for pre-validated arrays."""
    n = xs.shape[0]
    acts = _forward_batch(model, xs)
    out = acts[-1]
    diff = out - targets
    mse = float(np.sum(diff * diff) / (2.0 * n))

    grad_w = []
    grad_b = []
    delta = (diff / n) * (1.0 - out * out)
    for l in range(len(model.weights) - 1, -1, -1):
        grad_w.append(delta.T @ acts[l])
        grad_b.append(delta.sum(axis=0))
        if l > 0:
            delta = (delta @ model.weights[l]) * (1.0 - acts[l] * acts[l])
    grad_w.reverse()
    grad_b.reverse()
    return grad_w, grad_b, mse


def gradient(model: MlpModel, batch):
    """Exact gradient of E over a batch of (x, target) pairs.

    Returns (grad_weights, grad_biases), lists shaped like the model's
    weights and biases.
    """
    if not batch:
        raise DimensionMismatch("batch must be nonempty")
    xs = _as_batch(model, np.stack([np.asarray(x, dtype=np.float64) for x, _ in batch]))
    ts = np.atleast_2d(np.asarray([t for _, t in batch], dtype=np.float64))
    _check_targets(model, ts)
    gw, gb, _ = _gradient_batch(model, xs, ts)
    return gw, gb


def train(model: MlpModel, data, cfg: TrainConfig) -> tuple[MlpModel, TrainLog]:
    """Full-batch gradient descent with momentum.

    Sets the input scaling from the per-feature min/max of the data, then
    iterates until cfg.epochs or until the infinity norm of the gradient
    drops below cfg.grad_goal. Deterministic given (model, data, cfg).
    """
    if not data:
        raise DimensionMismatch("training data must be nonempty")
    xs = _as_batch(model, np.stack([np.asarray(x, dtype=np.float64) for x, _ in data]))
    ts = np.atleast_2d(np.asarray([t for _, t in data], dtype=np.float64))
    _check_targets(model, ts)

    lo = xs.min(axis=0)
    hi = xs.max(axis=0)
    hi = np.where(hi > lo, hi, lo + 1.0)  # constant features: avoid /0
    model = replace(model, input_scale=np.column_stack([lo, hi]))

    weights = [w.copy() for w in model.weights]
    biases = [b.copy() for b in model.biases]
    dw = [np.zeros_like(w) for w in weights]
    db = [np.zeros_like(b) for b in biases]

    scaled = _scale_inputs(model, xs)  # input scaling is fixed from here on
    n = xs.shape[0]
    errors = []
    stop_reason = "max_epochs"
    for _ in range(cfg.epochs):
        acts = [scaled]
        for w, b in zip(weights, biases):
            acts.append(np.tanh(acts[-1] @ w.T + b))
        diff = acts[-1] - ts
        mse = float(np.sum(diff * diff) / (2.0 * n))
        errors.append(mse)
        gw = [None] * len(weights)
        gb = [None] * len(weights)
        delta = (diff / n) * (1.0 - acts[-1] * acts[-1])
        for l in range(len(weights) - 1, -1, -1):
            gw[l] = delta.T @ acts[l]
            gb[l] = delta.sum(axis=0)
            if l > 0:
                delta = (delta @ weights[l]) * (1.0 - acts[l] * acts[l])
        grad_inf = max(
            max((float(np.max(np.abs(g))) for g in gw), default=0.0),
            max((float(np.max(np.abs(g))) for g in gb), default=0.0),
        )
        if grad_inf < cfg.grad_goal:
            stop_reason = "grad_goal"
            break
        for l in range(len(weights)):
            dw[l] = cfg.mc * dw[l] - cfg.lr * gw[l]
            db[l] = cfg.mc * db[l] - cfg.lr * gb[l]
            weights[l] += dw[l]
            biases[l] += db[l]

    trained = replace(model, weights=tuple(weights), biases=tuple(biases))
    return trained, TrainLog(np.asarray(errors), stop_reason)


def model_to_bytes(model: MlpModel) -> bytes:
    """Flat binary container: magic, layer count and sizes as u64 LE, the
    input scaling, then weights (row-major) and bias per layer, f64 LE."""
    parts = [
        MAGIC,
        struct.pack("<Q", len(model.layer_sizes)),
        struct.pack(f"<{len(model.layer_sizes)}Q", *model.layer_sizes),
        np.ascontiguousarray(model.input_scale, dtype="<f8").tobytes(),
    ]
    for w, b in zip(model.weights, model.biases):
        parts.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        parts.append(b.astype("<f8").tobytes())
    return b"".join(parts)


def save_model(model: MlpModel, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(model_to_bytes(model))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def model_from_bytes(blob: bytes, path="<bytes>") -> MlpModel:
    if blob[:6] != MAGIC:
        raise IoFailure(f"{path}: bad magic, not an MLP model")
    (n_layers,) = struct.unpack_from("<Q", blob, 6)
    off = 14
    sizes = struct.unpack_from(f"<{n_layers}Q", blob, off)
    off += 8 * n_layers
    scale = np.frombuffer(blob, dtype="<f8", count=2 * sizes[0], offset=off)
    scale = scale.reshape(sizes[0], 2).copy()
    off += 16 * sizes[0]
    weights = []
    biases = []
    for l in range(n_layers - 1):
        rows, cols = sizes[l + 1], sizes[l]
        w = np.frombuffer(blob, dtype="<f8", count=rows * cols, offset=off)
        weights.append(w.reshape(rows, cols).copy())
        off += 8 * rows * cols
        b = np.frombuffer(blob, dtype="<f8", count=rows, offset=off)
        biases.append(b.copy())
        off += 8 * rows
    if off > len(blob):
        raise IoFailure(f"{path}: truncated model file")
    return MlpModel(tuple(int(s) for s in sizes), tuple(weights), tuple(biases), scale)


def load_model(path) -> MlpModel:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return model_from_bytes(blob, path)
