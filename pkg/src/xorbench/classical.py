"""Logistic-regression and one-hidden-layer MLP baselines.

Both models are trained with full-batch gradient descent on binary
cross-entropy using exact backprop gradients. Labels are the reals {0, 1};
the classification threshold is exactly 0.5 and a tie (p == 0.5) is class 0.

Parameter layout and init draw order (uniform(-1, 1) from the model seed):
LR draws w then b; MLP draws W1 (h, 2), b1 (h,), W2 (h,), b2.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .data import LabeledDataset
from .records import LearningCurves, RunRecord, TrainingDiverged
from .rngs import SeedLike, make_rng
from .vqc import bce_loss

DEFAULT_LR_LEARNING_RATE = 0.1
DEFAULT_MLP_LEARNING_RATE = 5.0
DEFAULT_CLASSICAL_EPOCHS = 4000


@dataclass
class LinearModel:
    w: np.ndarray  # (2,)
    b: float
    seed: Optional[int] = None

    def n_params(self) -> int:
        return self.w.size + 1  # always 3


@dataclass
class MlpModel:
    W1: np.ndarray  # (h, 2)
    b1: np.ndarray  # (h,)
    W2: np.ndarray  # (h,) output weights
    b2: float
    seed: Optional[int] = None

    @property
    def hidden_units(self) -> int:
        return self.W1.shape[0]

    def n_params(self) -> int:
        return self.W1.size + self.b1.size + self.W2.size + 1  # 4h + 1


@dataclass
class ClassicalTrainConfig:
    learning_rate: float
    epochs: int


def init_linear(seed: SeedLike) -> LinearModel:
    rng = make_rng(seed)
    w = rng.uniform(-1.0, 1.0, 2)
    b = float(rng.uniform(-1.0, 1.0))
    return LinearModel(w, b, seed=seed if isinstance(seed, (int, np.integer)) else None)


def init_mlp(hidden_units: int, seed: SeedLike) -> MlpModel:
    if hidden_units < 1:
        raise ValueError(f"hidden_units must be >= 1, got {hidden_units}")
    rng = make_rng(seed)
    W1 = rng.uniform(-1.0, 1.0, (hidden_units, 2))
    b1 = rng.uniform(-1.0, 1.0, hidden_units)
    W2 = rng.uniform(-1.0, 1.0, hidden_units)
    b2 = float(rng.uniform(-1.0, 1.0))
    return MlpModel(W1, b1, W2, b2, seed=seed if isinstance(seed, (int, np.integer)) else None)


def sigmoid(z: np.ndarray) -> np.ndarray:
    # Split by sign to avoid exp overflow warnings for large |z|.
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def linear_predict(model: LinearModel, x) -> Union[float, np.ndarray]:
    """p(y=1 | x) = sigmoid(w . x + b); accepts a point or an (N, 2) batch."""
    x = np.asarray(x, dtype=float)
    z = x @ model.w + model.b
    p = sigmoid(np.atleast_1d(z))
    return float(p[0]) if z.ndim == 0 else p


def mlp_predict(model: MlpModel, x) -> Union[float, np.ndarray]:
    """Sigmoid hidden layer, sigmoid output; accepts a point or a batch."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    a1 = sigmoid(X @ model.W1.T + model.b1)
    p = sigmoid(a1 @ model.W2 + model.b2)
    return float(p[0]) if single else p


def predict_labels(p) -> np.ndarray:
    """Threshold at exactly 0.5; ties are class 0."""
    return (np.asarray(p) > 0.5).astype(np.int64)


def _linear_grads(model, X, y, p):
    dz = (p - y) / len(y)
    return X.T @ dz, float(dz.sum())


def _mlp_grads(model, X, y, a1, p):
    dz2 = (p - y) / len(y)
    dW2 = a1.T @ dz2
    db2 = float(dz2.sum())
    dz1 = np.outer(dz2, model.W2) * a1 * (1.0 - a1)
    dW1 = dz1.T @ X
    db1 = dz1.sum(axis=0)
    return dW1, db1, dW2, db2


def gradient(model, X, y):
    """Exact full-batch BCE gradient, in the model's parameter layout."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(model, LinearModel):
        p = linear_predict(model, X)
        return _linear_grads(model, X, y, p)
    a1 = sigmoid(X @ model.W1.T + model.b1)
    p = sigmoid(a1 @ model.W2 + model.b2)
    return _mlp_grads(model, X, y, a1, p)


def _clone(model):
    if isinstance(model, LinearModel):
        return LinearModel(model.w.copy(), model.b, model.seed)
    return MlpModel(model.W1.copy(), model.b1.copy(), model.W2.copy(), model.b2, model.seed)


def train_classical(
    model0: Union[LinearModel, MlpModel],
    train: LabeledDataset,
    test: LabeledDataset,
    config: ClassicalTrainConfig,
    run_id: str = "",
) -> Tuple[Union[LinearModel, MlpModel], LearningCurves, RunRecord]:
    """Full-batch gradient descent on BCE; deterministic given the model seed."""
    if len(train) == 0 or len(test) == 0:
        raise ValueError("train and test datasets must be nonempty")
    model = _clone(model0)
    X, y = train.points, train.labels.astype(float)
    Xte, yte = test.points, test.labels.astype(float)
    lr = config.learning_rate
    is_linear = isinstance(model, LinearModel)

    curves = LearningCurves(*(np.empty(config.epochs) for _ in range(4)))
    t0 = time.perf_counter()
    for epoch in range(1, config.epochs + 1):
        if is_linear:
            p = linear_predict(model, X)
            dw, db = _linear_grads(model, X, y, p)
            model.w = model.w - lr * dw
            model.b = model.b - lr * db
        else:
            a1 = sigmoid(X @ model.W1.T + model.b1)
            p = sigmoid(a1 @ model.W2 + model.b2)
            dW1, db1, dW2, db2 = _mlp_grads(model, X, y, a1, p)
            model.W1 = model.W1 - lr * dW1
            model.b1 = model.b1 - lr * db1
            model.W2 = model.W2 - lr * dW2
            model.b2 = model.b2 - lr * db2
        predictor = linear_predict if is_linear else mlp_predict
        p_tr, p_te = predictor(model, X), predictor(model, Xte)
        loss = bce_loss(p_tr, y)
        if not np.isfinite(loss):
            raise TrainingDiverged(epoch)
        curves.train_bce[epoch - 1] = loss
        curves.test_bce[epoch - 1] = bce_loss(p_te, yte)
        curves.train_acc[epoch - 1] = float(np.mean(predict_labels(p_tr) == train.labels))
        curves.test_acc[epoch - 1] = float(np.mean(predict_labels(p_te) == test.labels))
    elapsed = time.perf_counter() - t0

    predictor = linear_predict if is_linear else mlp_predict
    p_tr, p_te = predictor(model, X), predictor(model, Xte)
    prov = train.provenance
    record = RunRecord(
        run_id=run_id or f"{'LR' if is_linear else 'MLP'}-s{model.seed}",
        model="LR" if is_linear else "MLP",
        variant=prov.variant, sigma=prov.sigma,
        n_per_cluster=prov.n_per_cluster, threshold_t=prov.threshold_t,
        seed=model.seed if model.seed is not None else -1,
        depth_L=None,
        hidden_h=None if is_linear else model.hidden_units,
        shots=None, lr=lr, epochs=config.epochs, n_params=model.n_params(),
        train_acc=float(np.mean(predict_labels(p_tr) == train.labels)),
        test_acc=float(np.mean(predict_labels(p_te) == test.labels)),
        train_bce=float(bce_loss(p_tr, y)), test_bce=float(bce_loss(p_te, yte)),
        train_time_s=elapsed,
    )
    return model, curves, record


def save_checkpoint(model: Union[LinearModel, MlpModel], path: Union[str, Path]) -> None:
    """JSON checkpoint mirroring the VQC format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(model, LinearModel):
        payload = {"kind": "linear", "w": model.w.tolist(), "b": model.b, "seed": model.seed}
    else:
        payload = {
            "kind": "mlp", "W1": model.W1.tolist(), "b1": model.b1.tolist(),
            "W2": model.W2.tolist(), "b2": model.b2, "seed": model.seed,
        }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_checkpoint(path: Union[str, Path]) -> Union[LinearModel, MlpModel]:
    with open(path) as fh:
        payload = json.load(fh)
    if payload["kind"] == "linear":
        return LinearModel(np.array(payload["w"]), float(payload["b"]), payload.get("seed"))
    if payload["kind"] == "mlp":
        return MlpModel(
            np.array(payload["W1"]), np.array(payload["b1"]),
            np.array(payload["W2"]), float(payload["b2"]), payload.get("seed"),
        )
    raise ValueError(f"unknown checkpoint kind {payload.get('kind')!r}")
