"""Two-qubit variational quantum classifier.

Circuit layout (see also ``kernels``): angle encoding RX(pi x1) on qubit 0
and RX(pi x2) on qubit 1, then ``depth`` layers of [RZ(a) RY(b) RZ(c) per
qubit, CNOT(0 -> 1)], measuring <Z0>. Each layer consumes 6 parameters,
qubit 0's triple first, applied in circuit order RZ, RY, RZ.

Score-to-probability convention: m = <Z0> in [-1, 1] maps to
p(y=1 | x) = (1 + m) / 2, so m = +1 means class 1. (The opposite sign
convention is also common; everything here consistently uses this one.)

Gradients use the parameter-shift rule, exact for half-angle rotation
generators:  dm/dt_k = [m(t_k + pi/2) - m(t_k - pi/2)] / 2.

Shot mode: expectations are estimated from a finite number of measurement
samples (one binomial count per estimate, see qsim). Training draws its
shot noise from the stream seeded [model_seed, 1], metric evaluation from
[model_seed, 2]; parameter initialisation uses the bare model seed.
Gradients in shot mode reuse the parameter-shift formula with sampled
expectations (noisy but unbiased); set ``analytic_gradients=True`` to keep
the gradient exact while still evaluating metrics with shots.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from . import kernels, qsim
from .data import LabeledDataset
from .qsim import ANALYTIC, GateOp, ShotCount, StateVector
from .records import LearningCurves, RunRecord, TrainingDiverged
from .rngs import SeedLike, make_rng

ADAM = "adam"
GD = "gd"

BCE_EPS = 1e-12

DEFAULT_VQC_LEARNING_RATE = 0.1
DEFAULT_VQC_EPOCHS = 150


@dataclass
class VqcModel:
    depth: int
    params: np.ndarray  # (6 * depth,) radians
    shots: ShotCount = ANALYTIC
    observable_qubit: int = 0
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        self.params = np.asarray(self.params, dtype=float)
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.params.shape != (6 * self.depth,):
            raise ValueError(
                f"params must have length 6 * depth = {6 * self.depth}, got {self.params.shape}"
            )
        if not np.all(np.isfinite(self.params)):
            raise ValueError("params must be finite")
        if self.observable_qubit != 0:
            raise ValueError("observable is fixed to Z on qubit 0")
        qsim.MeasurementSpec(0, self.shots)  # validates the shot count

    def n_params(self) -> int:
        return 6 * self.depth


@dataclass
class VqcTrainConfig:
    optimizer: str = ADAM
    learning_rate: float = DEFAULT_VQC_LEARNING_RATE
    epochs: int = DEFAULT_VQC_EPOCHS
    init_seed: Optional[int] = None
    analytic_gradients: bool = False

    def __post_init__(self) -> None:
        if self.optimizer not in (ADAM, GD):
            raise ValueError(f"optimizer must be {ADAM!r} or {GD!r}")
        if not (0.0 < self.learning_rate <= 1.0):
            raise ValueError(f"learning_rate must lie in (0, 1], got {self.learning_rate}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")


def init_model(depth: int, seed: SeedLike, shots: ShotCount = ANALYTIC) -> VqcModel:
    """Angles uniform on (-pi, pi) from the model seed."""
    rng = make_rng(seed)
    params = rng.uniform(-np.pi, np.pi, 6 * depth)
    return VqcModel(
        depth, params, shots=shots,
        seed=seed if isinstance(seed, (int, np.integer)) else None,
    )


def encode_features(x) -> StateVector:
    """Angle encoding: RX(pi x1) on qubit 0, RX(pi x2) on qubit 1, from |00>."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise ValueError(f"expected a 2-d point, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    state = qsim.init_zero_state(2)
    state = qsim.apply_gate(state, GateOp("RX", target=0, angle=np.pi * x[0]))
    state = qsim.apply_gate(state, GateOp("RX", target=1, angle=np.pi * x[1]))
    return state


def ansatz_gates(model: VqcModel):
    gates = []
    for layer in range(model.depth):
        p = model.params[6 * layer : 6 * layer + 6]
        gates += [
            GateOp("RZ", target=0, angle=p[0]),
            GateOp("RY", target=0, angle=p[1]),
            GateOp("RZ", target=0, angle=p[2]),
            GateOp("RZ", target=1, angle=p[3]),
            GateOp("RY", target=1, angle=p[4]),
            GateOp("RZ", target=1, angle=p[5]),
            GateOp("CNOT", target=1, control=0),
        ]
    return gates


def apply_ansatz(state: StateVector, model: VqcModel) -> StateVector:
    """Apply the depth-L entangling ansatz to a 2-qubit state."""
    if state.n_qubits != 2:
        raise ValueError("ansatz is defined on 2-qubit states")
    return qsim.apply_circuit(state, ansatz_gates(model))


def _sample_scores(m: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    p0 = np.clip((1.0 + m) / 2.0, 0.0, 1.0)
    n0 = rng.binomial(int(shots), p0)
    return 2.0 * n0 / shots - 1.0


def scores_batch(
    model: VqcModel, points: np.ndarray, rng: Optional[SeedLike] = None
) -> np.ndarray:
    """f(x) = <Z0> for each point; sampled when the model uses finite shots."""
    m = kernels.circuit_scores(points, model.params)
    if model.shots == ANALYTIC:
        return m
    if rng is None:
        raise ValueError("finite-shot scoring requires an rng")
    return _sample_scores(m, int(model.shots), make_rng(rng))


def vqc_score(model: VqcModel, x, rng: Optional[SeedLike] = None) -> float:
    """Score of one point (equals expectation_z(apply_ansatz(encode(x)), 0))."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise ValueError(f"expected a 2-d point, got shape {x.shape}")
    return float(scores_batch(model, x[None, :], rng)[0])


def vqc_probability(m) -> Union[float, np.ndarray]:
    """p = (1 + m) / 2 with validation that m lies in [-1 - 1e-9, 1 + 1e-9]."""
    arr = np.asarray(m, dtype=float)
    if np.any(np.abs(arr) > 1.0 + 1e-9):
        raise ValueError("score outside [-1, 1] beyond tolerance")
    p = (1.0 + np.clip(arr, -1.0, 1.0)) / 2.0
    return float(p) if arr.ndim == 0 else p


def bce_loss(probabilities, labels) -> float:
    """Mean binary cross-entropy with probabilities clipped to [eps, 1-eps]."""
    p = np.asarray(probabilities, dtype=float)
    y = np.asarray(labels, dtype=float)
    if p.size == 0 or p.shape != y.shape:
        raise ValueError("probabilities and labels must be equal-length and nonempty")
    p = np.clip(p, BCE_EPS, 1.0 - BCE_EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def _loss_grad_from_scores(m: np.ndarray, y: np.ndarray) -> np.ndarray:
    """dL/dm per point, through p = (1 + m)/2 and the clipped BCE."""
    p = np.clip((1.0 + m) / 2.0, BCE_EPS, 1.0 - BCE_EPS)
    dLdp = -(y / p - (1.0 - y) / (1.0 - p)) / len(y)
    return dLdp * 0.5


def _gradient_arrays(
    params: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    shots: ShotCount,
    rng: Optional[np.random.Generator],
    analytic_gradients: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Parameter-shift gradient; returns (grad, base scores)."""
    rows = kernels.circuit_scores_shifted(X, params)
    if shots != ANALYTIC and not analytic_gradients:
        if rng is None:
            raise ValueError("shot-based gradients require an rng")
        sampled = np.empty_like(rows)
        for i in range(rows.shape[0]):  # fixed draw order: base, +0, -0, +1, ...
            sampled[i] = _sample_scores(rows[i], int(shots), rng)
        rows = sampled
    base = rows[0]
    dLdm = _loss_grad_from_scores(base, y)
    n_params = params.shape[0]
    grad = np.empty(n_params)
    for k in range(n_params):
        dm = (rows[1 + 2 * k] - rows[2 + 2 * k]) / 2.0
        grad[k] = float(np.sum(dLdm * dm))
    return grad, base


def vqc_gradient(
    model: VqcModel, batch: LabeledDataset, rng: Optional[SeedLike] = None
) -> np.ndarray:
    """dL/dtheta over a labeled batch (length 6 * depth)."""
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    grad, _ = _gradient_arrays(
        model.params, batch.points, batch.labels.astype(float),
        model.shots, make_rng(rng) if rng is not None else None,
    )
    return grad


def _metrics(m: np.ndarray, labels: np.ndarray) -> Tuple[float, float]:
    p = vqc_probability(m)
    acc = float(np.mean((p > 0.5).astype(np.int64) == labels))
    return bce_loss(p, labels.astype(float)), acc


def train_vqc(
    config: VqcTrainConfig,
    model0: VqcModel,
    train: LabeledDataset,
    test: LabeledDataset,
    run_id: str = "",
) -> Tuple[VqcModel, LearningCurves, RunRecord]:
    """Full-batch training with Adam (beta1=0.9, beta2=0.999, eps=1e-8) or GD."""
    if len(train) == 0 or len(test) == 0:
        raise ValueError("train and test datasets must be nonempty")
    seed = model0.seed if model0.seed is not None else (config.init_seed or 0)
    params = model0.params.copy()
    shots = model0.shots
    rng_train = make_rng([seed, 1])
    rng_eval = make_rng([seed, 2])
    X, y = train.points, train.labels.astype(float)

    def evaluate(prm: np.ndarray, ds: LabeledDataset) -> Tuple[float, float]:
        m = kernels.circuit_scores(ds.points, prm)
        if shots != ANALYTIC:
            m = _sample_scores(m, int(shots), rng_eval)
        return _metrics(m, ds.labels)

    moment = np.zeros_like(params)
    velocity = np.zeros_like(params)
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    curves = LearningCurves(*(np.empty(config.epochs) for _ in range(4)))

    t0 = time.perf_counter()
    for epoch in range(1, config.epochs + 1):
        grad, base = _gradient_arrays(
            params, X, y, shots, rng_train, config.analytic_gradients
        )
        if config.optimizer == ADAM:
            moment = beta1 * moment + (1.0 - beta1) * grad
            velocity = beta2 * velocity + (1.0 - beta2) * grad * grad
            m_hat = moment / (1.0 - beta1**epoch)
            v_hat = velocity / (1.0 - beta2**epoch)
            params = params - config.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
        else:
            params = params - config.learning_rate * grad
        tr_bce, tr_acc = evaluate(params, train)
        te_bce, te_acc = evaluate(params, test)
        if not np.isfinite(tr_bce):
            raise TrainingDiverged(epoch)
        curves.train_bce[epoch - 1] = tr_bce
        curves.test_bce[epoch - 1] = te_bce
        curves.train_acc[epoch - 1] = tr_acc
        curves.test_acc[epoch - 1] = te_acc
    elapsed = time.perf_counter() - t0

    model = VqcModel(model0.depth, params, shots=shots, seed=model0.seed)
    if config.epochs > 0:
        tr_bce, tr_acc = curves.train_bce[-1], curves.train_acc[-1]
        te_bce, te_acc = curves.test_bce[-1], curves.test_acc[-1]
    else:
        tr_bce, tr_acc = evaluate(params, train)
        te_bce, te_acc = evaluate(params, test)

    prov = train.provenance
    record = RunRecord(
        run_id=run_id or f"VQC-L{model.depth}-s{seed}",
        model="VQC", variant=prov.variant, sigma=prov.sigma,
        n_per_cluster=prov.n_per_cluster, threshold_t=prov.threshold_t,
        seed=seed, depth_L=model.depth, hidden_h=None, shots=shots,
        lr=config.learning_rate, epochs=config.epochs, n_params=model.n_params(),
        train_acc=float(tr_acc), test_acc=float(te_acc),
        train_bce=float(tr_bce), test_bce=float(te_bce),
        train_time_s=elapsed,
    )
    return model, curves, record


def save_checkpoint(model: VqcModel, path: Union[str, Path]) -> None:
    """JSON checkpoint: {depth_L, params, shots, seed}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "depth_L": model.depth,
        "params": model.params.tolist(),
        "shots": model.shots,
        "seed": model.seed,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_checkpoint(path: Union[str, Path]) -> VqcModel:
    with open(path) as fh:
        payload = json.load(fh)
    return VqcModel(
        int(payload["depth_L"]), np.array(payload["params"], dtype=float),
        shots=payload.get("shots", ANALYTIC), seed=payload.get("seed"),
    )
