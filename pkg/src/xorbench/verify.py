"""Fast self-check suite behind the ``xorbench verify`` subcommand.

Each check is a named function returning (passed, detail). The suite is
deterministic (fixed internal seeds) and finishes in a few seconds.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Tuple

import numpy as np

from . import classical, kernels, qsim, vqc
from .bench import check_linear_separability
from .data import gen_dataset_a, gen_dataset_b, gen_dataset_c
from .qsim import GateOp
from .rngs import make_rng


def check_gate_unitarity() -> Tuple[bool, str]:
    """Every gate matrix U satisfies max|U U+ - I| < 1e-12."""
    worst = 0.0
    angles = [0.0, 0.3, np.pi / 2, 1.0, np.pi, 4.5, -2.2]
    for kind in qsim.ROTATION_KINDS:
        for angle in angles:
            u = qsim.rotation_matrix(kind, angle)
            worst = max(worst, float(np.max(np.abs(u @ u.conj().T - np.eye(2)))))
    u = qsim.cnot_matrix()
    worst = max(worst, float(np.max(np.abs(u @ u.conj().T - np.eye(4)))))
    return worst < 1e-12, f"max |UU+ - I| = {worst:.3e}"


def _random_circuit(rng, n_qubits: int, length: int):
    gates = []
    for _ in range(length):
        kind = qsim.GATE_KINDS[rng.integers(0, len(qsim.GATE_KINDS))]
        if kind == "CNOT" and n_qubits >= 2:
            control, target = rng.choice(n_qubits, size=2, replace=False)
            gates.append(GateOp("CNOT", target=int(target), control=int(control)))
        elif kind != "CNOT":
            gates.append(GateOp(kind, target=int(rng.integers(0, n_qubits)),
                                angle=float(rng.uniform(-2 * np.pi, 2 * np.pi))))
    return gates


def check_norm_preservation() -> Tuple[bool, str]:
    """Random circuits of length <= 50 on <= 4 qubits keep norm within 1e-8."""
    rng = make_rng(123)
    worst = 0.0
    for n_qubits in (1, 2, 3, 4):
        for _ in range(5):
            state = qsim.init_zero_state(n_qubits)
            state = qsim.apply_circuit(state, _random_circuit(rng, n_qubits, 50))
            worst = max(worst, abs(state.norm() - 1.0))
    return worst < 1e-8, f"max |norm - 1| = {worst:.3e}"


def check_cnot_involution() -> Tuple[bool, str]:
    """CNOT applied twice recovers the state within 1e-12."""
    rng = make_rng(7)
    worst = 0.0
    for _ in range(5):
        state = qsim.init_zero_state(2)
        state = qsim.apply_circuit(state, _random_circuit(rng, 2, 12))
        gate = GateOp("CNOT", target=1, control=0)
        back = qsim.apply_gate(qsim.apply_gate(state, gate), gate)
        worst = max(worst, float(np.max(np.abs(back.amplitudes - state.amplitudes))))
    return worst < 1e-12, f"max amplitude diff = {worst:.3e}"


def check_born_consistency() -> Tuple[bool, str]:
    """Shot-estimator standard error scales like 1/sqrt(shots) within 2x."""
    state = qsim.apply_gate(
        qsim.init_zero_state(1), GateOp("RX", target=0, angle=np.pi / 2)
    )  # <Z> = 0, per-shot std = 1
    ratios = []
    for k in (6, 10, 14):
        shots = 2**k
        estimates = [
            qsim.sample_expectation_z(state, 0, shots, [seed, k]) for seed in range(100)
        ]
        se = float(np.std(estimates, ddof=1))
        ratios.append(se * np.sqrt(shots))
    ok = all(0.5 < r < 2.0 for r in ratios)
    return ok, "SE * sqrt(shots) = " + ", ".join(f"{r:.3f}" for r in ratios)


def check_parameter_shift() -> Tuple[bool, str]:
    """Parameter-shift gradients match central differences within 1e-5."""
    rng = make_rng(2024)
    worst = 0.0
    for depth in (1, 2):
        for _ in range(3):
            model = vqc.init_model(depth, int(rng.integers(0, 10_000)))
            ds = gen_dataset_b(0.1, 3, int(rng.integers(0, 10_000)))
            grad = vqc.vqc_gradient(model, ds)
            for k in range(model.n_params()):
                h = 1e-5
                up = model.params.copy(); up[k] += h
                dn = model.params.copy(); dn[k] -= h
                y = ds.labels.astype(float)
                loss_up = vqc.bce_loss((1 + kernels.circuit_scores(ds.points, up)) / 2, y)
                loss_dn = vqc.bce_loss((1 + kernels.circuit_scores(ds.points, dn)) / 2, y)
                fd = (loss_up - loss_dn) / (2 * h)
                worst = max(worst, abs(fd - grad[k]))
    return worst < 1e-5, f"max |ps - fd| = {worst:.3e}"


def check_backprop() -> Tuple[bool, str]:
    """Classical backprop gradients match central differences within 1e-6."""
    rng = make_rng(99)
    ds = gen_dataset_b(0.1, 4, 5)
    X, y = ds.points, ds.labels.astype(float)
    worst = 0.0
    for _ in range(3):
        model = classical.init_mlp(3, int(rng.integers(0, 10_000)))
        dW1, db1, dW2, db2 = classical.gradient(model, X, y)
        h = 1e-5
        flat = [(model.W1, dW1), (model.b1, db1), (model.W2, dW2)]
        for arr, grad in flat:
            it = np.nditer(arr, flags=["multi_index"])
            for _v in it:
                idx = it.multi_index
                old = arr[idx]
                arr[idx] = old + h
                up = vqc.bce_loss(classical.mlp_predict(model, X), y)
                arr[idx] = old - h
                dn = vqc.bce_loss(classical.mlp_predict(model, X), y)
                arr[idx] = old
                worst = max(worst, abs((up - dn) / (2 * h) - np.asarray(grad)[idx]))
    return worst < 1e-6, f"max |bp - fd| = {worst:.3e}"


def check_separability_oracle() -> Tuple[bool, str]:
    """XOR corners inseparable; random linear labelings separable."""
    ds = gen_dataset_a()
    if check_linear_separability(ds.points, ds.labels).separable:
        return False, "XOR corners reported separable"
    rng = make_rng(31)
    for _ in range(10):
        pts = rng.uniform(-1, 1, (8, 2))
        w = rng.normal(size=2)
        scores = pts @ w
        b = -float(np.median(scores))
        labels = (scores + b > 0).astype(int)
        if labels.min() == labels.max():
            continue
        res = check_linear_separability(pts, labels)
        if not res.separable:
            return False, "linearly generated labeling reported inseparable"
        margin_ok = (
            np.min(pts[labels == 1] @ res.w + res.b) > 0
            and np.max(pts[labels == 0] @ res.w + res.b) < 0
        )
        if not margin_ok:
            return False, "returned certificate does not separate"
    return True, "XOR inseparable; 10 random linear labelings separable with certificates"


def check_dataset_determinism() -> Tuple[bool, str]:
    """Generators return identical datasets for identical arguments."""
    for maker in (
        lambda: gen_dataset_b(0.1, 20, 42),
        lambda: gen_dataset_c(50, 0.5, 42),
    ):
        a, b = maker(), maker()
        if not (np.array_equal(a.points, b.points) and np.array_equal(a.labels, b.labels)):
            return False, "regeneration mismatch"
    return True, "generators deterministic"


CHECKS: Dict[str, Callable[[], Tuple[bool, str]]] = {
    "gate-unitarity": check_gate_unitarity,
    "norm-preservation": check_norm_preservation,
    "cnot-involution": check_cnot_involution,
    "born-consistency": check_born_consistency,
    "gradient-parameter-shift": check_parameter_shift,
    "gradient-backprop": check_backprop,
    "separability-oracle": check_separability_oracle,
    "dataset-determinism": check_dataset_determinism,
}


def run_verification() -> List[Tuple[str, bool, str]]:
    results = []
    for name, fn in CHECKS.items():
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, passed, detail))
    return results
