"""Dense statevector simulation of small qubit registers.

Conventions (load-bearing, do not change silently):

- Qubit ordering: qubit 0 is the MOST significant bit of the basis index.
  For two qubits the amplitude vector is ordered |00>, |01>, |10>, |11>,
  so CNOT(control=0, target=1) maps |10> -> |11> (index 2 <-> 3).
- Rotation gates use the half-angle convention
      RX(t) = exp(-i t X / 2),  RY(t) = exp(-i t Y / 2),  RZ(t) = exp(-i t Z / 2).
- Global phase is neither tracked nor normalised away; every observable
  exposed here is phase-invariant.
- Finite-shot estimation of <Z> draws a single binomial count per estimate
  (statistically identical to a per-shot loop, much faster): with
  p0 = (1 + <Z>)/2, draw n0 ~ Binomial(shots, p0) and return (2 n0 - shots)/shots.

States are immutable from the caller's point of view: operations always
return freshly allocated statevectors. Distinct circuits may be simulated
concurrently as long as each uses its own generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .rngs import SeedLike, make_rng

#: Sentinel for shot-free (exact) expectation values.
ANALYTIC = "analytic"

ShotCount = Union[int, str]

MAX_QUBITS = 10


def _rx(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(angle: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * angle), 0.0], [0.0, np.exp(0.5j * angle)]], dtype=complex
    )


# Registry is module-level so verification code (and fault-injection tests)
# can inspect or replace individual builders.
ROTATION_BUILDERS = {"RX": _rx, "RY": _ry, "RZ": _rz}

ROTATION_KINDS = ("RX", "RY", "RZ")
GATE_KINDS = ROTATION_KINDS + ("CNOT",)


def rotation_matrix(kind: str, angle: float) -> np.ndarray:
    """2x2 unitary for a rotation gate in the half-angle convention."""
    try:
        builder = ROTATION_BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown rotation kind {kind!r}") from None
    return builder(angle)


def cnot_matrix() -> np.ndarray:
    """4x4 CNOT with the control on the more significant qubit."""
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


@dataclass(frozen=True)
class StateVector:
    """Normalised amplitudes over the 2**n_qubits computational basis."""

    n_qubits: int
    amplitudes: np.ndarray  # shape (2**n_qubits,), complex128; treat as read-only

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class GateOp:
    """One gate application: a rotation on ``target`` or a CNOT."""

    kind: str
    target: int
    control: Optional[int] = None  # CNOT only
    angle: Optional[float] = None  # rotations only


@dataclass(frozen=True)
class MeasurementSpec:
    """Pauli-Z observable on one qubit, estimated analytically or from shots."""

    qubit: int
    shots: ShotCount = ANALYTIC

    def __post_init__(self) -> None:
        if self.shots != ANALYTIC:
            if not isinstance(self.shots, (int, np.integer)) or self.shots < 1:
                raise ValueError(f"shots must be {ANALYTIC!r} or an integer >= 1, got {self.shots!r}")


def init_zero_state(n_qubits: int) -> StateVector:
    """|0...0> on ``n_qubits`` qubits (1 <= n_qubits <= 10)."""
    if not isinstance(n_qubits, (int, np.integer)) or not (1 <= n_qubits <= MAX_QUBITS):
        raise ValueError(f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n_qubits!r}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(int(n_qubits), amps)


def _check_qubit(state: StateVector, qubit: int, what: str = "qubit") -> None:
    if not isinstance(qubit, (int, np.integer)) or not (0 <= qubit < state.n_qubits):
        raise ValueError(f"{what} index {qubit!r} out of range for {state.n_qubits} qubit(s)")


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply one gate and return the resulting state (input untouched)."""
    n = state.n_qubits
    _check_qubit(state, gate.target, "target")
    tensor = state.amplitudes.reshape([2] * n)

    if gate.kind in ROTATION_KINDS:
        if gate.angle is None:
            raise ValueError(f"{gate.kind} requires an angle")
        u = rotation_matrix(gate.kind, gate.angle)
        # Contract the 2x2 unitary into the target axis.
        moved = np.moveaxis(tensor, gate.target, -1)
        moved = moved @ u.T
        out = np.moveaxis(moved, -1, gate.target)
    elif gate.kind == "CNOT":
        if gate.control is None:
            raise ValueError("CNOT requires a control qubit")
        _check_qubit(state, gate.control, "control")
        if gate.control == gate.target:
            raise ValueError("control and target must be distinct")
        out = tensor.copy()
        sel10 = [slice(None)] * n
        sel10[gate.control], sel10[gate.target] = 1, 0
        sel11 = [slice(None)] * n
        sel11[gate.control], sel11[gate.target] = 1, 1
        # Swap the two control=1 slabs; read from the untouched input tensor.
        out[tuple(sel10)] = tensor[tuple(sel11)]
        out[tuple(sel11)] = tensor[tuple(sel10)]
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")

    new = StateVector(n, np.ascontiguousarray(out.reshape(-1)))
    assert abs(new.norm() - 1.0) < 1e-10, "statevector norm drifted"
    return new


def apply_circuit(state: StateVector, gates) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def expectation_z(state: StateVector, qubit: int) -> float:
    """Exact <Z_qubit>: +1 weight where the qubit's bit is 0, -1 where it is 1."""
    _check_qubit(state, qubit)
    probs = np.abs(state.amplitudes.reshape([2] * state.n_qubits)) ** 2
    axes = tuple(i for i in range(state.n_qubits) if i != qubit)
    marginal = probs.sum(axis=axes)
    return float(marginal[0] - marginal[1])


def sample_expectation_z(
    state: StateVector, qubit: int, shots: int, rng: SeedLike
) -> float:
    """Finite-shot estimate of <Z_qubit> from ``shots`` Born-rule samples.

    Uses one binomial count (see module docstring); deterministic for a
    given generator state.
    """
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots!r}")
    p0 = (1.0 + expectation_z(state, qubit)) / 2.0
    p0 = min(max(p0, 0.0), 1.0)
    n0 = int(make_rng(rng).binomial(int(shots), p0))
    return (2.0 * n0 - shots) / shots


def measure_expectation(
    state: StateVector, spec: MeasurementSpec, rng: Optional[SeedLike] = None
) -> float:
    """Dispatch on ``spec.shots``: exact value or sampled estimate."""
    if spec.shots == ANALYTIC:
        return expectation_z(state, spec.qubit)
    if rng is None:
        raise ValueError("finite-shot measurement requires an rng")
    return sample_expectation_z(state, spec.qubit, int(spec.shots), rng)
