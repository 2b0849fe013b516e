import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from xorbench import kernels, qsim, vqc
from xorbench.data import LabeledDataset, Provenance, gen_dataset_a, gen_dataset_b
from xorbench.records import TrainingDiverged


def _dataset(points, labels):
    return LabeledDataset(np.asarray(points, dtype=float),
                          np.asarray(labels, dtype=np.int64),
                          Provenance(variant="A"))


# --- encoding ---------------------------------------------------------------

def test_encode_origin_is_identity():
    state = vqc.encode_features((0.0, 0.0))
    assert np.allclose(state.amplitudes, [1, 0, 0, 0], atol=1e-12)


def test_encode_flips_first_qubit():
    state = vqc.encode_features((1.0, 0.0))
    assert qsim.expectation_z(state, 0) == pytest.approx(-1.0)
    assert qsim.expectation_z(state, 1) == pytest.approx(1.0)


def test_encode_half_point_balances_both_qubits():
    state = vqc.encode_features((0.5, 0.5))
    assert qsim.expectation_z(state, 0) == pytest.approx(0.0, abs=1e-12)
    assert qsim.expectation_z(state, 1) == pytest.approx(0.0, abs=1e-12)


def test_encode_rejects_nonfinite():
    with pytest.raises(ValueError):
        vqc.encode_features((np.inf, 0.0))


# --- ansatz ------------------------------------------------------------------

def test_zero_params_fix_origin_state():
    model = vqc.VqcModel(1, np.zeros(6))
    state = vqc.apply_ansatz(qsim.init_zero_state(2), model)
    assert np.allclose(state.amplitudes, [1, 0, 0, 0], atol=1e-12)


def test_ry_pi_layer_reaches_11():
    model = vqc.VqcModel(1, np.array([0.0, np.pi, 0.0, 0.0, 0.0, 0.0]))
    state = vqc.apply_ansatz(qsim.init_zero_state(2), model)
    assert np.abs(state.amplitudes[3]) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert qsim.expectation_z(state, 0) == pytest.approx(-1.0)


def test_random_ansatz_preserves_norm(rng):
    model = vqc.VqcModel(2, rng.uniform(-np.pi, np.pi, 12))
    state = vqc.apply_ansatz(qsim.init_zero_state(2), model)
    assert abs(state.norm() - 1.0) < 1e-10


def test_params_length_validated():
    with pytest.raises(ValueError):
        vqc.VqcModel(2, np.zeros(6))


# --- scoring and probability --------------------------------------------------

def test_score_trivial_cases():
    model = vqc.VqcModel(1, np.zeros(6))
    assert vqc.vqc_score(model, (0.0, 0.0)) == pytest.approx(1.0)
    assert vqc.vqc_score(model, (1.0, 0.0)) == pytest.approx(-1.0)


def test_score_matches_dense_matrix_oracle():
    """Brute-force oracle: explicit 4x4 kron chain, qubit 0 = MSB."""
    params = np.random.default_rng(0).uniform(-np.pi, np.pi, 12)
    model = vqc.VqcModel(2, params)
    x = np.array([0.3, 0.7])

    def rx(t):
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])

    def ry(t):
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -s], [s, c]])

    def rz(t):
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])

    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    u = np.kron(rx(np.pi * x[0]), rx(np.pi * x[1]))
    for layer in range(2):
        p = params[6 * layer : 6 * layer + 6]
        block0 = rz(p[2]) @ ry(p[1]) @ rz(p[0])
        block1 = rz(p[5]) @ ry(p[4]) @ rz(p[3])
        u = cnot @ np.kron(block0, block1) @ u
    psi = u @ np.array([1, 0, 0, 0], dtype=complex)
    z0 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    oracle = float(np.real(psi.conj() @ (z0 @ psi)))
    assert vqc.vqc_score(model, x) == pytest.approx(oracle, abs=1e-10)


def test_probability_endpoints():
    assert vqc.vqc_probability(1.0) == 1.0
    assert vqc.vqc_probability(-1.0) == 0.0
    assert vqc.vqc_probability(0.0) == 0.5
    assert vqc.vqc_probability(1.0 + 5e-10) == 1.0  # tiny overshoot clamped
    with pytest.raises(ValueError):
        vqc.vqc_probability(1.1)


@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=-1.0, max_value=1.0))
def test_probability_range_and_monotonicity(m1, m2):
    p1, p2 = vqc.vqc_probability(m1), vqc.vqc_probability(m2)
    assert 0.0 <= p1 <= 1.0
    if m1 < m2:
        assert p1 <= p2


def test_bce_examples():
    assert vqc.bce_loss([1.0], [1]) == pytest.approx(0.0, abs=1e-11)
    assert vqc.bce_loss([0.5, 0.5], [0, 1]) == pytest.approx(math.log(2), abs=1e-12)
    expected = -(math.log(0.9) + math.log(0.8)) / 2  # direct arithmetic oracle
    assert vqc.bce_loss([0.9, 0.2], [1, 0]) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.164252, abs=1e-6)
    with pytest.raises(ValueError):
        vqc.bce_loss([], [])


# --- gradients -----------------------------------------------------------------

def _fd_gradient(params, X, y, h=1e-5):
    grad = np.zeros_like(params)
    for k in range(len(params)):
        up = params.copy(); up[k] += h
        dn = params.copy(); dn[k] -= h
        lu = vqc.bce_loss((1 + kernels.circuit_scores(X, up)) / 2, y)
        ld = vqc.bce_loss((1 + kernels.circuit_scores(X, dn)) / 2, y)
        grad[k] = (lu - ld) / (2 * h)
    return grad


@pytest.mark.parametrize("depth", [1, 2])
def test_parameter_shift_matches_finite_differences(depth, rng):
    for _ in range(20):
        model = vqc.init_model(depth, int(rng.integers(1_000_000)))
        X = rng.uniform(-0.2, 1.2, (5, 2))
        y = rng.integers(0, 2, 5)
        ds = _dataset(X, y)
        grad = vqc.vqc_gradient(model, ds)
        fd = _fd_gradient(model.params, X, y.astype(float))
        assert np.max(np.abs(grad - fd)) < 1e-5


def test_gradient_zero_params_single_point():
    model = vqc.VqcModel(1, np.zeros(6))
    ds = _dataset([(0.0, 0.0)], [0])
    grad = vqc.vqc_gradient(model, ds)
    assert np.all(np.isfinite(grad))
    fd = _fd_gradient(model.params, ds.points, ds.labels.astype(float))
    assert np.max(np.abs(grad - fd)) < 1e-6


def test_gradient_mean_over_duplicates(rng):
    model = vqc.init_model(2, 5)
    x = rng.uniform(0, 1, (1, 2))
    single = _dataset(x, [1])
    double = _dataset(np.vstack([x, x]), [1, 1])
    assert np.allclose(vqc.vqc_gradient(model, single), vqc.vqc_gradient(model, double), atol=1e-14)


def test_gradient_nonzero_on_dataset_a():
    model = vqc.init_model(2, 0)
    ds = gen_dataset_a()
    grad = vqc.vqc_gradient(model, ds)
    fd = _fd_gradient(model.params, ds.points, ds.labels.astype(float))
    assert np.linalg.norm(grad) > 1e-3
    assert np.linalg.norm(fd) > 1e-3


def test_gradient_rejects_empty_batch():
    model = vqc.init_model(1, 0)
    with pytest.raises(ValueError):
        vqc.vqc_gradient(model, _dataset(np.empty((0, 2)), np.empty(0, dtype=int)))


def test_score_two_pi_periodic(rng):
    model = vqc.init_model(2, 9)
    x = np.array([0.42, 0.13])
    base = vqc.vqc_score(model, x)
    for k in range(model.n_params()):
        shifted = model.params.copy()
        shifted[k] += 2 * np.pi
        assert vqc.vqc_score(vqc.VqcModel(2, shifted), x) == pytest.approx(base, abs=1e-10)


# --- training -------------------------------------------------------------------

def test_zero_epochs_returns_initial_model():
    train = gen_dataset_b(0.1, 5, 3)
    model0 = vqc.init_model(1, 7)
    cfg = vqc.VqcTrainConfig(epochs=0)
    model, curves, record = vqc.train_vqc(cfg, model0, train, train)
    assert np.array_equal(model.params, model0.params)
    assert len(curves) == 0
    assert record.n_params == 6


def test_training_deterministic_given_seeds():
    train = gen_dataset_b(0.1, 10, 3)
    cfg = vqc.VqcTrainConfig(epochs=15)
    out = []
    for _ in range(2):
        model0 = vqc.init_model(2, 4, shots=128)
        model, curves, record = vqc.train_vqc(cfg, model0, train, train)
        out.append((model.params.copy(), curves.train_bce.copy(), record.test_acc))
    assert np.array_equal(out[0][0], out[1][0])
    assert np.array_equal(out[0][1], out[1][1])
    assert out[0][2] == out[1][2]


def test_training_gd_optimizer_runs():
    train = gen_dataset_b(0.1, 5, 3)
    cfg = vqc.VqcTrainConfig(optimizer=vqc.GD, epochs=5, learning_rate=0.3)
    model0 = vqc.init_model(1, 1)
    model, curves, _ = vqc.train_vqc(cfg, model0, train, train)
    assert not np.array_equal(model.params, model0.params)
    assert len(curves) == 5


def test_training_divergence_reports_epoch(monkeypatch):
    train = gen_dataset_b(0.1, 5, 3)
    calls = {"n": 0}
    real = vqc.bce_loss

    def poisoned(p, y):
        calls["n"] += 1
        return float("nan") if calls["n"] >= 5 else real(p, y)

    monkeypatch.setattr(vqc, "bce_loss", poisoned)
    with pytest.raises(TrainingDiverged) as excinfo:
        vqc.train_vqc(vqc.VqcTrainConfig(epochs=50), vqc.init_model(1, 0), train, train)
    assert 1 <= excinfo.value.epoch <= 50


def test_checkpoint_roundtrip(tmp_path):
    model = vqc.init_model(2, 11, shots=1024)
    path = tmp_path / "m.json"
    vqc.save_checkpoint(model, path)
    loaded = vqc.load_checkpoint(path)
    assert loaded.depth == 2
    assert loaded.shots == 1024
    assert loaded.seed == 11
    assert np.array_equal(loaded.params, model.params)


def test_param_count_is_6L():
    for depth in (1, 2, 5):
        assert vqc.init_model(depth, 0).n_params() == 6 * depth
