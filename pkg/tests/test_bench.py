import itertools

import numpy as np
import pytest

from xorbench import bench, classical, vqc
from xorbench.bench import (
    DecisionGrid, ModelSpec, SweepCell, check_linear_separability, decision_grid,
    grid_deviation, loss_landscape_slice, make_scorer, run_cells, sweep_noise,
    synthetic_degradation,
)
from xorbench.data import benchmark_splits, gen_dataset_a
from xorbench.records import TrainingDiverged


def test_accuracy_examples():
    assert bench.accuracy([0, 1, 1, 0], [0, 1, 1, 0]) == 1.0
    assert bench.accuracy([0, 0, 0, 0], [0, 1, 1, 0]) == 0.5
    assert bench.accuracy([1, 1, 1], [0, 1, 1]) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        bench.accuracy([], [])


# --- separability -----------------------------------------------------------

def test_xor_corners_inseparable():
    ds = gen_dataset_a()
    assert not check_linear_separability(ds.points, ds.labels).separable


def test_two_point_separable_with_certificate():
    res = check_linear_separability([(0, 0), (1, 1)], [0, 1])
    assert res.separable
    w, b = res.w, res.b
    assert np.dot(w, (0, 0)) + b < 0
    assert np.dot(w, (1, 1)) + b > 0


def test_all_sixteen_corner_labelings():
    ds = gen_dataset_a()
    xor = (0, 1, 1, 0)
    xnor = (1, 0, 0, 1)
    for labeling in itertools.product([0, 1], repeat=4):
        if len(set(labeling)) == 1:
            with pytest.raises(ValueError):
                check_linear_separability(ds.points, list(labeling))
            continue
        result = check_linear_separability(ds.points, list(labeling))
        assert result.separable == (labeling not in (xor, xnor))


def test_random_linear_labelings_separable(rng):
    for _ in range(20):
        pts = rng.uniform(-1, 1, (10, 2))
        w_true = rng.normal(size=2)
        scores = pts @ w_true
        b_true = -float(np.median(scores))
        labels = (scores + b_true > 0).astype(int)
        if labels.min() == labels.max():
            continue
        res = check_linear_separability(pts, labels)
        assert res.separable
        margins = pts @ res.w + res.b
        assert np.all(margins[labels == 1] > 0) and np.all(margins[labels == 0] < 0)


def _angular_scan_separable(pts, labels, n_dirs=10_000):
    """Independent exhaustive check: dense scan of directions."""
    angles = np.pi * np.arange(n_dirs) / n_dirs
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    proj = pts @ dirs.T  # (n_points, n_dirs)
    p0 = proj[labels == 0]
    p1 = proj[labels == 1]
    lo = p0.max(axis=0) < p1.min(axis=0)
    hi = p1.max(axis=0) < p0.min(axis=0)
    return bool(np.any(lo | hi))


def test_oracle_agrees_with_angular_scan(rng):
    checked = 0
    while checked < 100:
        pts = rng.uniform(-1, 1, (8, 2))
        labels = rng.integers(0, 2, 8)
        if labels.min() == labels.max():
            continue
        checked += 1
        exact = check_linear_separability(pts, labels).separable
        scan = _angular_scan_separable(pts, labels)
        assert exact == scan


# --- decision grids -----------------------------------------------------------

def test_grid_constant_for_flat_linear_model():
    model = classical.LinearModel(np.zeros(2), 0.0)
    grid = decision_grid(make_scorer(model), resolution=(8, 8))
    assert np.all(grid.scores == 0.0)


def test_grid_resolution_validation():
    model = classical.LinearModel(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        decision_grid(make_scorer(model), resolution=(1, 8))


def test_grid_cell_centers_cover_region():
    model = classical.LinearModel(np.ones(2), 0.0)
    grid = decision_grid(make_scorer(model), region=((0, 1), (0, 2)), resolution=(4, 8))
    xs, ys = grid.cell_centers()
    assert xs[0] == pytest.approx(0.125) and xs[-1] == pytest.approx(0.875)
    assert ys[0] == pytest.approx(0.125) and ys[-1] == pytest.approx(1.875)


def test_mlp_grid_sign_pattern_on_corners():
    ds = gen_dataset_a()
    cfg = classical.ClassicalTrainConfig(classical.DEFAULT_MLP_LEARNING_RATE, 4000)
    model, _, record = classical.train_classical(classical.init_mlp(4, 0), ds, ds, cfg)
    assert record.train_acc == 1.0  # precondition for the sign pattern
    score = make_scorer(model)
    signs = np.sign(score(ds.points))
    assert signs.tolist() == [-1, 1, 1, -1]


def test_vqc_analytic_vs_shots_grid_close(rng):
    model = vqc.init_model(2, 3)
    exact = decision_grid(make_scorer(model), resolution=(10, 10))
    sampled = decision_grid(make_scorer(model, shots=4096, rng=17), resolution=(10, 10))
    assert float(np.mean(np.abs(exact.scores - sampled.scores))) < 0.05


def test_shot_grid_deterministic_given_seed():
    model = vqc.init_model(1, 5)
    g1 = decision_grid(make_scorer(model, shots=256, rng=21), resolution=(6, 6))
    g2 = decision_grid(make_scorer(model, shots=256, rng=21), resolution=(6, 6))
    assert np.array_equal(g1.scores, g2.scores)


# --- deviation ------------------------------------------------------------------

def _const_grid(value, res=(5, 5)):
    return DecisionGrid((-1, 1), (-1, 1), res, np.full((res[1], res[0]), float(value)))


def test_deviation_identical_grids_zero():
    g = _const_grid(0.3)
    report = grid_deviation(g, g)
    assert report.mad == 0.0 and report.mse == 0.0


def test_deviation_constant_grids():
    report = grid_deviation(_const_grid(1.0), _const_grid(-1.0))
    assert report.mad == 2.0 and report.mse == 4.0


def test_deviation_requires_alignment():
    with pytest.raises(ValueError):
        grid_deviation(_const_grid(0, (5, 5)), _const_grid(0, (6, 5)))


def test_deviation_metric_properties(rng):
    shape = (4, 4)
    mk = lambda: DecisionGrid((-1, 1), (-1, 1), shape, rng.uniform(-1, 1, (4, 4)))
    a, b, c = mk(), mk(), mk()
    assert grid_deviation(a, b).mad == grid_deviation(b, a).mad
    assert grid_deviation(a, a).mad == 0.0
    assert grid_deviation(a, c).mad <= grid_deviation(a, b).mad + grid_deviation(b, c).mad + 1e-15


def test_deviation_histograms_count_all_cells():
    g = _const_grid(0.999, (5, 5))
    report = grid_deviation(g, _const_grid(-0.999, (5, 5)))
    assert report.hist_a.sum() == 25 and report.hist_b.sum() == 25
    assert report.hist_a[-1] == 25 and report.hist_b[0] == 25


def test_synthetic_degradation_identity_and_collapse():
    g = _const_grid(0.5)
    same = synthetic_degradation(g, 1.0, 0.0)
    assert np.array_equal(same.scores, g.scores)
    collapsed = synthetic_degradation(g, 0.0, 2.0)
    assert np.all(collapsed.scores == 1.0)  # clamp(bias)


def test_synthetic_degradation_contracts_saturated_grid(rng):
    scores = np.where(rng.random((6, 6)) > 0.5, 1.0, -1.0)
    g = DecisionGrid((-1, 1), (-1, 1), (6, 6), scores)
    contracted = synthetic_degradation(g, 0.7, 0.0)
    assert np.max(np.abs(contracted.scores)) <= 0.7 + 1e-12
    noisy = synthetic_degradation(g, 0.7, 0.0, rng=3, noise_shots=1024)
    assert np.max(np.abs(noisy.scores)) <= 1.0


# --- loss landscape ---------------------------------------------------------------

@pytest.fixture(scope="module")
def trained_l2():
    train, test = benchmark_splits()
    cfg = vqc.VqcTrainConfig(epochs=150)
    model, _, record = vqc.train_vqc(cfg, vqc.init_model(2, 0), train, test)
    return model, train, record


def test_landscape_center_equals_training_bce(trained_l2):
    model, train, record = trained_l2
    _, _, grid = loss_landscape_slice(model, train, 0, 1, span=0.5, resolution=5)
    assert grid[2, 2] == pytest.approx(record.train_bce, abs=1e-9)


def test_landscape_two_pi_periodic(trained_l2):
    model, train, _ = trained_l2
    _, _, grid = loss_landscape_slice(model, train, 0, 1, span=2 * np.pi, resolution=5)
    center = grid[2, 2]
    assert grid[4, 2] == pytest.approx(center, abs=1e-9)  # (+2pi, 0)
    assert grid[2, 0] == pytest.approx(center, abs=1e-9)  # (0, -2pi)


def test_landscape_center_is_local_min_for_most_seeds():
    # Needs a well-converged endpoint, so train past the protocol default.
    train, test = benchmark_splits()
    cfg = vqc.VqcTrainConfig(epochs=600)
    wins = 0
    for seed in range(5):
        model, _, _ = vqc.train_vqc(cfg, vqc.init_model(2, seed), train, test)
        _, _, grid = loss_landscape_slice(model, train, 0, 1, span=0.2, resolution=5)
        wins += bool(np.all(grid[2, 2] <= grid + 1e-12))
    assert wins >= 4


def test_landscape_axis_validation(trained_l2):
    model, train, _ = trained_l2
    with pytest.raises(ValueError):
        loss_landscape_slice(model, train, 0, 0)
    with pytest.raises(ValueError):
        loss_landscape_slice(model, train, 0, 99)


# --- sweep engine ------------------------------------------------------------------

def test_small_sweep_counts_and_aggregates():
    spec = ModelSpec("LR", learning_rate=0.1, epochs=50)
    result = sweep_noise(sigmas=[0.0, 0.1], specs=[spec], seeds=[0, 1], n_per_cluster=5)
    assert len(result.records) == 4
    assert len(result.rows) == 2
    for row in result.rows:
        assert row.n_seeds == 2
        assert 0.0 <= row.mean_test_acc <= 1.0
        assert row.std_test_acc >= 0.0


def test_sweep_records_divergence_without_aborting(monkeypatch):
    calls = {"n": 0}
    real = bench.train_spec

    def flaky(spec, train, test, seed, run_id=""):
        calls["n"] += 1
        if calls["n"] == 2:
            raise TrainingDiverged(epoch=3)
        return real(spec, train, test, seed, run_id)

    monkeypatch.setattr(bench, "train_spec", flaky)
    spec = ModelSpec("LR", learning_rate=0.1, epochs=20)
    result = sweep_noise(sigmas=[0.0], specs=[spec], seeds=[0, 1, 2], n_per_cluster=5)
    assert len(result.records) == 2
    assert len(result.failures) == 1
    assert result.failures[0]["epoch"] == 3


def test_run_cells_parallel_matches_serial():
    spec = ModelSpec("LR", learning_rate=0.1, epochs=30)
    cells = [
        SweepCell("sigma", s, spec, seed, {"variant": "B", "sigma": s, "n_per_cluster": 5})
        for s in (0.0, 0.1)
        for seed in (0, 1)
    ]
    serial, _ = run_cells(cells, jobs=1)
    parallel, _ = run_cells(cells, jobs=2)
    assert [r.run_id for r in serial] == [r.run_id for r in parallel]
    assert [r.test_acc for r in serial] == [r.test_acc for r in parallel]
    assert [r.train_bce for r in serial] == [r.train_bce for r in parallel]
