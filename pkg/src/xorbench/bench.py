"""Benchmark machinery: metrics, separability, decision grids, sweeps,
loss-landscape slices, and grid-deviation analysis.

Decision scores live on f(x) = 2 p(y=1|x) - 1 in [-1, 1]; the p = 0.5
decision boundary is the f = 0 level set. The default evaluation region is
[-0.5, 1.5]^2, which covers the Gaussian cluster spread of every noise
setting studied here.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import classical, kernels, vqc
from .data import LabeledDataset, benchmark_splits
from .qsim import ANALYTIC, ShotCount
from .records import RunRecord, TrainingDiverged
from .rngs import SeedLike, make_rng

DEFAULT_REGION = ((-0.5, 1.5), (-0.5, 1.5))
DEFAULT_RESOLUTION = (25, 25)
HISTOGRAM_BINS = 20

# Sweep default grids.
SWEEP_SIGMAS = (0.00, 0.05, 0.10, 0.20, 0.30)
SWEEP_SIZES = (25, 50, 100, 250, 500)
SWEEP_SHOTS = (ANALYTIC, 128, 1024)
SWEEP_WIDTHS = (1, 2, 4, 8)
SWEEP_THRESHOLDS = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_SEEDS = (0, 1, 2, 3, 4)
EXTENDED_SEEDS = tuple(range(20))


def accuracy(predicted_labels, true_labels) -> float:
    """Fraction of matching labels."""
    pred = np.asarray(predicted_labels)
    true = np.asarray(true_labels)
    if pred.size == 0 or pred.shape != true.shape:
        raise ValueError("label sequences must be equal-length and nonempty")
    return float(np.mean(pred == true))


# ---------------------------------------------------------------------------
# Exact 2-D linear separability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparabilityResult:
    separable: bool
    w: Optional[np.ndarray] = None
    b: Optional[float] = None


def check_linear_separability(points, labels) -> SeparabilityResult:
    """Exact strict linear separability of a labelled 2-D point set.

    Candidate normals are derived from all point pairs: for each pair
    difference d both the direction of d itself and its perpendicular are
    tried (both orientations). If the two classes are strictly separable,
    the maximum-margin separator is supported either vertex-vertex (normal
    along a pair difference) or vertex-edge (normal perpendicular to a pair
    difference), so this candidate set is sufficient. The returned offset
    places the line halfway between the extreme projections.
    """
    pts = np.asarray(points, dtype=float)
    labs = np.asarray(labels)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("need at least 2 points of shape (N, 2)")
    classes = np.unique(labs)
    if len(classes) != 2:
        raise ValueError("both classes must be present (single-class input is trivially separable)")
    mask1 = labs == classes.max()
    p0, p1 = pts[~mask1], pts[mask1]

    diffs = (pts[:, None, :] - pts[None, :, :]).reshape(-1, 2)
    keep = np.einsum("ij,ij->i", diffs, diffs) > 0.0
    diffs = diffs[keep]
    perps = np.stack([-diffs[:, 1], diffs[:, 0]], axis=1)
    for w in np.concatenate([diffs, perps]):
        for sign in (1.0, -1.0):
            ww = sign * w
            hi0 = float(np.max(p0 @ ww))
            lo1 = float(np.min(p1 @ ww))
            if hi0 < lo1:
                b = -(hi0 + lo1) / 2.0
                return SeparabilityResult(True, ww.copy(), b)
    return SeparabilityResult(False)


# ---------------------------------------------------------------------------
# Decision grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecisionGrid:
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    resolution: Tuple[int, int]  # (nx, ny)
    scores: np.ndarray  # (ny, nx), rows over ascending y; .ravel() is row-major

    def __post_init__(self) -> None:
        nx, ny = self.resolution
        if self.scores.shape != (ny, nx):
            raise ValueError(f"scores shape {self.scores.shape} != (ny, nx) = {(ny, nx)}")

    def cell_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        return cell_centers((self.x_range, self.y_range), self.resolution)


ScoreFn = Callable[[np.ndarray], np.ndarray]


def make_scorer(
    model,
    shots: ShotCount = ANALYTIC,
    rng: Optional[SeedLike] = None,
) -> ScoreFn:
    """f(x) = 2 p - 1 for any trained model (VQC scores already are f)."""
    if isinstance(model, vqc.VqcModel):
        eval_model = replace_shots(model, shots)
        gen = make_rng(rng) if rng is not None else None
        return lambda X: vqc.scores_batch(eval_model, X, gen)
    if isinstance(model, classical.LinearModel):
        return lambda X: 2.0 * classical.linear_predict(model, X) - 1.0
    if isinstance(model, classical.MlpModel):
        return lambda X: 2.0 * classical.mlp_predict(model, X) - 1.0
    raise TypeError(f"unsupported model type {type(model)!r}")


def replace_shots(model: vqc.VqcModel, shots: ShotCount) -> vqc.VqcModel:
    return vqc.VqcModel(model.depth, model.params.copy(), shots=shots, seed=model.seed)


def cell_centers(
    region: Tuple[Tuple[float, float], Tuple[float, float]],
    resolution: Tuple[int, int],
) -> Tuple[np.ndarray, np.ndarray]:
    nx, ny = resolution
    (x0, x1), (y0, y1) = region
    xs = x0 + (x1 - x0) * (np.arange(nx) + 0.5) / nx
    ys = y0 + (y1 - y0) * (np.arange(ny) + 0.5) / ny
    return xs, ys


def decision_grid(
    score_fn: ScoreFn,
    region: Tuple[Tuple[float, float], Tuple[float, float]] = DEFAULT_REGION,
    resolution: Tuple[int, int] = DEFAULT_RESOLUTION,
) -> DecisionGrid:
    """Evaluate f on the cell-centred lattice of the region."""
    nx, ny = resolution
    if nx < 2 or ny < 2:
        raise ValueError(f"resolution must be >= 2 per axis, got {resolution}")
    xs, ys = cell_centers(region, resolution)
    xx, yy = np.meshgrid(xs, ys)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    scores = np.asarray(score_fn(pts), dtype=float).reshape(ny, nx)
    if np.any(np.abs(scores) > 1.0 + 1e-9):
        raise ValueError("scores escaped [-1, 1]")
    return DecisionGrid(tuple(region[0]), tuple(region[1]), (nx, ny), scores)


@dataclass(frozen=True)
class DeviationReport:
    mad: float
    mse: float
    absdiff: np.ndarray  # (ny, nx)
    hist_a: np.ndarray  # HISTOGRAM_BINS counts over [-1, 1]
    hist_b: np.ndarray
    bin_edges: np.ndarray


def grid_deviation(grid_a: DecisionGrid, grid_b: DecisionGrid) -> DeviationReport:
    """Pointwise deviation metrics between two aligned decision grids."""
    if (
        grid_a.resolution != grid_b.resolution
        or grid_a.x_range != grid_b.x_range
        or grid_a.y_range != grid_b.y_range
    ):
        raise ValueError("grids must share region and resolution")
    diff = grid_a.scores - grid_b.scores
    absdiff = np.abs(diff)
    edges = np.linspace(-1.0, 1.0, HISTOGRAM_BINS + 1)
    hist_a, _ = np.histogram(grid_a.scores, bins=edges)
    hist_b, _ = np.histogram(grid_b.scores, bins=edges)
    return DeviationReport(
        mad=float(np.mean(absdiff)), mse=float(np.mean(diff**2)),
        absdiff=absdiff, hist_a=hist_a, hist_b=hist_b, bin_edges=edges,
    )


def synthetic_degradation(
    grid: DecisionGrid,
    contraction: float,
    bias: float,
    rng: Optional[SeedLike] = None,
    noise_shots: Optional[int] = None,
) -> DecisionGrid:
    """Synthetic stand-in for device effects: s -> clamp(c*s + bias + noise).

    ``noise_shots`` adds shot-style noise by resampling each contracted
    score from a binomial at that shot count; None means no noise. Outputs
    from this transform are labelled synthetic wherever they are written.
    """
    if not (0.0 <= contraction <= 1.0) or not np.isfinite(bias):
        raise ValueError("contraction must lie in [0, 1] and bias must be finite")
    s = np.clip(contraction * grid.scores + bias, -1.0, 1.0)
    if noise_shots is not None:
        if rng is None:
            raise ValueError("noise_shots requires an rng")
        gen = make_rng(rng)
        p0 = np.clip((1.0 + s) / 2.0, 0.0, 1.0)
        n0 = gen.binomial(int(noise_shots), p0)
        s = np.clip(2.0 * n0 / noise_shots - 1.0, -1.0, 1.0)
    return DecisionGrid(grid.x_range, grid.y_range, grid.resolution, s)


# ---------------------------------------------------------------------------
# Loss-landscape slices
# ---------------------------------------------------------------------------

def loss_landscape_slice(
    model: vqc.VqcModel,
    train: LabeledDataset,
    axis_i: int,
    axis_j: int,
    span: float = np.pi,
    resolution: int = 41,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Training BCE over a 2-D parameter slice centred at the model's params.

    Returns (offsets_i, offsets_j, bce) where bce[a, b] is evaluated at
    params + offsets_i[a] * e_i + offsets_j[b] * e_j, analytically.
    """
    n = model.n_params()
    if axis_i == axis_j or not (0 <= axis_i < n and 0 <= axis_j < n):
        raise ValueError(f"axes must be distinct indices below {n}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    offsets = np.linspace(-span, span, resolution)
    y = train.labels.astype(float)
    bce = np.empty((resolution, resolution))
    params = model.params.copy()
    for a, di in enumerate(offsets):
        for b, dj in enumerate(offsets):
            p = params.copy()
            p[axis_i] += di
            p[axis_j] += dj
            m = kernels.circuit_scores(train.points, p)
            bce[a, b] = vqc.bce_loss((1.0 + m) / 2.0, y)
    return offsets.copy(), offsets.copy(), bce


# ---------------------------------------------------------------------------
# Model specs and the sweep engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to train one model: kind plus hyperparameters."""

    kind: str  # "LR" | "MLP" | "VQC"
    hidden_units: Optional[int] = None  # MLP
    depth: Optional[int] = None  # VQC
    shots: ShotCount = ANALYTIC  # VQC
    learning_rate: Optional[float] = None  # None -> per-kind default
    epochs: Optional[int] = None
    optimizer: str = vqc.ADAM  # VQC

    def label(self) -> str:
        if self.kind == "LR":
            return "LR"
        if self.kind == "MLP":
            return f"MLP-h{self.hidden_units}"
        shots = "analytic" if self.shots == ANALYTIC else f"{self.shots}shots"
        return f"VQC-L{self.depth}-{shots}"

    def n_params(self) -> int:
        if self.kind == "LR":
            return 3
        if self.kind == "MLP":
            return 4 * self.hidden_units + 1
        return 6 * self.depth


TABLE_BENCHMARK_SPECS = (
    ModelSpec("LR"),
    ModelSpec("MLP", hidden_units=4),
    ModelSpec("VQC", depth=1, shots=ANALYTIC),
    ModelSpec("VQC", depth=1, shots=1024),
    ModelSpec("VQC", depth=1, shots=128),
    ModelSpec("VQC", depth=2, shots=ANALYTIC),
    ModelSpec("VQC", depth=2, shots=1024),
)

SWEEP_MODEL_SPECS = (
    ModelSpec("LR"),
    ModelSpec("MLP", hidden_units=4),
    ModelSpec("VQC", depth=1, shots=ANALYTIC),
    ModelSpec("VQC", depth=2, shots=ANALYTIC),
)


def train_spec(
    spec: ModelSpec, train: LabeledDataset, test: LabeledDataset, seed: int, run_id: str = ""
):
    """Train one model described by ``spec``; returns (model, curves, record)."""
    if spec.kind == "LR":
        cfg = classical.ClassicalTrainConfig(
            spec.learning_rate if spec.learning_rate is not None else classical.DEFAULT_LR_LEARNING_RATE,
            spec.epochs if spec.epochs is not None else classical.DEFAULT_CLASSICAL_EPOCHS,
        )
        return classical.train_classical(classical.init_linear(seed), train, test, cfg, run_id)
    if spec.kind == "MLP":
        cfg = classical.ClassicalTrainConfig(
            spec.learning_rate if spec.learning_rate is not None else classical.DEFAULT_MLP_LEARNING_RATE,
            spec.epochs if spec.epochs is not None else classical.DEFAULT_CLASSICAL_EPOCHS,
        )
        return classical.train_classical(classical.init_mlp(spec.hidden_units, seed), train, test, cfg, run_id)
    if spec.kind == "VQC":
        cfg = vqc.VqcTrainConfig(
            optimizer=spec.optimizer,
            learning_rate=spec.learning_rate if spec.learning_rate is not None else vqc.DEFAULT_VQC_LEARNING_RATE,
            epochs=spec.epochs if spec.epochs is not None else vqc.DEFAULT_VQC_EPOCHS,
            init_seed=seed,
        )
        model0 = vqc.init_model(spec.depth, seed, shots=spec.shots)
        return vqc.train_vqc(cfg, model0, train, test, run_id)
    raise ValueError(f"unknown model kind {spec.kind!r}")


@dataclass(frozen=True)
class SweepCell:
    """One (swept value, model, seed) training task."""

    sweep: str
    value: Union[float, int, str]
    spec: ModelSpec
    seed: int
    data_kwargs: Dict

    def run_id(self) -> str:
        return f"{self.sweep}-{self.value}-{self.spec.label()}-s{self.seed}"


@dataclass
class SweepRow:
    model_label: str
    value: Union[float, int, str]
    mean_test_acc: float
    std_test_acc: float
    mean_test_bce: float
    std_test_bce: float
    n_seeds: int


@dataclass
class SweepResult:
    swept_variable: str
    rows: List[SweepRow]
    records: List[RunRecord]
    failures: List[Dict]  # per-cell divergences: {"run_id", "epoch"}


def _run_cell(cell: SweepCell):
    train, test = benchmark_splits(**cell.data_kwargs)
    try:
        _, _, record = train_spec(cell.spec, train, test, cell.seed, cell.run_id())
        return cell, record, None
    except TrainingDiverged as exc:
        return cell, None, {"run_id": cell.run_id(), "epoch": exc.epoch}


def run_cells(cells: Sequence[SweepCell], jobs: int = 1):
    """Train every cell (optionally in a process pool); order-deterministic."""
    results = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(cell) for cell in cells]
    # Sort by position in the cell list so output never depends on scheduling.
    order = {cell.run_id(): i for i, cell in enumerate(cells)}
    results.sort(key=lambda item: order[item[0].run_id()])
    records = [rec for _, rec, _ in results if rec is not None]
    failures = [fail for _, _, fail in results if fail is not None]
    return records, failures


def _aggregate(sweep: str, cells, records) -> List[SweepRow]:
    groups: Dict[Tuple[str, object], List[RunRecord]] = {}
    labels_values = []
    by_run_id = {}
    for cell in cells:
        key = (cell.spec.label(), cell.value)
        if key not in groups:
            groups[key] = []
            labels_values.append(key)
        by_run_id[cell.run_id()] = key
    for rec in records:
        groups[by_run_id[rec.run_id]].append(rec)
    rows = []
    for label, value in labels_values:
        recs = groups[(label, value)]
        if not recs:
            continue
        accs = np.array([r.test_acc for r in recs])
        bces = np.array([r.test_bce for r in recs])
        rows.append(SweepRow(
            model_label=label, value=value,
            mean_test_acc=float(accs.mean()),
            std_test_acc=float(accs.std(ddof=1)) if len(accs) > 1 else 0.0,
            mean_test_bce=float(bces.mean()),
            std_test_bce=float(bces.std(ddof=1)) if len(bces) > 1 else 0.0,
            n_seeds=len(recs),
        ))
    return rows


def _sweep(
    name: str,
    values: Sequence,
    cell_maker: Callable[[object, ModelSpec, int], SweepCell],
    specs: Sequence[ModelSpec],
    seeds: Sequence[int],
    jobs: int = 1,
) -> SweepResult:
    if not values or not list(seeds):
        raise ValueError("value and seed lists must be nonempty")
    cells = [
        cell_maker(value, spec, seed)
        for value in values
        for spec in specs
        for seed in seeds
    ]
    records, failures = run_cells(cells, jobs=jobs)
    return SweepResult(name, _aggregate(name, cells, records), records, failures)


def sweep_noise(
    sigmas: Sequence[float] = SWEEP_SIGMAS,
    specs: Sequence[ModelSpec] = SWEEP_MODEL_SPECS,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    n_per_cluster: int = 100,
    data_seed: int = 42,
    jobs: int = 1,
) -> SweepResult:
    return _sweep(
        "sigma", list(sigmas),
        lambda v, spec, seed: SweepCell(
            "sigma", v, spec, seed,
            {"variant": "B", "sigma": v, "n_per_cluster": n_per_cluster, "data_seed": data_seed},
        ),
        specs, seeds, jobs,
    )


def sweep_size(
    sizes: Sequence[int] = SWEEP_SIZES,
    specs: Sequence[ModelSpec] = SWEEP_MODEL_SPECS,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    sigma: float = 0.10,
    data_seed: int = 42,
    jobs: int = 1,
) -> SweepResult:
    return _sweep(
        "n_per_cluster", list(sizes),
        lambda v, spec, seed: SweepCell(
            "n_per_cluster", v, spec, seed,
            {"variant": "B", "sigma": sigma, "n_per_cluster": v, "data_seed": data_seed},
        ),
        specs, seeds, jobs,
    )


def sweep_shots(
    shots_values: Sequence[ShotCount] = SWEEP_SHOTS,
    depths: Sequence[int] = (1, 2),
    seeds: Sequence[int] = DEFAULT_SEEDS,
    sigma: float = 0.10,
    n_per_cluster: int = 100,
    data_seed: int = 42,
    jobs: int = 1,
    learning_rate: Optional[float] = None,
    epochs: Optional[int] = None,
    optimizer: str = vqc.ADAM,
) -> SweepResult:
    specs_by_value = {
        v: [
            ModelSpec("VQC", depth=d, shots=v, learning_rate=learning_rate,
                      epochs=epochs, optimizer=optimizer)
            for d in depths
        ]
        for v in shots_values
    }
    cells = [
        SweepCell(
            "shots", v, spec, seed,
            {"variant": "B", "sigma": sigma, "n_per_cluster": n_per_cluster, "data_seed": data_seed},
        )
        for v in shots_values
        for spec in specs_by_value[v]
        for seed in seeds
    ]
    records, failures = run_cells(cells, jobs=jobs)
    return SweepResult("shots", _aggregate("shots", cells, records), records, failures)


def sweep_seeds(
    seeds: Sequence[int] = EXTENDED_SEEDS,
    specs: Sequence[ModelSpec] = SWEEP_MODEL_SPECS,
    sigma: float = 0.10,
    n_per_cluster: int = 100,
    data_seed: int = 42,
    jobs: int = 1,
) -> SweepResult:
    return _sweep(
        "seed", list(seeds),
        lambda v, spec, seed_unused: SweepCell(
            "seed", v, spec, v,
            {"variant": "B", "sigma": sigma, "n_per_cluster": n_per_cluster, "data_seed": data_seed},
        ),
        specs, [0], jobs,  # the swept variable *is* the seed
    )


def sweep_width(
    widths: Sequence[int] = SWEEP_WIDTHS,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    sigma: float = 0.10,
    n_per_cluster: int = 100,
    data_seed: int = 42,
    jobs: int = 1,
    learning_rate: Optional[float] = None,
    epochs: Optional[int] = None,
) -> SweepResult:
    return _sweep(
        "h", list(widths),
        lambda v, spec, seed: SweepCell(
            "h", v,
            ModelSpec("MLP", hidden_units=v, learning_rate=learning_rate, epochs=epochs),
            seed,
            {"variant": "B", "sigma": sigma, "n_per_cluster": n_per_cluster, "data_seed": data_seed},
        ),
        [ModelSpec("MLP", hidden_units=0)], seeds, jobs,  # placeholder spec; rebuilt per width
    )


def sweep_threshold(
    thresholds: Sequence[float] = SWEEP_THRESHOLDS,
    specs: Sequence[ModelSpec] = SWEEP_MODEL_SPECS,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    n_total: int = 400,
    data_seed: int = 42,
    jobs: int = 1,
) -> SweepResult:
    return _sweep(
        "t", list(thresholds),
        lambda v, spec, seed: SweepCell(
            "t", v, spec, seed,
            {"variant": "C", "n_total": n_total, "threshold_t": v, "data_seed": data_seed},
        ),
        specs, seeds, jobs,
    )
