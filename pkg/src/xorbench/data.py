"""Deterministic XOR dataset generation and train/test splitting.

Three variants:

- A: the four canonical corners (0,0),(0,1),(1,0),(1,1) labelled 0,1,1,0.
- B: Gaussian clusters of ``n_per_cluster`` points around each corner
  (noise scale ``sigma``), corner label inherited.
- C: ``n_total`` points uniform on the unit square, label 1 iff exactly one
  coordinate exceeds the threshold ``t``.

Noise uses Box-Muller on the package PCG64 generator (see ``rngs``); for
variant B the draw order is per corner in the canonical order above, 2n
normals reshaped point-major into (n, 2).

Benchmark protocol: ``benchmark_splits`` drives generation AND the split
shuffle from one generator seeded with the data seed, i.e. the split
permutation continues the stream the noise came from. Keep that ordering;
the reference experiment tables were produced with it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .records import fmt_float
from .rngs import SeedLike, make_rng, normal_box_muller

CORNERS = np.array([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)])
CORNER_LABELS = np.array([0, 1, 1, 0], dtype=np.int64)

DEFAULT_DATA_SEED = 42
DEFAULT_TRAIN_FRACTION = 0.8
DEFAULT_N_TOTAL_C = 400
DEFAULT_THRESHOLD_T = 0.5


@dataclass(frozen=True)
class Provenance:
    variant: str  # "A" | "B" | "C"
    sigma: float = 0.0
    n_per_cluster: Optional[int] = None
    threshold_t: Optional[float] = None
    data_seed: Optional[int] = None
    n_total: Optional[int] = None  # variant C


@dataclass(frozen=True)
class LabeledDataset:
    points: np.ndarray  # (N, 2) float64
    labels: np.ndarray  # (N,) int64, values in {0, 1}
    provenance: Provenance

    def __len__(self) -> int:
        return len(self.labels)


def gen_dataset_a() -> LabeledDataset:
    """The canonical 4-point XOR set in fixed corner order."""
    return LabeledDataset(
        CORNERS.copy(), CORNER_LABELS.copy(), Provenance(variant="A", n_per_cluster=1)
    )


def _gen_b(rng: np.random.Generator, sigma: float, n_per_cluster: int) -> Tuple[np.ndarray, np.ndarray]:
    points, labels = [], []
    for corner, label in zip(CORNERS, CORNER_LABELS):
        noise = normal_box_muller(rng, 2 * n_per_cluster).reshape(n_per_cluster, 2)
        points.append(corner + sigma * noise)
        labels.append(np.full(n_per_cluster, label, dtype=np.int64))
    return np.concatenate(points), np.concatenate(labels)


def gen_dataset_b(sigma: float, n_per_cluster: int, seed: SeedLike) -> LabeledDataset:
    """Gaussian-noise clusters at the XOR corners, labels from the corners."""
    if not (0.0 <= sigma <= 1.0):
        raise ValueError(f"sigma must lie in [0, 1], got {sigma!r}")
    if not isinstance(n_per_cluster, (int, np.integer)) or n_per_cluster < 1:
        raise ValueError(f"n_per_cluster must be >= 1, got {n_per_cluster!r}")
    rng = make_rng(seed)
    points, labels = _gen_b(rng, float(sigma), int(n_per_cluster))
    prov = Provenance(
        variant="B", sigma=float(sigma), n_per_cluster=int(n_per_cluster),
        data_seed=seed if isinstance(seed, (int, np.integer)) else None,
    )
    return LabeledDataset(points, labels, prov)


def _gen_c(rng: np.random.Generator, n_total: int, threshold_t: float) -> Tuple[np.ndarray, np.ndarray]:
    points = rng.random((n_total, 2))
    over = points > threshold_t
    labels = (over[:, 0] ^ over[:, 1]).astype(np.int64)
    return points, labels


def gen_dataset_c(
    n_total: int = DEFAULT_N_TOTAL_C,
    threshold_t: float = DEFAULT_THRESHOLD_T,
    seed: SeedLike = DEFAULT_DATA_SEED,
) -> LabeledDataset:
    """Uniform points on [0,1]^2; label 1 iff exactly one coordinate > t."""
    if not isinstance(n_total, (int, np.integer)) or n_total < 4:
        raise ValueError(f"n_total must be >= 4, got {n_total!r}")
    if not (0.0 < threshold_t < 1.0):
        raise ValueError(f"threshold_t must lie in (0, 1), got {threshold_t!r}")
    rng = make_rng(seed)
    points, labels = _gen_c(rng, int(n_total), float(threshold_t))
    prov = Provenance(
        variant="C", threshold_t=float(threshold_t), n_total=int(n_total),
        data_seed=seed if isinstance(seed, (int, np.integer)) else None,
    )
    return LabeledDataset(points, labels, prov)


def regenerate(provenance: Provenance) -> LabeledDataset:
    """Rebuild a dataset from its provenance record."""
    if provenance.variant == "A":
        return gen_dataset_a()
    if provenance.variant == "B":
        return gen_dataset_b(provenance.sigma, provenance.n_per_cluster, provenance.data_seed)
    if provenance.variant == "C":
        return gen_dataset_c(provenance.n_total, provenance.threshold_t, provenance.data_seed)
    raise ValueError(f"unknown variant {provenance.variant!r}")


def _split_by_perm(ds: LabeledDataset, perm: np.ndarray, n_train: int):
    tr, te = perm[:n_train], perm[n_train:]
    return (
        LabeledDataset(ds.points[tr], ds.labels[tr], ds.provenance),
        LabeledDataset(ds.points[te], ds.labels[te], ds.provenance),
    )


def split_train_test(
    ds: LabeledDataset,
    train_fraction: float,
    seed: SeedLike,
    stratified: bool = False,
) -> Tuple[LabeledDataset, LabeledDataset]:
    """Seeded uniform shuffle, then prefix split of size ceil(f * N).

    With ``stratified=True`` the shuffle order is kept but per-class train
    quotas of ceil(f * n_class) are enforced.
    """
    n = len(ds)
    if n < 2:
        raise ValueError("dataset must contain at least 2 points to split")
    if not (0.0 < train_fraction < 1.0):
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction!r}")
    n_train = math.ceil(train_fraction * n)
    if n_train == 0 or n_train == n:
        raise ValueError(f"degenerate split: {n_train}/{n - n_train} of {n} points")
    perm = make_rng(seed).permutation(n)
    if not stratified:
        return _split_by_perm(ds, perm, n_train)
    quotas = {
        int(c): math.ceil(train_fraction * int((ds.labels == c).sum()))
        for c in np.unique(ds.labels)
    }
    train_idx, test_idx = [], []
    for i in perm:
        c = int(ds.labels[i])
        if quotas[c] > 0:
            train_idx.append(i)
            quotas[c] -= 1
        else:
            test_idx.append(i)
    if not test_idx:
        raise ValueError(
            f"degenerate stratified split: per-class quotas consume all {n} points"
        )
    order = np.array(train_idx + test_idx)
    return _split_by_perm(LabeledDataset(ds.points, ds.labels, ds.provenance), order, len(train_idx))


def benchmark_splits(
    variant: str = "B",
    sigma: float = 0.10,
    n_per_cluster: int = 100,
    n_total: int = DEFAULT_N_TOTAL_C,
    threshold_t: float = DEFAULT_THRESHOLD_T,
    data_seed: int = DEFAULT_DATA_SEED,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    stratified: bool = False,
) -> Tuple[LabeledDataset, LabeledDataset]:
    """Generate a dataset and split it, one seed stream driving both."""
    rng = make_rng(data_seed)
    if variant == "B":
        ds = gen_dataset_b(sigma, n_per_cluster, rng)
    elif variant == "C":
        ds = gen_dataset_c(n_total, threshold_t, rng)
    elif variant == "A":
        ds = gen_dataset_a()
    else:
        raise ValueError(f"unknown variant {variant!r}")
    ds = LabeledDataset(
        ds.points, ds.labels,
        Provenance(**{**asdict(ds.provenance), "data_seed": data_seed}),
    )
    return split_train_test(ds, train_fraction, rng, stratified=stratified)


def save_dataset_csv(ds: LabeledDataset, path: Union[str, Path]) -> None:
    """CSV with header x1,x2,y plus a sibling .json provenance file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "y"])
        for (x1, x2), y in zip(ds.points, ds.labels):
            writer.writerow([fmt_float(x1), fmt_float(x2), str(int(y))])
    with open(path.with_suffix(".json"), "w") as fh:
        json.dump(asdict(ds.provenance), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_dataset_csv(path: Union[str, Path]) -> LabeledDataset:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x1", "x2", "y"]:
            raise ValueError(f"unexpected dataset header {header!r} in {path}")
        rows = [(float(r[0]), float(r[1]), int(r[2])) for r in reader]
    points = np.array([(r[0], r[1]) for r in rows])
    labels = np.array([r[2] for r in rows], dtype=np.int64)
    prov_path = path.with_suffix(".json")
    if prov_path.exists():
        with open(prov_path) as fh:
            prov = Provenance(**json.load(fh))
    else:
        prov = Provenance(variant="?")
    return LabeledDataset(points, labels, prov)
