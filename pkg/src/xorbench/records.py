"""Run bookkeeping: per-run records, learning curves, and the runs CSV schema."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

import numpy as np

#: Exact column order of the runs CSV (external interface; do not reorder).
RUN_CSV_HEADER = [
    "run_id", "model", "variant", "sigma", "n_per_cluster", "threshold_t",
    "seed", "L", "h", "shots", "lr", "epochs", "n_params",
    "train_acc", "test_acc", "train_bce", "test_bce", "train_time_s",
]


class TrainingDiverged(RuntimeError):
    """Raised when a training loss becomes non-finite; carries the epoch index."""

    def __init__(self, epoch: int, message: str = "") -> None:
        self.epoch = epoch
        super().__init__(message or f"non-finite loss at epoch {epoch}")


@dataclass
class LearningCurves:
    """Per-epoch metrics recorded after each parameter update."""

    train_bce: np.ndarray
    test_bce: np.ndarray
    train_acc: np.ndarray
    test_acc: np.ndarray

    def __len__(self) -> int:
        return len(self.train_bce)


@dataclass
class RunRecord:
    """One training run: configuration plus final metrics."""

    run_id: str
    model: str  # LR | MLP | VQC
    variant: str
    sigma: float
    n_per_cluster: Optional[int]
    threshold_t: Optional[float]
    seed: int
    depth_L: Optional[int]
    hidden_h: Optional[int]
    shots: Union[int, str, None]
    lr: float
    epochs: int
    n_params: int
    train_acc: float
    test_acc: float
    train_bce: float
    test_bce: float
    train_time_s: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.train_acc <= 1.0 and 0.0 <= self.test_acc <= 1.0):
            raise ValueError("accuracies must lie in [0, 1]")
        if self.train_bce < 0.0 or self.test_bce < 0.0:
            raise ValueError("BCE must be >= 0")


def fmt_float(x: float) -> str:
    """17-significant-digit decimal form (round-trips float64)."""
    return format(float(x), ".17g")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def record_row(rec: RunRecord) -> List[str]:
    return [
        rec.run_id, rec.model, rec.variant, fmt_float(rec.sigma),
        _cell(rec.n_per_cluster), _cell(rec.threshold_t), str(rec.seed),
        _cell(rec.depth_L), _cell(rec.hidden_h), _cell(rec.shots),
        fmt_float(rec.lr), str(rec.epochs), str(rec.n_params),
        fmt_float(rec.train_acc), fmt_float(rec.test_acc),
        fmt_float(rec.train_bce), fmt_float(rec.test_bce),
        format(rec.train_time_s, ".6f"),
    ]


def write_runs_csv(records: Iterable[RunRecord], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_CSV_HEADER)
        for rec in records:
            writer.writerow(record_row(rec))


def write_curves_csv(curves: LearningCurves, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "train_bce", "test_bce", "train_acc", "test_acc"])
        for i in range(len(curves)):
            writer.writerow([
                str(i + 1),
                fmt_float(curves.train_bce[i]), fmt_float(curves.test_bce[i]),
                fmt_float(curves.train_acc[i]), fmt_float(curves.test_acc[i]),
            ])
