"""Named end-to-end experiments: configuration, execution, file output.

Each experiment writes into one output directory:

- ``runs.csv``      every training run (schema in ``records.RUN_CSV_HEADER``)
- ``summary.csv``   per-(model, swept value) aggregates where applicable
- ``grid_*.csv``    decision grids (x,y,f rows), ``curves_*.csv`` learning curves
- ``manifest.json`` resolved config, its sha256, versions, backend, failures

Everything except the wall-clock ``train_time_s`` column of runs.csv is a
deterministic function of (config, seeds); rendering to SVG is a separate
pure pass over the written CSVs (see ``render_dir``).
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import List, Union

import numpy as np

from . import __version__, bench, classical, kernels, svg, vqc
from .bench import (
    DEFAULT_SEEDS, EXTENDED_SEEDS, SWEEP_SHOTS, SWEEP_SIGMAS, SWEEP_SIZES,
    SWEEP_THRESHOLDS, SWEEP_WIDTHS, DecisionGrid, ModelSpec, SweepCell,
    SweepResult, decision_grid, grid_deviation, loss_landscape_slice,
    make_scorer, run_cells, synthetic_degradation,
)
from .data import DEFAULT_DATA_SEED, benchmark_splits, gen_dataset_a, save_dataset_csv
from .qsim import ANALYTIC
from .records import fmt_float, write_curves_csv, write_runs_csv

EXPERIMENT_NAMES = (
    "benchmark", "noise-sweep", "size-sweep", "shots-sweep", "seed-sweep",
    "width-ablation", "depth-compare", "landscape", "boundary", "deviation",
    "dataset-c",
)

OUTPUT_ROOT_ENV = "XORBENCH_OUT"


class ConfigError(ValueError):
    """Invalid experiment configuration; message lists field diagnostics."""


DEFAULT_CONFIG = {
    "experiment": "benchmark",
    "data": {
        "variant": "B",
        "sigma": 0.10,
        "n_per_cluster": 100,
        "n_total": 400,
        "threshold_t": 0.5,
        "data_seed": DEFAULT_DATA_SEED,
        "train_fraction": 0.8,
        "stratified": False,
    },
    "train": {
        "seeds": list(DEFAULT_SEEDS),
        "vqc_learning_rate": vqc.DEFAULT_VQC_LEARNING_RATE,
        "vqc_epochs": vqc.DEFAULT_VQC_EPOCHS,
        "vqc_optimizer": vqc.ADAM,
        "lr_learning_rate": classical.DEFAULT_LR_LEARNING_RATE,
        "mlp_learning_rate": classical.DEFAULT_MLP_LEARNING_RATE,
        "classical_epochs": classical.DEFAULT_CLASSICAL_EPOCHS,
        "analytic_gradients": False,
    },
    "sweep": {
        "sigmas": list(SWEEP_SIGMAS),
        "sizes": list(SWEEP_SIZES),
        "shots": list(SWEEP_SHOTS),
        "widths": list(SWEEP_WIDTHS),
        "thresholds": list(SWEEP_THRESHOLDS),
        "seeds_extended": list(EXTENDED_SEEDS),
    },
    "grid": {
        "resolution": [25, 25],
        "region": [[-0.5, 1.5], [-0.5, 1.5]],
        "shots": 1024,
        "grid_seed": 7,
    },
    "landscape": {
        "depth": 2,
        "axes": [0, 1],
        "span": float(np.pi),
        "resolution": 41,
    },
    "deviation": {
        "depth": 2,
        "shots": 1024,
        "contraction": 0.7,
        "bias": 0.0,
        "noise_seed": 11,
    },
    "output": {"dir": ""},
}


def _merge_validate(section: str, defaults: dict, overrides: dict, errors: List[str]) -> dict:
    merged = dict(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            errors.append(f"{section}.{key}: unknown field")
            continue
        default = defaults[key]
        if isinstance(default, bool) != isinstance(value, bool) and isinstance(default, bool):
            errors.append(f"{section}.{key}: expected a boolean, got {value!r}")
            continue
        if isinstance(default, (int, float)) and not isinstance(default, bool):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"{section}.{key}: expected a number, got {value!r}")
                continue
        if isinstance(default, str) and not isinstance(value, str):
            errors.append(f"{section}.{key}: expected a string, got {value!r}")
            continue
        if isinstance(default, list) and not isinstance(value, list):
            errors.append(f"{section}.{key}: expected a list, got {value!r}")
            continue
        merged[key] = value
    return merged


def validate_config(raw: dict) -> dict:
    """Merge a raw config dict over the defaults; raise ConfigError on problems."""
    errors: List[str] = []
    cfg = {}
    experiment = raw.get("experiment", DEFAULT_CONFIG["experiment"])
    if experiment not in EXPERIMENT_NAMES:
        errors.append(f"experiment: must be one of {', '.join(EXPERIMENT_NAMES)}; got {experiment!r}")
    cfg["experiment"] = experiment
    for section, defaults in DEFAULT_CONFIG.items():
        if section == "experiment":
            continue
        overrides = raw.get(section, {})
        if not isinstance(overrides, dict):
            errors.append(f"{section}: expected a table/section")
            overrides = {}
        cfg[section] = _merge_validate(section, defaults, overrides, errors)
    for key in raw:
        if key != "experiment" and key not in DEFAULT_CONFIG:
            errors.append(f"{key}: unknown section")
    if not errors:
        if not cfg["train"]["seeds"]:
            errors.append("train.seeds: must be nonempty")
        if not (0.0 < cfg["data"]["train_fraction"] < 1.0):
            errors.append("data.train_fraction: must lie in (0, 1)")
        if cfg["data"]["variant"] not in ("A", "B", "C"):
            errors.append("data.variant: must be A, B or C")
        elif cfg["data"]["variant"] == "A" and experiment not in ("deviation",):
            errors.append(
                "data.variant: A has only 4 points and cannot be split; use B or C "
                "(the deviation experiment trains on the full variant-A set itself)"
            )
        for s in cfg["sweep"]["shots"]:
            if s != ANALYTIC and (not isinstance(s, int) or s < 1):
                errors.append(f"sweep.shots: entries must be 'analytic' or integers >= 1, got {s!r}")
    if errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
    return cfg


def load_config_file(path: Union[str, Path]) -> dict:
    """Load a TOML (or JSON) experiment config and validate it."""
    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    if path.suffix == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        if "config" in raw and isinstance(raw["config"], dict):
            raw = raw["config"]  # accept a manifest as a config source
    else:
        try:
            import tomllib  # py >= 3.11
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            raw = tomllib.loads(text.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    return validate_config(raw)


def config_for_experiment(name: str) -> dict:
    return validate_config({"experiment": name})


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _data_kwargs(cfg: dict, **overrides) -> dict:
    d = cfg["data"]
    kw = {
        "variant": d["variant"], "sigma": d["sigma"],
        "n_per_cluster": d["n_per_cluster"], "n_total": d["n_total"],
        "threshold_t": d["threshold_t"], "data_seed": d["data_seed"],
        "train_fraction": d["train_fraction"], "stratified": d["stratified"],
    }
    kw.update(overrides)
    return kw


def _spec_with_train_cfg(spec: ModelSpec, train_cfg: dict) -> ModelSpec:
    if spec.kind == "LR":
        lr, epochs = train_cfg["lr_learning_rate"], train_cfg["classical_epochs"]
    elif spec.kind == "MLP":
        lr, epochs = train_cfg["mlp_learning_rate"], train_cfg["classical_epochs"]
    else:
        lr, epochs = train_cfg["vqc_learning_rate"], train_cfg["vqc_epochs"]
    return ModelSpec(
        kind=spec.kind, hidden_units=spec.hidden_units, depth=spec.depth,
        shots=spec.shots, learning_rate=lr, epochs=epochs,
        optimizer=train_cfg["vqc_optimizer"],
    )


def write_summary_csv(result: SweepResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([
            "sweep", "model", "value", "mean_test_acc", "std_test_acc",
            "mean_test_bce", "std_test_bce", "n_seeds",
        ])
        for row in result.rows:
            writer.writerow([
                result.swept_variable, row.model_label, str(row.value),
                fmt_float(row.mean_test_acc), fmt_float(row.std_test_acc),
                fmt_float(row.mean_test_bce), fmt_float(row.std_test_bce),
                str(row.n_seeds),
            ])


def write_grid_csv(grid: DecisionGrid, path: Path) -> None:
    xs, ys = grid.cell_centers()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "f"])
        for iy in range(len(ys)):
            for ix in range(len(xs)):
                writer.writerow([fmt_float(xs[ix]), fmt_float(ys[iy]), fmt_float(grid.scores[iy, ix])])


def read_grid_csv(path: Union[str, Path]) -> DecisionGrid:
    xs_all, ys_all, fs = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for x, y, f in reader:
            xs_all.append(float(x)); ys_all.append(float(y)); fs.append(float(f))
    xs = np.unique(np.array(xs_all))
    ys = np.unique(np.array(ys_all))
    nx, ny = len(xs), len(ys)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    scores = np.array(fs).reshape(ny, nx)
    return DecisionGrid(
        (float(xs[0] - dx / 2), float(xs[-1] + dx / 2)),
        (float(ys[0] - dy / 2), float(ys[-1] + dy / 2)),
        (nx, ny), scores,
    )


def _sweep_outputs(result: SweepResult, out: Path) -> dict:
    write_runs_csv(result.records, out / "runs.csv")
    write_summary_csv(result, out / "summary.csv")
    return {"failures": result.failures}


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def _benchmark_cells(cfg: dict) -> List[SweepCell]:
    specs = [_spec_with_train_cfg(s, cfg["train"]) for s in bench.TABLE_BENCHMARK_SPECS]
    return [
        SweepCell("benchmark", spec.label(), spec, seed, _data_kwargs(cfg))
        for spec in specs
        for seed in cfg["train"]["seeds"]
    ]


def exp_benchmark(cfg: dict, out: Path, jobs: int) -> dict:
    cells = _benchmark_cells(cfg)
    records, failures = run_cells(cells, jobs=jobs)
    write_runs_csv(records, out / "runs.csv")
    result = SweepResult("benchmark", bench._aggregate("benchmark", cells, records), records, failures)
    write_summary_csv(result, out / "summary.csv")
    # Representative learning curves: first seed of every model row.
    seed0 = cfg["train"]["seeds"][0]
    train, test = benchmark_splits(**_data_kwargs(cfg))
    for spec in [_spec_with_train_cfg(s, cfg["train"]) for s in bench.TABLE_BENCHMARK_SPECS]:
        model, curves, _ = bench.train_spec(spec, train, test, seed0)
        write_curves_csv(curves, out / f"curves_{spec.label()}_s{seed0}.csv")
        if spec.kind == "VQC":
            vqc.save_checkpoint(model, out / f"model_{spec.label()}_s{seed0}.json")
        else:
            classical.save_checkpoint(model, out / f"model_{spec.label()}_s{seed0}.json")
    return {"failures": failures}


def _models_sweep_specs(cfg: dict) -> List[ModelSpec]:
    return [_spec_with_train_cfg(s, cfg["train"]) for s in bench.SWEEP_MODEL_SPECS]


def exp_noise_sweep(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_noise(
        sigmas=cfg["sweep"]["sigmas"], specs=_models_sweep_specs(cfg),
        seeds=cfg["train"]["seeds"], n_per_cluster=cfg["data"]["n_per_cluster"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
    )
    return _sweep_outputs(result, out)


def exp_size_sweep(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_size(
        sizes=cfg["sweep"]["sizes"], specs=_models_sweep_specs(cfg),
        seeds=cfg["train"]["seeds"], sigma=cfg["data"]["sigma"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
    )
    return _sweep_outputs(result, out)


def exp_shots_sweep(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_shots(
        shots_values=cfg["sweep"]["shots"], seeds=cfg["train"]["seeds"],
        sigma=cfg["data"]["sigma"], n_per_cluster=cfg["data"]["n_per_cluster"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
        learning_rate=cfg["train"]["vqc_learning_rate"],
        epochs=cfg["train"]["vqc_epochs"], optimizer=cfg["train"]["vqc_optimizer"],
    )
    return _sweep_outputs(result, out)


def exp_seed_sweep(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_seeds(
        seeds=cfg["sweep"]["seeds_extended"], specs=_models_sweep_specs(cfg),
        sigma=cfg["data"]["sigma"], n_per_cluster=cfg["data"]["n_per_cluster"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
    )
    return _sweep_outputs(result, out)


def exp_width_ablation(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_width(
        widths=cfg["sweep"]["widths"], seeds=cfg["train"]["seeds"],
        sigma=cfg["data"]["sigma"], n_per_cluster=cfg["data"]["n_per_cluster"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
    )
    return _sweep_outputs(result, out)


def exp_depth_compare(cfg: dict, out: Path, jobs: int) -> dict:
    specs = [
        _spec_with_train_cfg(ModelSpec("VQC", depth=d, shots=ANALYTIC), cfg["train"])
        for d in (1, 2)
    ]
    cells = [
        SweepCell("L", spec.depth, spec, seed, _data_kwargs(cfg))
        for spec in specs
        for seed in cfg["train"]["seeds"]
    ]
    records, failures = run_cells(cells, jobs=jobs)
    result = SweepResult("L", bench._aggregate("L", cells, records), records, failures)
    return _sweep_outputs(result, out)


def exp_landscape(cfg: dict, out: Path, jobs: int) -> dict:
    lcfg = cfg["landscape"]
    train, test = benchmark_splits(**_data_kwargs(cfg))
    spec = _spec_with_train_cfg(ModelSpec("VQC", depth=lcfg["depth"], shots=ANALYTIC), cfg["train"])
    records = []
    for seed in cfg["train"]["seeds"]:
        model, _, record = bench.train_spec(spec, train, test, seed, f"landscape-L{lcfg['depth']}-s{seed}")
        records.append(record)
        if seed == cfg["train"]["seeds"][0]:
            vqc.save_checkpoint(model, out / f"model_{spec.label()}_s{seed}.json")
            di, dj, bce = loss_landscape_slice(
                model, train, lcfg["axes"][0], lcfg["axes"][1],
                span=lcfg["span"], resolution=lcfg["resolution"],
            )
            with open(out / f"landscape_L{lcfg['depth']}.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["di", "dj", "bce"])
                for a in range(len(di)):
                    for b in range(len(dj)):
                        writer.writerow([fmt_float(di[a]), fmt_float(dj[b]), fmt_float(bce[a, b])])
    write_runs_csv(records, out / "runs.csv")
    return {"failures": []}


def exp_boundary(cfg: dict, out: Path, jobs: int) -> dict:
    gcfg = cfg["grid"]
    region = tuple(tuple(r) for r in gcfg["region"])
    resolution = tuple(gcfg["resolution"])
    train, test = benchmark_splits(**_data_kwargs(cfg))
    save_dataset_csv(train, out / "dataset_train.csv")
    seed0 = cfg["train"]["seeds"][0]
    records = []
    for base in bench.SWEEP_MODEL_SPECS:
        spec = _spec_with_train_cfg(base, cfg["train"])
        model, _, record = bench.train_spec(spec, train, test, seed0, f"boundary-{spec.label()}-s{seed0}")
        records.append(record)
        grid = decision_grid(make_scorer(model), region, resolution)
        write_grid_csv(grid, out / f"grid_{spec.label()}.csv")
        if spec.kind == "VQC":
            vqc.save_checkpoint(model, out / f"model_{spec.label()}_s{seed0}.json")
            shot_grid = decision_grid(
                make_scorer(model, shots=gcfg["shots"], rng=[gcfg["grid_seed"], seed0]),
                region, resolution,
            )
            write_grid_csv(shot_grid, out / f"grid_{spec.label()}_shots{gcfg['shots']}.csv")
        else:
            classical.save_checkpoint(model, out / f"model_{spec.label()}_s{seed0}.json")
    write_runs_csv(records, out / "runs.csv")
    return {"failures": []}


def exp_deviation(cfg: dict, out: Path, jobs: int) -> dict:
    """Deviation pipeline on clean XOR: analytic vs shots vs synthetic grids."""
    dcfg = cfg["deviation"]
    gcfg = cfg["grid"]
    region = tuple(tuple(r) for r in gcfg["region"])
    resolution = tuple(gcfg["resolution"])
    ds = gen_dataset_a()  # trained and evaluated on the 4 canonical points
    spec = _spec_with_train_cfg(ModelSpec("VQC", depth=dcfg["depth"], shots=ANALYTIC), cfg["train"])
    seed0 = cfg["train"]["seeds"][0]
    model, _, record = bench.train_spec(spec, ds, ds, seed0, f"deviation-{spec.label()}-s{seed0}")
    write_runs_csv([record], out / "runs.csv")
    vqc.save_checkpoint(model, out / f"model_{spec.label()}_s{seed0}.json")

    grid_analytic = decision_grid(make_scorer(model), region, resolution)
    grid_shots = decision_grid(
        make_scorer(model, shots=dcfg["shots"], rng=[gcfg["grid_seed"], seed0]),
        region, resolution,
    )
    grid_synth = synthetic_degradation(
        grid_analytic, dcfg["contraction"], dcfg["bias"],
        rng=[dcfg["noise_seed"], seed0], noise_shots=dcfg["shots"],
    )
    write_grid_csv(grid_analytic, out / "grid_analytic.csv")
    write_grid_csv(grid_shots, out / f"grid_shots{dcfg['shots']}.csv")
    write_grid_csv(grid_synth, out / "grid_synthetic.csv")  # synthetic stand-in, not hardware

    xs, ys = grid_analytic.cell_centers()
    for name, other in [(f"shots{dcfg['shots']}", grid_shots), ("synthetic", grid_synth)]:
        report = grid_deviation(grid_analytic, other)
        with open(out / f"deviation_analytic_vs_{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["metric", "value"])
            writer.writerow(["mad", fmt_float(report.mad)])
            writer.writerow(["mse", fmt_float(report.mse)])
        with open(out / f"absdiff_analytic_vs_{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "y", "d"])
            for iy in range(len(ys)):
                for ix in range(len(xs)):
                    writer.writerow([fmt_float(xs[ix]), fmt_float(ys[iy]), fmt_float(report.absdiff[iy, ix])])
        with open(out / f"hist_analytic_vs_{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin_lo", "bin_hi", "analytic", name])
            for i in range(len(report.hist_a)):
                writer.writerow([
                    fmt_float(report.bin_edges[i]), fmt_float(report.bin_edges[i + 1]),
                    str(int(report.hist_a[i])), str(int(report.hist_b[i])),
                ])
    return {"failures": []}


def exp_dataset_c(cfg: dict, out: Path, jobs: int) -> dict:
    result = bench.sweep_threshold(
        thresholds=cfg["sweep"]["thresholds"], specs=_models_sweep_specs(cfg),
        seeds=cfg["train"]["seeds"], n_total=cfg["data"]["n_total"],
        data_seed=cfg["data"]["data_seed"], jobs=jobs,
    )
    extras = _sweep_outputs(result, out)
    # Learning curves at the default threshold for the first seed.
    train, test = benchmark_splits(**_data_kwargs(cfg, variant="C"))
    seed0 = cfg["train"]["seeds"][0]
    for base in _models_sweep_specs(cfg):
        _, curves, _ = bench.train_spec(base, train, test, seed0)
        write_curves_csv(curves, out / f"curves_{base.label()}_s{seed0}.csv")
    return extras


EXPERIMENT_RUNNERS = {
    "benchmark": exp_benchmark,
    "noise-sweep": exp_noise_sweep,
    "size-sweep": exp_size_sweep,
    "shots-sweep": exp_shots_sweep,
    "seed-sweep": exp_seed_sweep,
    "width-ablation": exp_width_ablation,
    "depth-compare": exp_depth_compare,
    "landscape": exp_landscape,
    "boundary": exp_boundary,
    "deviation": exp_deviation,
    "dataset-c": exp_dataset_c,
}


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def run_experiment(cfg: dict, out_dir: Union[str, Path], jobs: int = 1) -> Path:
    """Execute one experiment; returns the output directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    extras = EXPERIMENT_RUNNERS[cfg["experiment"]](cfg, out, jobs)
    try:
        import numba

        numba_version = numba.__version__
    except ImportError:  # pragma: no cover
        numba_version = None
    manifest = {
        "experiment": cfg["experiment"],
        "config": cfg,
        "config_sha256": config_hash(cfg),
        "package_version": __version__,
        "numpy_version": np.__version__,
        "numba_version": numba_version,
        "backend": kernels.active_backend(),
        "seeds": cfg["train"]["seeds"],
        "failures": extras.get("failures", []),
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    render_dir(out)
    return out


# ---------------------------------------------------------------------------
# Rendering (pure function of the CSVs in a directory)
# ---------------------------------------------------------------------------

def render_dir(artifact_dir: Union[str, Path]) -> int:
    """Render every renderable CSV in the directory to SVG; returns a count."""
    root = Path(artifact_dir)
    rendered = 0
    for path in sorted(root.glob("grid_*.csv")):
        grid = read_grid_csv(path)
        svg.heatmap_svg(grid, path.with_suffix(".svg"), title=path.stem)
        rendered += 1
    for path in sorted(root.glob("absdiff_*.csv")):
        xs, ys, z = _read_matrix_csv(path)
        svg.matrix_heatmap_svg(xs, ys, z, path.with_suffix(".svg"),
                               title=path.stem, xlabel="x1", ylabel="x2")
        rendered += 1
    for path in sorted(root.glob("hist_*.csv")):
        edges, la, lb, ha, hb = _read_hist_csv(path)
        svg.histogram_pair_svg(edges, ha, hb, path.with_suffix(".svg"), la, lb, title=path.stem)
        rendered += 1
    for path in sorted(root.glob("landscape_*.csv")):
        xs, ys, z = _read_matrix_csv(path)
        svg.matrix_heatmap_svg(xs, ys, z, path.with_suffix(".svg"),
                               title=path.stem, xlabel="theta_i offset",
                               ylabel="theta_j offset", n_contours=7)
        rendered += 1
    for path in sorted(root.glob("curves_*.csv")):
        rendered += _render_curves(path)
    summary = root / "summary.csv"
    if summary.exists():
        rendered += _render_summary(summary)
    return rendered


def _read_matrix_csv(path: Path):
    xs_all, ys_all, zs = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for x, y, z in reader:
            xs_all.append(float(x)); ys_all.append(float(y)); zs.append(float(z))
    xs = np.unique(np.array(xs_all))
    ys = np.unique(np.array(ys_all))
    # Rows iterate the first column slower? grid files iterate y outer, x inner;
    # landscape files iterate di outer, dj inner. Reshape by detected stride.
    if len(xs_all) > 1 and xs_all[0] == xs_all[1]:
        z = np.array(zs).reshape(len(xs), len(ys)).T  # first column outer
    else:
        z = np.array(zs).reshape(len(ys), len(xs))
    return xs, ys, z


def _read_hist_csv(path: Path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    edges = np.array([float(r[0]) for r in rows] + [float(rows[-1][1])])
    ha = np.array([int(r[2]) for r in rows])
    hb = np.array([int(r[3]) for r in rows])
    return edges, header[2], header[3], ha, hb


def _render_curves(path: Path) -> int:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = [[float(v) for v in r] for r in reader]
    if not rows:
        return 0
    arr = np.array(rows)
    epochs = arr[:, 0].astype(int)
    step = max(1, len(epochs) // 200)  # thin long runs for readable SVGs
    sl = slice(0, None, step)
    svg.line_chart_svg(
        list(epochs[sl]),
        {"train BCE": (arr[sl, 1], None), "test BCE": (arr[sl, 2], None)},
        path.with_name(path.stem + "_bce.svg"),
        title=path.stem, xlabel="epoch", ylabel="BCE",
    )
    svg.line_chart_svg(
        list(epochs[sl]),
        {"train acc": (arr[sl, 3], None), "test acc": (arr[sl, 4], None)},
        path.with_name(path.stem + "_acc.svg"),
        title=path.stem, xlabel="epoch", ylabel="accuracy",
    )
    return 2


def _render_summary(path: Path) -> int:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = list(reader)
    if not rows:
        return 0
    sweep = rows[0][0]
    values: List[str] = []
    models: List[str] = []
    for r in rows:
        if r[2] not in values:
            values.append(r[2])
        if r[1] not in models:
            models.append(r[1])
    by = {(r[1], r[2]): r for r in rows}
    count = 0
    for metric, mean_col, std_col in [("acc", 3, 4), ("bce", 5, 6)]:
        series = {}
        for m in models:
            entries = [by.get((m, v)) for v in values]
            if any(e is None for e in entries):
                continue
            series[m] = (
                [float(e[mean_col]) for e in entries],
                [float(e[std_col]) for e in entries],
            )
        if not series:
            continue
        svg.line_chart_svg(
            values, series, path.with_name(f"sweep_{metric}.svg"),
            title=f"test {metric} vs {sweep}", xlabel=sweep, ylabel=f"test {metric}",
        )
        count += 1
    return count
