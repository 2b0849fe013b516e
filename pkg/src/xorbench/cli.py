"""Command line interface.

Subcommands:

    xorbench run [CONFIG|NAME] [--config F] [--out DIR] [--jobs N]
                 [--seeds 0,1,...] [--shots K|analytic] [--stratified]
    xorbench render ARTIFACT_DIR
    xorbench verify
    xorbench gen-data --variant A|B|C [...] --out DIR

A bare experiment name (e.g. ``xorbench run benchmark``) runs that
experiment with all defaults; a path runs the config file (TOML, or JSON /
a manifest.json from a previous run). The default output root is
$XORBENCH_OUT or ./xorbench-out, with one subdirectory per experiment.

Exit codes: 0 success (including recorded per-cell training divergences),
1 failed verification checks, 2 configuration errors, 3 I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .data import gen_dataset_a, gen_dataset_b, gen_dataset_c, save_dataset_csv
from .experiments import (
    EXPERIMENT_NAMES, OUTPUT_ROOT_ENV, ConfigError, config_for_experiment,
    load_config_file, render_dir, run_experiment,
)
from .verify import run_verification


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xorbench", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config file or by name")
    run_p.add_argument("target", nargs="?", default=None,
                       help="config file path or experiment name "
                            f"({', '.join(EXPERIMENT_NAMES)})")
    run_p.add_argument("--config", help="config file (alternative to the positional form)")
    run_p.add_argument("--out", help="output directory")
    run_p.add_argument("--jobs", type=int, default=1, help="parallel training workers")
    run_p.add_argument("--seeds", help="comma-separated model seeds, overrides the config")
    run_p.add_argument("--shots", help="override sweep shots list, e.g. 'analytic,128,1024'")
    run_p.add_argument("--stratified", action="store_true",
                       help="stratify the train/test split by class")

    render_p = sub.add_parser("render", help="render SVGs from a run's output directory")
    render_p.add_argument("artifact_dir")

    sub.add_parser("verify", help="run the fast property suite")

    gen_p = sub.add_parser("gen-data", help="write a dataset CSV plus provenance JSON")
    gen_p.add_argument("--variant", choices=["A", "B", "C"], required=True)
    gen_p.add_argument("--sigma", type=float, default=0.10)
    gen_p.add_argument("--n-per-cluster", type=int, default=100)
    gen_p.add_argument("--n-total", type=int, default=400)
    gen_p.add_argument("--threshold-t", type=float, default=0.5)
    gen_p.add_argument("--seed", type=int, default=42)
    gen_p.add_argument("--out", help="output directory")
    return parser


def _default_out_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "xorbench-out"))


def _cmd_run(args) -> int:
    target = args.config or args.target
    if target is None:
        print("run: provide a config file or an experiment name", file=sys.stderr)
        return 2
    try:
        if Path(target).exists():
            cfg = load_config_file(target)
        elif target in EXPERIMENT_NAMES:
            cfg = config_for_experiment(target)
        else:
            print(f"run: {target!r} is neither a config file nor an experiment name",
                  file=sys.stderr)
            return 2
        if args.seeds is not None:
            cfg["train"]["seeds"] = [int(s) for s in args.seeds.split(",") if s != ""]
            if not cfg["train"]["seeds"]:
                raise ConfigError("train.seeds: must be nonempty")
        if args.shots is not None:
            cfg["sweep"]["shots"] = [
                s if s == "analytic" else int(s) for s in args.shots.split(",")
            ]
        if args.stratified:
            cfg["data"]["stratified"] = True
    except ConfigError as exc:
        print(f"run: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"run: bad flag value: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out) if args.out else _default_out_root() / cfg["experiment"]
    try:
        out = run_experiment(cfg, out_dir, jobs=max(1, args.jobs))
    except OSError as exc:
        print(f"run: I/O failure: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {out}")
    return 0


def _cmd_render(args) -> int:
    root = Path(args.artifact_dir)
    if not root.is_dir():
        print(f"render: {root} is not a directory", file=sys.stderr)
        return 2
    try:
        count = render_dir(root)
    except OSError as exc:
        print(f"render: I/O failure: {exc}", file=sys.stderr)
        return 3
    if count == 0:
        print(f"render: nothing renderable in {root}", file=sys.stderr)
        return 2
    print(f"rendered {count} SVG file(s) in {root}")
    return 0


def _cmd_verify() -> int:
    results = run_verification()
    failed = [name for name, ok, _ in results if not ok]
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def _cmd_gen_data(args) -> int:
    try:
        if args.variant == "A":
            ds = gen_dataset_a()
        elif args.variant == "B":
            ds = gen_dataset_b(args.sigma, args.n_per_cluster, args.seed)
        else:
            ds = gen_dataset_c(args.n_total, args.threshold_t, args.seed)
    except ValueError as exc:
        print(f"gen-data: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out) if args.out else _default_out_root() / "datasets"
    name = {
        "A": "dataset_A",
        "B": f"dataset_B_sigma{args.sigma}_n{args.n_per_cluster}_seed{args.seed}",
        "C": f"dataset_C_t{args.threshold_t}_n{args.n_total}_seed{args.seed}",
    }[args.variant]
    try:
        path = out_dir / f"{name}.csv"
        save_dataset_csv(ds, path)
    except OSError as exc:
        print(f"gen-data: I/O failure: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "render":
        return _cmd_render(args)
    if args.command == "verify":
        return _cmd_verify()
    return _cmd_gen_data(args)


if __name__ == "__main__":
    sys.exit(main())
