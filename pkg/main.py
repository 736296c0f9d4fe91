import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from app.common.config import config, parse_model
from app.common.exceptions import ConfigurationError, FineGrainError
from app.common.logger import define_log_level, logger
from app.data import SynthConfig, generate, synthesize, write_dataset
from app.harness import (
    Bounds,
    emit_boundary_grid,
    emit_loss_curves,
    emit_tau_sweep,
    load_experiment,
    run_experiment,
    write_table,
)
from app.labeler import label_report
from app.model import load_checkpoint


def parse_floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigurationError(f"Expected comma-separated numbers, got '{text}'") from e


def output_dir(args: argparse.Namespace) -> Path:
    return Path(args.out) if args.out else config.paths.workspace_root


def require_config(args: argparse.Namespace) -> Path:
    if not args.config:
        raise ConfigurationError(f"'{args.command}' needs --config <experiment.toml>")
    return Path(args.config)


def cmd_run(args: argparse.Namespace) -> None:
    start_time = time.time()
    table = run_experiment(require_config(args), args.out, args.seed_override)
    for row in table.rows:
        logger.info(
            f"{row.method:<24} {row.metric:<16} {row.report.mean:.4f} +- {row.report.std:.4f}"
        )
    logger.info(f"Experiment finished in {time.time() - start_time:.2f} seconds")


def cmd_losscurves(args: argparse.Namespace) -> None:
    table = emit_loss_curves(parse_floats(args.taus), args.step)
    path = write_table(table.to_csv(), output_dir(args) / "loss_curves.csv")
    logger.info(f"Wrote {len(table.rows)} loss-curve rows to {path}")


def cmd_boundary(args: argparse.Namespace) -> None:
    bounds = parse_floats(args.bounds)
    if len(bounds) != 4:
        raise ConfigurationError(f"--bounds needs x_min,x_max,y_min,y_max, got '{args.bounds}'")
    x_min, x_max, y_min, y_max = bounds
    grid = emit_boundary_grid(
        load_checkpoint(Path(args.checkpoint)),
        Bounds(x_min=x_min, x_max=x_max, y_min=y_min, y_max=y_max),
        args.resolution,
    )
    path = write_table(grid.to_csv(), output_dir(args) / "boundary.csv")
    logger.info(f"Wrote {len(grid.p_pos)} boundary points to {path}")


def cmd_tausweep(args: argparse.Namespace) -> None:
    cfg = load_experiment(require_config(args), args.out, args.seed_override)
    table = emit_tau_sweep(cfg, parse_floats(args.taus))
    for row in table.rows:
        logger.info(f"{row.method:<24} {row.report.mean:.4f} +- {row.report.std:.4f}")


def cmd_label(args: argparse.Namespace) -> None:
    text = Path(args.file).read_text(encoding="utf-8") if args.file else args.text
    if not text:
        raise ConfigurationError("'label' needs report text or --file")
    label = label_report(text)
    print(label.subcategory.value)
    for hit in label.hits:
        print(f"  {hit.surface} -> {hit.stem} ({hit.dimension.value}, {hit.polarity.value})")


def cmd_gen(args: argparse.Namespace) -> None:
    if args.config:
        cfg = load_experiment(Path(args.config))
        if cfg.data.synth is None:
            raise ConfigurationError(f"{args.config}: no [data.synth] table to generate from")
        synth, offset = cfg.data.synth, cfg.data.val_seed_offset
    else:
        synth, offset = SynthConfig(), 1000
    if args.seed_override is not None:
        synth = synth.model_copy(update={"seed": args.seed_override})
    if args.noise_rate is not None:
        synth = parse_model(
            SynthConfig, {**synth.model_dump(), "noise_rate": args.noise_rate}, "--noise-rate"
        )

    out = output_dir(args)
    train_set = synthesize(synth)
    val_set = generate(synth.model_copy(update={"seed": synth.seed + offset, "noise_rate": 0.0}))
    write_dataset(train_set, out / "train.jsonl")
    write_dataset(val_set, out / "val.jsonl")
    logger.info(f"Wrote {len(train_set)} train and {len(val_set)} val samples to {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finegrain",
        description="Fine-granularity robust training experiments on synthetic report-labeled data",
    )
    parser.add_argument("--config", help="Experiment TOML file")
    parser.add_argument("--out", help="Output directory (overrides the config)")
    parser.add_argument("--seed-override", type=int, help="Run a single seed instead of the config's list")
    parser.add_argument("--log-level", default=None, help="Console log level (default from config.toml)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("run", help="Train every method x seed and write results.csv").set_defaults(
        handler=cmd_run
    )

    curves = sub.add_parser("losscurves", help="CE and PCE values on a confidence grid")
    curves.add_argument("--taus", default="0.1,0.3,0.5,0.7")
    curves.add_argument("--step", type=float, default=0.001)
    curves.set_defaults(handler=cmd_losscurves)

    boundary = sub.add_parser("boundary", help="p_pos lattice of a 2-D checkpoint")
    boundary.add_argument("--checkpoint", required=True)
    boundary.add_argument("--bounds", default="-4,4,-3,3", help="x_min,x_max,y_min,y_max")
    boundary.add_argument("--resolution", type=int, default=101)
    boundary.set_defaults(handler=cmd_boundary)

    sweep = sub.add_parser("tausweep", help="U-Ones baseline plus PU-RM for each tau")
    sweep.add_argument("--taus", default="0.1,0.2,0.3,0.4,0.5")
    sweep.set_defaults(handler=cmd_tausweep)

    label = sub.add_parser("label", help="Classify one report as atypical or typical")
    label.add_argument("text", nargs="?", default="")
    label.add_argument("--file", help="Read the report from a file")
    label.set_defaults(handler=cmd_label)

    gen = sub.add_parser("gen", help="Write synthetic train.jsonl and val.jsonl")
    gen.add_argument("--noise-rate", type=float, default=None)
    gen.set_defaults(handler=cmd_gen)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    define_log_level(print_level=args.log_level or config.logging.print_level)
    try:
        args.handler(args)
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user.")
        return 130
    except FineGrainError as e:
        logger.error(f"Error: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
