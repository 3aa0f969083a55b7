"""Command-line workflow: ``train``, ``evaluate``, ``sweep`` and ``pipeline``."""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import fileio
from .errors import (DatasetParseError, DegenerateDataError, DuplicateKeyError,
                     LookupMissError, Q18RangeError)
from .metrics import (DEFAULT_TOLERANCE_MM, error_curve, linearity, raw_sensor_linearity,
                      raw_sensor_pairs)
from .model import ExpansionSpec, forward_batch
from .pipeline import PipelineConfig, build_lookup, pipeline_batch, trace_record
from .training import (DEFAULT_ETA, DEFAULT_MAX_EPOCHS, DEFAULT_MSE_THRESHOLD,
                       TrainingConfig, train_lms)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4
EXIT_NOT_CONVERGED = 5

PIPELINE_BOUND = 0.05
SWEEP_TOLERANCES = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)


def _tolerance(value) -> float:
    t = float(value)
    if not (math.isfinite(t) and t > 0):
        raise argparse.ArgumentTypeError(f"tolerance must be positive and finite, got {value}")
    return t


def _int_list(text):
    try:
        vals = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text):
    return [_tolerance(t) for t in str(text).split(",") if t.strip()]


def _training_summary(config, trace):
    return {
        "eta": config.eta,
        "max_epochs": config.max_epochs,
        "mse_threshold": config.mse_threshold,
        "shuffle": config.shuffle,
        "seed": config.rng_seed,
        "epochs_run": trace.epochs_run,
        "converged": trace.converged,
        "final_mse": trace.final_mse,
    }


def cmd_train(dataset, harmonics=25, eta=DEFAULT_ETA, max_epochs=DEFAULT_MAX_EPOCHS,
              threshold=DEFAULT_MSE_THRESHOLD, out_model="model.json", report=None,
              shuffle=False, seed=0, tolerance=DEFAULT_TOLERANCE_MM, out=sys.stdout) -> int:
    data = fileio.load_dataset(dataset)
    config = TrainingConfig(eta=eta, max_epochs=max_epochs, mse_threshold=threshold,
                            shuffle=shuffle, rng_seed=seed)
    model, trace = train_lms(data, ExpansionSpec(harmonics), config)
    summary = _training_summary(config, trace)
    fileio.save_model(model, out_model, training=summary)
    lin = linearity(forward_batch(data, model), tolerance)
    if report:
        fileio.save_report({
            "kind": "convergence",
            "harmonics": harmonics,
            "width": model.spec.width,
            "training": summary,
            "linearity": fileio.linearity_summary(lin),
            "mse_per_epoch": fileio.table(["epoch", "mse"],
                                          [[k + 1, m] for k, m in enumerate(trace.mse_per_epoch)]),
        }, report)
    print(f"epochs run: {trace.epochs_run}", file=out)
    print(f"final MSE: {trace.final_mse:.6e}", file=out)
    print(f"converged: {'yes' if trace.converged else 'no'}", file=out)
    print(f"linearity: {lin}", file=out)
    return EXIT_OK if trace.converged else EXIT_NOT_CONVERGED


def cmd_evaluate(dataset, model=None, tolerance=DEFAULT_TOLERANCE_MM, report=None,
                 raw=False, out=sys.stdout) -> int:
    """Linearity of a trained model, or of the bare sensor with ``raw=True``."""
    tolerance = _tolerance(tolerance)
    data = fileio.load_dataset(dataset)
    if raw:
        pairs = raw_sensor_pairs(data)
        lin = raw_sensor_linearity(data, tolerance)
        mode = "raw"
    else:
        if model is None:
            raise ValueError("a model file is required unless raw mode is selected")
        pairs = forward_batch(data, fileio.load_model(model))
        lin = linearity(pairs, tolerance)
        mode = "model"
    if report:
        fileio.save_report({
            "kind": "linearity",
            "mode": mode,
            "linearity": fileio.linearity_summary(lin),
            "points": fileio.linearity_table(lin, data.displacements, data.voltages,
                                             [p[1] for p in pairs]),
        }, report)
    print(f"{mode} linearity: {lin}", file=out)
    return EXIT_OK


def cmd_sweep(dataset, harmonics_list=(5, 12, 25, 30), eta=DEFAULT_ETA,
              max_epochs=DEFAULT_MAX_EPOCHS, threshold=DEFAULT_MSE_THRESHOLD,
              tolerance=DEFAULT_TOLERANCE_MM, tolerances=SWEEP_TOLERANCES, report=None,
              shuffle=False, seed=0, out=sys.stdout) -> int:
    """Train one model per harmonic count and tabulate linearity against basis width."""
    tolerance = _tolerance(tolerance)
    data = fileio.load_dataset(dataset)
    config = TrainingConfig(eta=eta, max_epochs=max_epochs, mse_threshold=threshold,
                            shuffle=shuffle, rng_seed=seed)
    rows, sens_cols = [], {}
    for k in harmonics_list:
        spec = ExpansionSpec(k)
        model, trace = train_lms(data, spec, config)
        pairs = forward_batch(data, model)
        lin = linearity(pairs, tolerance)
        rows.append([spec.width, k, lin.percent_linear, trace.epochs_run, trace.converged,
                     trace.final_mse])
        sens_cols[spec.width] = [linearity(pairs, t).percent_linear for t in tolerances]
    widths = [r[0] for r in rows]
    sensitivity = [[t] + [sens_cols[w][i] for w in widths] for i, t in enumerate(tolerances)]
    if report:
        fileio.save_report({
            "kind": "sweep",
            "tolerance_mm": tolerance,
            "training": {"eta": eta, "max_epochs": max_epochs, "mse_threshold": threshold,
                         "shuffle": shuffle, "seed": seed},
            "results": fileio.table(["width", "harmonics", "percent_linear", "epochs_run",
                                     "converged", "final_mse"], rows),
            "tolerance_sensitivity": fileio.table(
                ["tolerance_mm"] + [f"percent_linear_P{w}" for w in widths], sensitivity),
        }, report)
    print(f"{'P':>4} {'K':>4} {'linear %':>9} {'epochs':>7} {'conv':>5} {'final MSE':>11}", file=out)
    for w, k, pct, ep, conv, mse in rows:
        print(f"{w:>4} {k:>4} {pct:>9.2f} {ep:>7} {str(conv):>5} {mse:>11.3e}", file=out)
    return EXIT_OK


def cmd_pipeline(dataset, model, traces="traces.json", report=None, out=sys.stdout) -> int:
    """Run every dataset voltage through the Q18 datapath and compare with float64."""
    data = fileio.load_dataset(dataset)
    flann = fileio.load_model(model)
    config = PipelineConfig.from_model(flann)
    lut = build_lookup(data)
    pairs, tr = pipeline_batch(data, config, lut)
    reference = forward_batch(data, flann)
    curve = error_curve(reference, pairs)
    fileio.save_traces([trace_record(t) for t in tr], traces)
    if report:
        rows = [[x, float(v), r, p, e] for (x, r), (_, p), (_, e), v
                in zip(reference, pairs, curve.points, data.voltages)]
        fileio.save_report({
            "kind": "pipeline_error",
            "bound": PIPELINE_BOUND,
            "max_abs_error": curve.max_abs_error,
            "max_abs_interior_error": curve.max_abs_interior_error,
            "within_bound": curve.max_abs_interior_error <= PIPELINE_BOUND,
            "points": fileio.table(["displacement_mm", "voltage_v", "reference_mm",
                                    "pipeline_mm", "error_mm"], rows),
        }, report)
    print(f"max |error|: {curve.max_abs_error:.4f} mm", file=out)
    print(f"max |error| (interior): {curve.max_abs_interior_error:.4f} mm "
          f"(bound {PIPELINE_BOUND})", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvdt-flann", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common_training(sp):
        sp.add_argument("--eta", type=float, default=DEFAULT_ETA, help="LMS learning rate")
        sp.add_argument("--max-epochs", type=int, default=DEFAULT_MAX_EPOCHS)
        sp.add_argument("--threshold", type=float, default=DEFAULT_MSE_THRESHOLD,
                        help="stop once the epoch squared error falls below this")
        sp.add_argument("--shuffle", action="store_true", help="shuffle samples every epoch")
        sp.add_argument("--seed", type=int, default=0)

    dataset_help = "dataset CSV path or bundled fixture name (lvdt_table1)"

    sp = sub.add_parser("train", help="train a model with LMS")
    sp.add_argument("--dataset", default="lvdt_table1", help=dataset_help)
    sp.add_argument("--harmonics", type=int, default=25, help="K; the basis has 2K+1 terms")
    common_training(sp)
    sp.add_argument("--tolerance", type=_tolerance, default=DEFAULT_TOLERANCE_MM)
    sp.add_argument("--out-model", required=True)
    sp.add_argument("--report", help="convergence report (JSON)")

    sp = sub.add_parser("evaluate", help="linearity of a model or of the raw sensor")
    sp.add_argument("--dataset", default="lvdt_table1", help=dataset_help)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--model")
    g.add_argument("--raw", action="store_true", help="evaluate the uncompensated sensor")
    sp.add_argument("--tolerance", type=_tolerance, default=DEFAULT_TOLERANCE_MM)
    sp.add_argument("--report")

    sp = sub.add_parser("sweep", help="linearity against basis width")
    sp.add_argument("--dataset", default="lvdt_table1", help=dataset_help)
    sp.add_argument("--harmonics", type=_int_list, default=[5, 12, 25, 30],
                    help="comma-separated K values")
    common_training(sp)
    sp.add_argument("--tolerance", type=_tolerance, default=DEFAULT_TOLERANCE_MM)
    sp.add_argument("--tolerances", type=_float_list, default=list(SWEEP_TOLERANCES),
                    help="tolerance grid for the sensitivity table")
    sp.add_argument("--report")

    sp = sub.add_parser("pipeline", help="run the Q18 datapath emulation")
    sp.add_argument("--dataset", default="lvdt_table1", help=dataset_help)
    sp.add_argument("--model", required=True)
    sp.add_argument("--traces", required=True, help="golden trace output (JSON)")
    sp.add_argument("--report", help="error curve report (JSON)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            return cmd_train(args.dataset, args.harmonics, args.eta, args.max_epochs,
                             args.threshold, args.out_model, args.report, args.shuffle,
                             args.seed, args.tolerance)
        if args.command == "evaluate":
            return cmd_evaluate(args.dataset, args.model, args.tolerance, args.report, args.raw)
        if args.command == "sweep":
            return cmd_sweep(args.dataset, args.harmonics, args.eta, args.max_epochs,
                             args.threshold, args.tolerance, args.tolerances, args.report,
                             args.shuffle, args.seed)
        if args.command == "pipeline":
            return cmd_pipeline(args.dataset, args.model, args.traces, args.report)
    except (DatasetParseError, json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        if isinstance(exc, LookupMissError):
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateDataError, DuplicateKeyError, Q18RangeError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
