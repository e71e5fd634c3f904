"""Command-line front end: screen, simulate, evaluate, convert, bench.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
Every subcommand writes a machine-readable result file and logs one line;
wall-clock timing goes to a separate file so result files stay
byte-identical across repeated identical invocations.
"""

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import dataio, estimators, evaluation, screening, simulation
from .errors import DataFormatError, DegenerateInputError, HdmiError
from .kde import Kernel


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _log(msg):
    print(f"hdmi: {msg}", file=sys.stderr)


def _default_workers():
    env = os.environ.get("HDMI_WORKERS")
    return int(env) if env else 1


def _load_dataset(path):
    if path.endswith(".csv"):
        return dataio.read_csv(path)
    return dataio.open_binary(path)


def _outcome_ref(raw):
    try:
        return int(raw)
    except ValueError:
        return raw


def _build_parser():
    top = _Parser(prog="hdmi", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("screen", help="score every feature against an outcome")
    sc.add_argument("--input", required=True)
    sc.add_argument("--outcome-col", required=True)
    sc.add_argument("--outcome-type", choices=("continuous", "binary"),
                    default="continuous")
    sc.add_argument("--method", choices=estimators.METHODS,
                    default="fftkde")
    sc.add_argument("--exclude", action="append", default=[])
    sc.add_argument("--workers", type=int, default=None)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--grid-size", type=int, default=None)
    sc.add_argument("--k", type=int, default=3)
    sc.add_argument("--bins", type=int, default=None)
    sc.add_argument("--kernel", default="epanechnikov")
    sc.add_argument("--output", required=True)
    sc.add_argument("--json", dest="json_out", default=None)

    sm = sub.add_parser("simulate", help="simulate outcomes from a design matrix")
    sm.add_argument("--input", required=True)
    sm.add_argument("--p-true", type=int, required=True)
    sm.add_argument("--mode", choices=("linear", "nonlinear"), default="linear")
    sm.add_argument("--outcome", choices=("continuous", "binary-original",
                                          "binary-translated"),
                    default="continuous")
    sm.add_argument("--snr", type=float, default=3.0)
    sm.add_argument("--toeplitz-rho", type=float, default=0.6)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--output", required=True)
    sm.add_argument("--truth-output", default=None)

    ev = sub.add_parser("evaluate", help="AUROC of a scores file against truth")
    ev.add_argument("--scores", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--output", required=True)

    cv = sub.add_parser("convert", help="CSV to binary matrix conversion")
    cv.add_argument("--input", required=True)
    cv.add_argument("--output", required=True)

    bn = sub.add_parser("bench", help="screening wall-time by feature fraction")
    bn.add_argument("--input", required=True)
    bn.add_argument("--outcome-col", required=True)
    bn.add_argument("--outcome-type", choices=("continuous", "binary"),
                    default="continuous")
    bn.add_argument("--methods", default="fftkde,binning,knn,pearson")
    bn.add_argument("--fractions", default="0.25,0.5,1.0")
    bn.add_argument("--workers", type=int, default=None)
    bn.add_argument("--replications", type=int, default=3)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--output", required=True)
    return top


def _cmd_screen(args):
    dataset = _load_dataset(args.input)
    workers = args.workers if args.workers is not None else _default_workers()
    config = screening.ScreeningConfig(
        method=args.method,
        outcome_kind=args.outcome_type,
        outcome_column=_outcome_ref(args.outcome_col),
        exclude=tuple(args.exclude),
        workers=workers,
        seed=args.seed,
        kernel=Kernel.parse(args.kernel),
        grid_size=args.grid_size,
        k=args.k,
        bins=args.bins,
    )
    report = screening.screen(dataset, config)
    dataio.write_report_csv(report, args.output)
    dataio.write_timing_json(report, args.output + ".timing.json")
    if args.json_out:
        dataio.write_report_json(report, args.json_out)
    _log(f"screened {len(report.scores)} features "
         f"({config.method}, {report.workers_used} workers) "
         f"in {report.wall_seconds:.2f}s -> {args.output}")
    return 0


def _cmd_simulate(args):
    dataset = _load_dataset(args.input)
    spec = simulation.SimulationSpec(
        p_true=args.p_true,
        mode=args.mode,
        outcome=args.outcome.replace("-", "_"),
        snr=args.snr,
        toeplitz_rho=args.toeplitz_rho,
        seed=args.seed,
    )
    sim = simulation.simulate(dataset, spec)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "y"])
        for i, v in enumerate(sim.y):
            w.writerow([i, repr(float(v))])
    truth_path = args.truth_output or args.output + ".truth.json"
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump({
            "support": [int(j) for j in sim.true_support],
            "beta_true": [float(b) for b in sim.beta_true],
            "sigma_true": sim.sigma_true,
            "n_features": dataset.cols,
            "spec": {"p_true": spec.p_true, "mode": spec.mode,
                     "outcome": spec.outcome, "snr": spec.snr,
                     "toeplitz_rho": spec.toeplitz_rho, "seed": spec.seed},
        }, fh, indent=1)
        fh.write("\n")
    _log(f"simulated {len(sim.y)} outcomes (p_true={spec.p_true}, "
         f"{spec.mode}/{spec.outcome}) -> {args.output}")
    return 0


def _load_truth_labels(path, score_rows):
    indices = [r["index"] for r in score_rows]
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            truth = json.load(fh)
        support = set(truth["support"])
        return np.array([1.0 if i in support else 0.0 for i in indices])
    by_index = {}
    with open(path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            by_index[int(row["index"])] = float(row["label"])
    try:
        return np.array([by_index[i] for i in indices])
    except KeyError as missing:
        raise DataFormatError(f"{path}: no label for feature {missing}") from None


def _cmd_evaluate(args):
    rows = dataio.read_report_csv(args.scores)
    labels = _load_truth_labels(args.truth, rows)
    scores = np.array([r["score"] for r in rows])
    value = evaluation.auroc(scores, labels)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["auroc", "n_features", "n_true"])
        w.writerow([repr(value), len(scores), int(labels.sum())])
    _log(f"AUROC {value:.4f} over {len(scores)} features -> {args.output}")
    return 0


def _cmd_convert(args):
    header = dataio.convert_to_binary(args.input, args.output)
    _log(f"wrote {header.rows}x{header.cols} binary matrix -> {args.output}")
    return 0


def _cmd_bench(args):
    fractions = []
    for tok in args.fractions.split(","):
        f = float(tok)
        if not 0 < f <= 1:
            raise _UsageError(f"fraction {f} outside (0, 1]")
        fractions.append(f)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in estimators.METHODS:
            raise _UsageError(f"unknown method {m!r}")
    if args.replications < 1:
        raise _UsageError("replications must be >= 1")
    dataset = _load_dataset(args.input)
    workers = args.workers if args.workers is not None else _default_workers()
    outcome = _outcome_ref(args.outcome_col)
    outcome_j = dataset.column_index(outcome)
    feature_cols = [j for j in range(dataset.cols) if j != outcome_j]
    rows = []
    for method in methods:
        for frac in fractions:
            take = max(1, int(np.ceil(frac * len(feature_cols))))
            subset = dataset.select([outcome_j] + feature_cols[:take])
            config = screening.ScreeningConfig(
                method=method, outcome_kind=args.outcome_type,
                outcome_column=0, workers=workers, seed=args.seed)
            times = []
            for _ in range(args.replications):
                t0 = time.perf_counter()
                screening.screen(subset, config)
                times.append(time.perf_counter() - t0)
            times = np.array(times)
            half = (1.96 * times.std(ddof=1) / np.sqrt(len(times))
                    if len(times) > 1 else 0.0)
            rows.append((method, frac, take, times.mean(), half, len(times)))
            _log(f"bench {method} fraction={frac} ({take} features): "
                 f"{times.mean():.2f}s")
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "fraction", "n_features", "mean_seconds",
                    "ci_half_width", "replications"])
        for r in rows:
            w.writerow([r[0], r[1], r[2], repr(float(r[3])),
                        repr(float(r[4])), r[5]])
    _log(f"bench table -> {args.output}")
    return 0


_COMMANDS = {
    "screen": _cmd_screen,
    "simulate": _cmd_simulate,
    "evaluate": _cmd_evaluate,
    "convert": _cmd_convert,
    "bench": _cmd_bench,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        _log(f"usage error: {e}")
        return 1
    except FileNotFoundError as e:
        _log(f"data error: {e}")
        return 2
    except DataFormatError as e:
        _log(f"data error: {e}")
        return 2
    except DegenerateInputError as e:
        _log(f"numeric failure: {e}")
        return 3
    except HdmiError as e:
        _log(f"error: {e}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
