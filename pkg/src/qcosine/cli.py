"""Command-line entry point.

Subcommands: classify, knn-classify, verify, export-qasm, example.
Datasets are CSV (d feature columns then one label column in {-1,+1},
optional header), reports are JSON on stdout (optionally mirrored to a
file), and ``--figures DIR`` additionally renders PNG figures.

Exit codes: 0 success, 1 usage, 2 data, 3 numerical/degenerate,
4 internal. The default seed comes from $QCOSINE_SEED (else 0).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import builtin, classifier, qknn, verify
from .circuits import build_example_circuits, export_qasm
from .classifier import SamplingConfig
from .encoding import DataVector, TrainingSet
from .errors import (
    DataError,
    DegenerateSimilarityError,
    InsufficientShotsError,
    QuantumCosineError,
    StateNormError,
)
from .oracle import classical_classify
from .qknn import KnnConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3
EXIT_INTERNAL = 4

SEED_ENV_VAR = "QCOSINE_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_dataset(path) -> TrainingSet:
    """Read a CSV training set: d feature columns, then a {-1,+1} label.

    A non-numeric first row is treated as a header.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"dataset file not found: {path}")
    points = []
    expected_width = None
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise DataError(f"{path}:{lineno}: malformed row {row!r}")
            if len(values) < 2:
                raise DataError(
                    f"{path}:{lineno}: need at least one feature and a label"
                )
            if expected_width is None:
                expected_width = len(values)
            elif len(values) != expected_width:
                raise DataError(
                    f"{path}:{lineno}: row has {len(values)} columns, "
                    f"expected {expected_width}"
                )
            label = values[-1]
            if label not in (-1.0, 1.0):
                raise DataError(
                    f"{path}:{lineno}: label must be -1 or +1, got {label!r}"
                )
            points.append((values[:-1], int(label)))
    if not points:
        raise DataError(f"{path}: empty dataset (need at least one point)")
    return TrainingSet(points)


def load_query(path) -> DataVector:
    path = Path(path)
    if not path.exists():
        raise DataError(f"query file not found: {path}")
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                return DataVector([float(cell) for cell in row])
            except ValueError:
                if lineno == 1:
                    continue
                raise DataError(f"{path}:{lineno}: malformed query row {row!r}")
    raise DataError(f"{path}: no query vector found")


def parse_inline_query(text: str) -> DataVector:
    try:
        return DataVector([float(tok) for tok in text.split(",")])
    except ValueError:
        raise DataError(f"cannot parse inline query {text!r}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise DataError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def _add_sampling_args(parser):
    parser.add_argument("--shots", type=int, help="number of repetitions")
    parser.add_argument("--epsilon", type=float,
                        help="estimation accuracy (with --delta)")
    parser.add_argument("--delta", type=float,
                        help="failure probability (with --epsilon)")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"master seed (default ${SEED_ENV_VAR} or 0)")
    parser.add_argument("--analytic-only", action="store_true",
                        help="decide from the exact P(1), no sampling")
    parser.add_argument("--b-state", choices=["+", "-"], default="+",
                        help="preparation of ancilla b (default '+')")


def _add_output_args(parser):
    parser.add_argument("--output", type=Path, help="write the JSON report here")
    parser.add_argument("--figures", type=Path, metavar="DIR",
                        help="render PNG figures into DIR")


def build_parser() -> _Parser:
    parser = _Parser(prog="qcosine",
                     description="cosine-similarity quantum classifier simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a query vector")
    p.add_argument("--dataset", type=Path, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query", help="inline comma-separated query vector")
    group.add_argument("--query-file", type=Path)
    _add_sampling_args(p)
    _add_output_args(p)

    p = sub.add_parser("knn-classify",
                       help="quantum K-NN selection, then classification")
    p.add_argument("--dataset", type=Path, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query", help="inline comma-separated query vector")
    group.add_argument("--query-file", type=Path)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--knn-shots", type=int, default=10000,
                   help="shots for the neighbor-selection stage")
    _add_sampling_args(p)
    _add_output_args(p)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", type=Path)

    p = sub.add_parser("export-qasm",
                       help="export the bundled instance as OpenQASM 2.0")
    p.add_argument("--which", choices=["training-prep", "query-prep", "full"],
                   default="full")
    p.add_argument("--b-state", choices=["+", "-"], default="+")
    p.add_argument("--decompose-fredkin", action="store_true",
                   help="emit the CNOT/Toffoli/CNOT sandwich instead of cswap")
    p.add_argument("--output", type=Path)

    p = sub.add_parser("example",
                       help="run the bundled two-point instance end to end")
    _add_sampling_args(p)
    _add_output_args(p)

    return parser


def _sampling_config(args) -> SamplingConfig | None:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.analytic_only:
        if args.shots is not None or args.epsilon is not None:
            raise DataError("--analytic-only excludes --shots/--epsilon")
        return None
    if args.shots is not None and args.epsilon is not None:
        raise DataError("supply either --shots or --epsilon/--delta, not both")
    if args.shots is not None:
        return SamplingConfig(shots=args.shots, master_seed=seed)
    if args.epsilon is not None or args.delta is not None:
        if args.epsilon is None or args.delta is None:
            raise DataError("--epsilon and --delta must be given together")
        return SamplingConfig(epsilon=args.epsilon, delta=args.delta,
                              master_seed=seed)
    return SamplingConfig(shots=1024, master_seed=seed)


def _resolve_query(args) -> DataVector:
    if args.query is not None:
        return parse_inline_query(args.query)
    return load_query(args.query_file)


def _classification_report(ts, x, cfg, args) -> dict:
    seed = args.seed if args.seed is not None else _default_seed()
    if cfg is None:
        result = classifier.classify_analytic(ts, x, args.b_state)
        shots = None
        p_hat = None
    else:
        result = classifier.run_classification(ts, x, cfg, args.b_state)
        shots = result.shots
        p_hat = result.p_hat
    return {
        "label": result.label,
        "p_hat": p_hat,
        "analytic_p1": result.analytic_p1,
        "shots": shots,
        "seed": seed,
        "margin": result.margin,
        "b_state": args.b_state,
        "oracle_label": classical_classify(ts, x).label,
        "invocation": sys.argv[1:],
    }


def _emit_report(report: dict, args) -> None:
    text = json.dumps(report, indent=2, default=_json_default)
    print(text)
    if getattr(args, "output", None):
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text + "\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _classify_figures(report: dict, args, stem: str) -> list[str]:
    if not getattr(args, "figures", None):
        return []
    from . import plotting

    args.figures.mkdir(parents=True, exist_ok=True)
    if report["shots"]:
        ones = round(report["p_hat"] * report["shots"])
        counts = {"0": report["shots"] - ones, "1": ones}
        title = f"{report['shots']} shots, p_hat = {report['p_hat']:.4f}"
    else:
        counts = {"0": 1.0 - report["analytic_p1"], "1": report["analytic_p1"]}
        title = f"analytic P(1) = {report['analytic_p1']:.4f}"
    path = plotting.save_outcome_histogram(counts, args.figures / f"{stem}_outcomes.png",
                                           title=title)
    return [str(path)]


def _cmd_classify(args) -> int:
    ts = load_dataset(args.dataset)
    x = _resolve_query(args)
    cfg = _sampling_config(args)
    report = {"command": "classify", "dataset": str(args.dataset)}
    report.update(_classification_report(ts, x, cfg, args))
    report["figures"] = _classify_figures(report, args, "classify")
    _emit_report(report, args)
    return EXIT_OK


def _cmd_knn_classify(args) -> int:
    ts = load_dataset(args.dataset)
    x = _resolve_query(args)
    seed = args.seed if args.seed is not None else _default_seed()
    knn_cfg = KnnConfig(k=args.k, shots=args.knn_shots, master_seed=seed)
    selection = qknn.run_knn_selection(ts, x, knn_cfg)
    restricted = ts.subset(selection.selected)
    cfg = _sampling_config(args)
    report = {"command": "knn-classify", "dataset": str(args.dataset),
              "k": args.k, "knn_shots": args.knn_shots}
    report.update(_classification_report(restricted, x, cfg, args))
    report["selected"] = selection.selected
    report["score_estimates"] = selection.score_estimates
    report["analytic_scores"] = selection.analytic_scores
    figures = _classify_figures(report, args, "knn_classify")
    if getattr(args, "figures", None):
        from . import plotting

        figures.append(str(plotting.save_knn_scores(
            selection.score_estimates, selection.analytic_scores,
            selection.selected, args.figures / "knn_classify_scores.png")))
    report["figures"] = figures
    _emit_report(report, args)
    return EXIT_OK


def _cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    suites = verify.run_all(seed=seed, quick=args.quick)
    report = {
        "command": "verify",
        "seed": seed,
        "suites": [{"name": s.name, "passed": s.passed, "failed": s.failed}
                   for s in suites],
        "total_passed": sum(s.passed for s in suites),
        "total_failed": sum(s.failed for s in suites),
    }
    _emit_report(report, args)
    return EXIT_OK if report["total_failed"] == 0 else EXIT_INTERNAL


def _cmd_export_qasm(args) -> int:
    prep_train, prep_query, full = build_example_circuits(args.b_state)
    circuit = {"training-prep": prep_train, "query-prep": prep_query,
               "full": full}[args.which]
    text = export_qasm(circuit, native_cswap=not args.decompose_fredkin)
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text)
        print(json.dumps({"command": "export-qasm", "which": args.which,
                          "output": str(args.output),
                          "gates": text.count(";") - 2}, indent=2))
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_example(args) -> int:
    if args.shots is None and args.epsilon is None and not args.analytic_only:
        # large default so the small decision margin is resolved reliably;
        # the hardware-style 1024-shot protocol is available via --shots
        args.shots = 1_000_000
    ts = builtin.example_training_set()
    x = builtin.example_query()
    cfg = _sampling_config(args)
    report = {"command": "example"}
    report.update(_classification_report(ts, x, cfg, args))
    report["figures"] = _classify_figures(report, args, "example")
    _emit_report(report, args)
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "knn-classify": _cmd_knn_classify,
    "verify": _cmd_verify,
    "export-qasm": _cmd_export_qasm,
    "example": _cmd_example,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DegenerateSimilarityError, InsufficientShotsError,
            StateNormError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QuantumCosineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry_point():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
