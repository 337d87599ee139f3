"""Command-line interface.

Subcommands: ``metrics``, ``simulate <fig1..fig6>``, ``hits``,
``calibrate``. Machine output (JSON/CSV) goes to stdout or files; human
diagnostics go to stderr. Exit codes: 0 success, 2 input/config validation
error, 3 numeric error. The ``ASSAYQC_THREADS`` env var caps parallel
trial workers in the simulation runners.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DataValidationError, MalformedRow, NumericError
from .hits import (
    Direction,
    HitReport,
    RuleKind,
    ThresholdRule,
    assay_quality,
    evaluate_threshold,
    select_hits,
)
from .plates import EXPECTED_HEADER, Plate, load_plate_csv
from .report import RunManifest, __version__, compute_metric_report, json_dumps
from .samples import SampleSet
from .scenarios import SCENARIO_NAMES, load_config_file, run_scenario
from .simulation import DEFAULT_CALIBRATION_SIZES, DistributionSpec, calibrate_null

GROUP_HEADER = ["group", "value"]


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assayqc",
        description="Assay quality metrics, simulation studies and hit selection",
    )
    parser.add_argument("--version", action="version", version=f"assayqc {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bins", type=_positive_int, default=None,
                        help="override the 1+log2(N) histogram bin rule")
    common.add_argument("--out-dir", type=Path, default=Path("."),
                        help="directory for emitted files")
    common.add_argument("--format", choices=["json", "csv"], default="json",
                        help="report format for stdout output")

    p = sub.add_parser("metrics", parents=[common],
                       help="metric report from a plate CSV or a group,value CSV")
    p.add_argument("input", type=Path)
    p.add_argument("--out", type=Path, default=None, help="write report here instead of stdout")

    p = sub.add_parser("simulate", parents=[common], help="run a named simulation scenario")
    p.add_argument("scenario", choices=SCENARIO_NAMES)
    p.add_argument("--seed", type=_u64, required=True, help="master seed (required)")
    p.add_argument("--config", type=Path, default=None,
                   help="JSON config file (or a previous manifest.json) overriding defaults")

    p = sub.add_parser("hits", parents=[common], help="hit selection on plate controls")
    p.add_argument("train", type=Path, help="plate CSV providing the controls")
    p.add_argument("--test", type=Path, default=None,
                   help="replicate plate CSV for threshold evaluation")
    p.add_argument("--rule", choices=[k.value for k in RuleKind], default="gssmd")
    p.add_argument("--alpha", type=float, default=0.05, help="overlap-rule allowed overlap")
    p.add_argument("--k", type=float, default=3.0, help="sigma-rule multiplier")
    p.add_argument("--beta", type=float, default=3.0, help="ssmd-rule effect size")
    p.add_argument("--direction", choices=["auto", "higher", "lower"], default="auto")
    p.add_argument("--log-transform", action="store_true",
                   help="analyze log-transformed readouts")
    p.add_argument("--plate-id", default=None, help="select one plate from multi-plate files")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("calibrate", parents=[common],
                       help="null lower-bound calibration table for GSSMD")
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--sizes", type=int, nargs="+", default=list(DEFAULT_CALIBRATION_SIZES))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dist", choices=["normal", "lognormal"], default="normal")
    p.add_argument("--location", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    return parser


def _sniff_header(path: Path) -> list[str]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise MalformedRow(f"{path}: empty file") from None
    return [h.strip().lower() for h in header]


def _load_group_csv(path: Path) -> tuple[SampleSet, SampleSet]:
    neg, pos = [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # header already validated
        for line_no, fields in enumerate(reader, start=2):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if len(fields) != 2:
                raise MalformedRow(f"line {line_no}: expected group,value")
            group = fields[0].strip().lower()
            if group not in ("pos", "neg"):
                raise MalformedRow(f"line {line_no}: group must be pos or neg")
            try:
                value = float(fields[1])
            except ValueError:
                raise MalformedRow(f"line {line_no}: bad value {fields[1]!r}") from None
            if not np.isfinite(value):
                raise MalformedRow(f"line {line_no}: non-finite value")
            (pos if group == "pos" else neg).append(value)
    if not neg or not pos:
        raise MalformedRow(f"{path}: need at least one pos and one neg row")
    return SampleSet(neg, label="neg"), SampleSet(pos, label="pos")


def _report_csv(reports: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])

    def walk(prefix: str, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(obj, list):
            writer.writerow([prefix, ";".join(str(v) for v in obj)])
        else:
            value = f"{obj:.12g}" if isinstance(obj, float) else obj
            writer.writerow([prefix, value])

    for report in reports:
        walk("", report)
    return buf.getvalue()


def _emit(payload: dict | list, fmt: str, out: Path | None) -> None:
    if fmt == "csv":
        text = _report_csv(payload if isinstance(payload, list) else [payload])
    else:
        text = json_dumps(payload)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _cmd_metrics(args) -> int:
    header = _sniff_header(args.input)
    if header == EXPECTED_HEADER:
        plates = load_plate_csv(args.input)
        reports = []
        for plate in plates:
            report = assay_quality(plate, bins=args.bins)
            reports.append({"plate_id": plate.plate_id, **report.to_dict()})
        payload = reports if len(reports) > 1 else reports[0]
    elif header == GROUP_HEADER:
        neg, pos = _load_group_csv(args.input)
        payload = compute_metric_report(neg, pos, bins=args.bins).to_dict()
    else:
        raise MalformedRow(
            f"{args.input}: unrecognized header {','.join(header)}; expected "
            f"{','.join(EXPECTED_HEADER)} or {','.join(GROUP_HEADER)}"
        )
    _emit(payload, args.format, args.out)
    return 0


def _cmd_simulate(args) -> int:
    overrides = load_config_file(args.config) if args.config else None
    written = run_scenario(args.scenario, args.seed, args.out_dir, overrides, args.bins)
    for path in written:
        print(path, file=sys.stderr)
    return 0


def _select_plate(path: Path, plate_id: str | None) -> Plate:
    plates = load_plate_csv(path)
    if plate_id is None:
        return plates[0]
    for plate in plates:
        if plate.plate_id == plate_id:
            return plate
    raise DataValidationError(f"{path}: no plate with id {plate_id!r}")


def _cmd_hits(args) -> int:
    rule_kind = RuleKind(args.rule)
    parameter = {
        RuleKind.GSSMD_OVERLAP: args.alpha,
        RuleKind.SIGMA: args.k,
        RuleKind.SSMD: args.beta,
        RuleKind.LOGISTIC: 1.0,
    }[rule_kind]
    rule = ThresholdRule(rule_kind, parameter)

    plate = _select_plate(args.train, args.plate_id)
    if args.log_transform:
        plate = plate.transformed(np.log)
    forced = None if args.direction == "auto" else Direction(args.direction)
    report: HitReport = select_hits(plate, rule, bins=args.bins, direction=forced)
    if forced is not None and report.direction is not forced:
        print(
            f"note: requested direction {args.direction!r} disagrees with the "
            f"controls ({report.direction.value}); the {rule.kind.value} rule "
            "derives its direction from the controls",
            file=sys.stderr,
        )
    payload = {"plate_id": plate.plate_id, **report.to_dict()}

    if args.test is not None:
        test_plate = _select_plate(args.test, args.plate_id)
        if args.log_transform:
            test_plate = test_plate.transformed(np.log)
        test_neg, test_pos = test_plate.control_sets()
        evaluation = evaluate_threshold(
            test_neg, test_pos, report.threshold, report.direction
        )
        payload["evaluation"] = {
            "test_plate_id": test_plate.plate_id,
            "accuracy": evaluation.accuracy,
            "type1_error": evaluation.type1_error,
        }
    _emit(payload, args.format, args.out)
    return 0


def _cmd_calibrate(args) -> int:
    dist = DistributionSpec(args.dist, args.location, args.scale)
    table = calibrate_null(args.sizes, args.trials, dist, args.seed, bins=args.bins)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    columns = ["dist", "n", "mean", "variance", "min", "max", "p95", "p99", "p999",
               "mean_signed"]
    lines = [",".join(columns)]
    for row in table.rows:
        lines.append(",".join([args.dist] + [
            f"{getattr(row, c):.12g}" if isinstance(getattr(row, c), float)
            else str(getattr(row, c))
            for c in columns[1:]
        ]))
    csv_path = out / "null_calibration.csv"
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    manifest = RunManifest(
        subcommand="calibrate",
        config={
            "sizes": list(args.sizes), "trials": args.trials, "dist": args.dist,
            "location": args.location, "scale": args.scale, "bins": args.bins,
        },
        seed=args.seed,
        outputs={csv_path.name: hashlib.sha256(csv_path.read_bytes()).hexdigest()},
    )
    (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8", newline="\n")
    print(csv_path, file=sys.stderr)
    return 0


_COMMANDS = {
    "metrics": _cmd_metrics,
    "simulate": _cmd_simulate,
    "hits": _cmd_hits,
    "calibrate": _cmd_calibrate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except (DataValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
