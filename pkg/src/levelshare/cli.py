"""Command-line surface: compute, diagnose, simulate, rate, demo-small-sample.

Exit codes: 0 success, 1 invalid usage or invalid input data, 2
unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .assumptions import DiagnosticConfig, EpsilonSchedule, diagnose
from .equivalence import full_report
from .errors import DataError, InvalidParametersError
from .io import (
    load_experiment_config,
    loss_spec_tag,
    read_dataset,
    read_rate_points,
    render_report,
    report_document,
    write_rate_points,
)
from .losses import (
    MEASURE_LABELS,
    MeasureName,
    WeightSide,
    ZeroWeightPolicy,
    LossSpec,
    named_measure,
)
from .simulate import (
    RATE_FIELDS,
    fit_rate,
    run_convergence,
    small_sample_datasets,
)

DEFAULT_MEASURES = (
    MeasureName.TOTAL_ABSOLUTE_DIFFERENCE,
    MeasureName.INDEX_OF_DISSIMILARITY,
    MeasureName.CHI_SQUARE,
    MeasureName.PEARSON_CHI_SQUARE_DIVERGENCE,
)


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def format_value(value: float) -> str:
    """Display form: round to 4 decimals, trim trailing zeros."""
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def _build_parser() -> _Parser:
    parser = _Parser(prog="levelshare", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    compute = sub.add_parser("compute", help="named measures for one or two datasets")
    compute.add_argument("--input", action="append", required=True,
                         help="dataset CSV; give twice to compare two realizations")
    compute.add_argument("--measure", action="append",
                         choices=[m.value for m in MeasureName],
                         help="repeatable; default: the four headline measures")
    compute.add_argument("--id-normalization", choices=["paper", "conventional"],
                         default="paper")
    compute.add_argument("--cd-exponent", type=float, default=1.0,
                         help="difference exponent for cobb_douglas")
    compute.add_argument("--cd-weight-exponent", type=float, default=-1.0,
                         help="weight exponent for cobb_douglas (negative)")
    compute.add_argument("--cd-arguments", choices=["level", "share"], default="level")

    diag = sub.add_parser("diagnose", help="equivalence + regularity report as JSON")
    diag.add_argument("--input", required=True)
    diag.add_argument("--spec", default="1,0,target",
                      help="loss spec as 'p,q,side', e.g. '2,-1,target'")
    diag.add_argument("--eps0", type=float, default=1.0,
                      help="initial deviation tolerance")
    diag.add_argument("--alpha", type=float, default=0.25,
                      help="tolerance decay exponent in (0, 1]")
    diag.add_argument("--skip-zero-weights", action="store_true",
                      help="drop zero-base units instead of failing")
    diag.add_argument("--out", help="write the JSON document here instead of stdout")

    sim = sub.add_parser("simulate", help="run a convergence experiment from a config")
    sim.add_argument("--config", required=True, help="experiment config JSON")
    sim.add_argument("--out", required=True, help="output directory for CSVs")
    sim.add_argument("--seed", type=int, help="override the config master seed")

    rate = sub.add_parser("rate", help="fit a convergence rate to experiment output")
    rate.add_argument("--points", required=True, help="rate points CSV")
    rate.add_argument("--field", required=True, choices=list(RATE_FIELDS))

    sub.add_parser("demo-small-sample",
                   help="two-unit demonstration: equal level losses, unequal share losses")
    return parser


def parse_spec_flag(text: str) -> LossSpec:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise InvalidParametersError(
            f"--spec must be 'p,q,side', got {text!r}"
        )
    try:
        exponent, weight_exponent = float(parts[0]), float(parts[1])
    except ValueError:
        raise InvalidParametersError(f"--spec has non-numeric p or q: {text!r}")
    sides = {s.value: s for s in WeightSide}
    if parts[2] not in sides:
        raise InvalidParametersError(
            f"--spec side must be one of {sorted(sides)}, got {parts[2]!r}"
        )
    return LossSpec(exponent, weight_exponent, sides[parts[2]])


def _render_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(header[j]), *(len(r[j]) for r in rows)) for j in range(len(header))
    ]
    lines = []
    for record in [header] + rows:
        cells = [record[0].ljust(widths[0])]
        cells += [record[j].rjust(widths[j]) for j in range(1, len(record))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _cmd_compute(args) -> int:
    if not 1 <= len(args.input) <= 2:
        raise InvalidParametersError("give --input once or twice")
    datasets = [(Path(p).stem, read_dataset(p)) for p in args.input]
    measures = (
        [MeasureName(m) for m in args.measure] if args.measure else list(DEFAULT_MEASURES)
    )
    header = ["Measure"] + [name for name, _ in datasets]
    if len(datasets) == 2:
        header.append(f"{datasets[0][0]}/{datasets[1][0]}")
    rows = []
    for measure in measures:
        values = [
            named_measure(
                measure,
                series,
                id_normalization=args.id_normalization,
                exponent=args.cd_exponent,
                weight_exponent=args.cd_weight_exponent,
                arguments=args.cd_arguments,
            ).value
            for _, series in datasets
        ]
        row = [MEASURE_LABELS[measure]] + [format_value(v) for v in values]
        if len(values) == 2:
            row.append(
                format_value(values[0] / values[1]) if values[1] != 0 else "undefined"
            )
        rows.append(row)
    print(_render_table(header, rows))
    return 0


def _cmd_diagnose(args) -> int:
    series = read_dataset(args.input)
    spec = parse_spec_flag(args.spec)
    if args.skip_zero_weights:
        spec = dataclasses.replace(
            spec, zero_weight_policy=ZeroWeightPolicy.SKIP_UNIT
        )
    eps = EpsilonSchedule(args.eps0, args.alpha)
    document = report_document(
        source=str(args.input),
        spec=spec,
        equivalence=full_report(spec, series, eps),
        assumptions=diagnose(series, spec, eps, DiagnosticConfig()),
    )
    text = render_report(document)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_simulate(args) -> int:
    config = load_experiment_config(args.config)
    generator = config.generator
    if args.seed is not None:
        generator = dataclasses.replace(generator, seed=args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for spec in config.loss_specs:
        points = run_convergence(
            generator, spec, config.n_grid, config.replicates, config.epsilon
        )
        path = out_dir / f"{config.output_prefix}_{loss_spec_tag(spec)}.csv"
        write_rate_points(path, points)
        print(f"wrote {path}")
    return 0


def _cmd_rate(args) -> int:
    fit = fit_rate(read_rate_points(args.points), args.field)
    print(f"slope: {fit.slope:.3f} ± {fit.stderr:.3f}")
    print(f"intercept: {fit.intercept:.3f}")
    return 0


def _cmd_demo(_args) -> int:
    set1, set2 = small_sample_datasets()
    target = set1.target

    fmt = format_value
    share = lambda arr, total: [fmt(v / total) for v in arr]
    unit_rows = [
        ["target"] + [fmt(v) for v in target],
        ["  share of total"] + share(target, set1.total_target),
    ]
    for label, series in (("set1", set1), ("set2", set2)):
        diffs = abs(series.realized - series.target)
        share_diffs = abs(
            series.realized / series.total_realized - target / series.total_target
        )
        unit_rows += [
            [f"{label} realized"] + [fmt(v) for v in series.realized],
            ["  share of total"] + share(series.realized, series.total_realized),
            ["  absolute difference"] + [fmt(v) for v in diffs],
            ["  absolute share difference"] + [fmt(v) for v in share_diffs],
        ]
    print("Two-unit demonstration: one target, two realizations, equal totals")
    print()
    print(_render_table([""] + list(set1.ids), unit_rows))
    print()

    summary_rows = []
    for measure in (MeasureName.TOTAL_ABSOLUTE_DIFFERENCE,
                    MeasureName.INDEX_OF_DISSIMILARITY):
        values = [named_measure(measure, s).value for s in (set1, set2)]
        summary_rows.append([MEASURE_LABELS[measure]] + [fmt(v) for v in values])
    print(_render_table(["Measure", "set1", "set2"], summary_rows))
    print()
    print("Equal total absolute differences, unequal dissimilarity indices:")
    print("asymptotically equivalent measures can still disagree in small samples.")
    return 0


_COMMANDS = {
    "compute": _cmd_compute,
    "diagnose": _cmd_diagnose,
    "simulate": _cmd_simulate,
    "rate": _cmd_rate,
    "demo-small-sample": _cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except (DataError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"levelshare {args.command}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"levelshare {args.command}: unexpected failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
