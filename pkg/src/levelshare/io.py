"""File formats: datasets, rate points, experiment configs, reports.

Dataset CSV: header exactly ``id,target,realized``, one row per unit,
UTF-8, plain decimal-point reals, no thousands separators.  Stored
values keep full double precision; only displayed tables round.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from .assumptions import AssumptionReport, DiagnosticConfig, EpsilonSchedule
from .equivalence import EquivalenceReport
from .errors import (
    DuplicateIdError,
    InvalidParametersError,
    NegativeValueError,
    ParseError,
)
from .losses import LossSpec, WeightSide, ZeroWeightPolicy
from .series import PairedSeries
from .simulate import (
    ConstantPlusNoise,
    DeviationInjection,
    GeneratorSpec,
    NoiseModel,
    RatePoint,
    RatePoints,
    SkewedHeavy,
    TwoPointScale,
    UniformPositive,
)

DATASET_HEADER = "id,target,realized"
RATE_POINTS_HEADER = "n,replicate,c_error,diff,keydiff,sparse_fraction"


def _parse_value(cell: str, column: str, row: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"non-numeric {column} value {cell!r}", row)
    if math.isnan(value) or math.isinf(value):
        raise ParseError(f"non-finite {column} value {cell!r}", row)
    if value < 0:
        raise NegativeValueError(f"row {row}: negative {column} value {cell!r}")
    return value


def read_dataset(path: str | Path) -> PairedSeries:
    """Load a dataset CSV, preserving row order.

    Raises :class:`ParseError` (with the offending 1-based data row),
    :class:`DuplicateIdError` or :class:`NegativeValueError` on
    malformed input.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty file")
    if lines[0].strip() != DATASET_HEADER:
        raise ParseError(
            f"header must be {DATASET_HEADER!r}, got {lines[0].strip()!r}"
        )
    ids: list[str] = []
    seen: set[str] = set()
    targets: list[float] = []
    realizeds: list[float] = []
    for row, line in enumerate(lines[1:], start=1):
        cells = line.split(",")
        if len(cells) != 3:
            raise ParseError(f"expected 3 columns, got {len(cells)}", row)
        unit = cells[0].strip()
        if not unit:
            raise ParseError("empty id", row)
        if unit in seen:
            raise DuplicateIdError(f"duplicate id {unit!r}", row)
        seen.add(unit)
        ids.append(unit)
        targets.append(_parse_value(cells[1].strip(), "target", row))
        realizeds.append(_parse_value(cells[2].strip(), "realized", row))
    if not ids:
        raise ParseError("no data rows")
    return PairedSeries(realizeds, targets, tuple(ids))


def write_dataset(path: str | Path, series: PairedSeries) -> None:
    """Write a dataset CSV that :func:`read_dataset` loads back identically."""
    lines = [DATASET_HEADER]
    for unit, target, realized in zip(series.ids, series.target, series.realized):
        lines.append(f"{unit},{target!r},{realized!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_rate_points(path: str | Path, points: RatePoints) -> None:
    """Write experiment rows as CSV at full double precision."""
    lines = [RATE_POINTS_HEADER]
    for p in points.points:
        lines.append(
            f"{p.n},{p.replicate},{p.c_error!r},{p.diff!r},"
            f"{p.keydiff!r},{p.sparse_fraction!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_rate_points(path: str | Path) -> RatePoints:
    """Load experiment rows written by :func:`write_rate_points`."""
    lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines() if l.strip()]
    if not lines or lines[0].strip() != RATE_POINTS_HEADER:
        raise ParseError(f"header must be {RATE_POINTS_HEADER!r}")
    rows = []
    for row, line in enumerate(lines[1:], start=1):
        cells = line.split(",")
        if len(cells) != 6:
            raise ParseError(f"expected 6 columns, got {len(cells)}", row)
        try:
            rows.append(
                RatePoint(
                    int(cells[0]), int(cells[1]), float(cells[2]),
                    float(cells[3]), float(cells[4]), float(cells[5]),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), row)
    if not rows:
        raise ParseError("no data rows")
    return RatePoints(tuple(rows))


_FAMILIES = {
    "uniform_positive": UniformPositive,
    "skewed_heavy": SkewedHeavy,
    "constant_plus_noise": ConstantPlusNoise,
}

_SIDES = {side.value: side for side in WeightSide}
_POLICIES = {policy.value: policy for policy in ZeroWeightPolicy}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a convergence experiment needs.

    JSON key set (see README for a full example)::

        generator: {family, params, noise{scale,decay},
                    injection{fraction,decay,shock_lo,shock_hi} | null,
                    mixing{low,high,high_probability} | null}
        n_grid:     ascending list of sizes
        replicates: int >= 1
        seed:       master seed (CLI --seed overrides)
        loss_specs: [{exponent, weight_exponent, weight_side,
                      zero_weight_policy}]
        epsilon:    {initial, decay}
        thresholds: optional DiagnosticConfig overrides
        output_prefix: file stem for emitted CSVs
    """

    generator: GeneratorSpec
    n_grid: tuple[int, ...]
    replicates: int
    loss_specs: tuple[LossSpec, ...]
    epsilon: EpsilonSchedule
    thresholds: DiagnosticConfig
    output_prefix: str = "points"


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise InvalidParametersError(f"config missing {where}{key!r}")
    return mapping[key]


def parse_loss_spec(raw: dict[str, Any]) -> LossSpec:
    side = raw.get("weight_side", "target")
    if side not in _SIDES:
        raise InvalidParametersError(f"unknown weight_side {side!r}")
    policy = raw.get("zero_weight_policy", "error")
    if policy not in _POLICIES:
        raise InvalidParametersError(f"unknown zero_weight_policy {policy!r}")
    return LossSpec(
        float(_require(raw, "exponent", "loss spec ")),
        float(raw.get("weight_exponent", 0.0)),
        _SIDES[side],
        _POLICIES[policy],
    )


def parse_experiment_config(raw: dict[str, Any]) -> ExperimentConfig:
    gen_raw = _require(raw, "generator", "")
    family = _require(gen_raw, "family", "generator ")
    if family not in _FAMILIES:
        raise InvalidParametersError(
            f"unknown family {family!r}; known: {sorted(_FAMILIES)}"
        )
    base = _FAMILIES[family](**gen_raw.get("params", {}))
    noise = NoiseModel(**gen_raw.get("noise", {}))
    injection_raw = gen_raw.get("injection")
    injection = (
        DeviationInjection(**injection_raw) if injection_raw is not None else None
    )
    mixing_raw = gen_raw.get("mixing")
    mixing = TwoPointScale(**mixing_raw) if mixing_raw is not None else None
    generator = GeneratorSpec(
        base=base,
        noise=noise,
        injection=injection,
        mixing=mixing,
        seed=int(raw.get("seed", 0)),
    )
    n_grid = tuple(int(n) for n in _require(raw, "n_grid", ""))
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidParametersError("n_grid must be nonempty and ascending")
    specs = tuple(parse_loss_spec(s) for s in _require(raw, "loss_specs", ""))
    if not specs:
        raise InvalidParametersError("loss_specs is empty")
    epsilon = EpsilonSchedule(**raw.get("epsilon", {}))
    thresholds = DiagnosticConfig(**raw.get("thresholds", {}))
    return ExperimentConfig(
        generator=generator,
        n_grid=n_grid,
        replicates=int(_require(raw, "replicates", "")),
        loss_specs=specs,
        epsilon=epsilon,
        thresholds=thresholds,
        output_prefix=str(raw.get("output_prefix", "points")),
    )


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ParseError("config must be a JSON object")
    return parse_experiment_config(raw)


def loss_spec_tag(spec: LossSpec) -> str:
    """Deterministic file tag, e.g. ``p1_q0_target``."""
    return (
        f"p{spec.exponent:g}_q{spec.weight_exponent:g}_{spec.weight_side.value}"
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "value") and value.__class__.__module__.startswith("levelshare"):
        return value.value  # enums
    return value


def loss_spec_document(spec: LossSpec) -> dict[str, Any]:
    return {
        "exponent": spec.exponent,
        "weight_exponent": spec.weight_exponent,
        "weight_side": spec.weight_side.value,
        "zero_weight_policy": spec.zero_weight_policy.value,
    }


def report_document(
    source: str,
    spec: LossSpec,
    equivalence: EquivalenceReport,
    assumptions: AssumptionReport,
) -> dict[str, Any]:
    """Self-describing report structure with stable key names."""
    return {
        "source": source,
        "loss_spec": loss_spec_document(spec),
        "equivalence": _jsonable(asdict(equivalence)),
        "assumptions": {
            "finite_moments": _jsonable(asdict(assumptions.moments)),
            "weight_boundedness": _jsonable(asdict(assumptions.boundedness)),
            "mean_stability": _jsonable(asdict(assumptions.means)),
            "weight_regularity": _jsonable(asdict(assumptions.weights)),
            "sparse_deviations": _jsonable(asdict(assumptions.sparse)),
            "verdicts": {k: v.value for k, v in assumptions.verdicts.items()},
        },
    }


def render_report(document: dict[str, Any]) -> str:
    return json.dumps(document, indent=2)
