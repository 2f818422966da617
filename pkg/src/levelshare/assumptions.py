"""Finite-data diagnostics for the regularity conditions behind the
level/share equivalence: finite moments, weighted-average boundedness,
stable means, weight regularity, and sparse deviations.

Asymptotic conditions cannot be certified on a finite dataset.  Each
checker therefore reports a prefix trajectory plus a heuristic verdict
with documented, configurable thresholds; Pass means "nothing in this
sample argues against the condition", not a proof.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParametersError, ZeroTotalError
from .losses import LossSpec, weights_for
from .series import PairedSeries, exact_total


class Verdict(enum.Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"


@dataclass(frozen=True)
class EpsilonSchedule:
    """Shrinking deviation tolerance ``initial * n**(-decay)``."""

    initial: float = 1.0
    decay: float = 0.25

    def __post_init__(self):
        if not self.initial > 0:
            raise InvalidParametersError(f"initial must be positive, got {self.initial}")
        if not 0 < self.decay <= 1:
            raise InvalidParametersError(f"decay must be in (0, 1], got {self.decay}")

    def at(self, n: int) -> float:
        return self.initial * n ** (-self.decay)


def _threshold(eps: EpsilonSchedule | float, at_n: int) -> float:
    if isinstance(eps, EpsilonSchedule):
        return eps.at(at_n)
    value = float(eps)
    if not value > 0:
        raise InvalidParametersError(f"fixed tolerance must be positive, got {value}")
    return value


def deviation_set(
    series: PairedSeries, eps: EpsilonSchedule | float, at_n: int | None = None
) -> set[int]:
    """Units whose target strays from the rescaled realization.

    Over the first ``at_n`` units (default: all), flags every index
    ``i`` with ``|target_i - c * realized_i| > tolerance`` where ``c``
    is the ratio of the prefix totals (realized over target) and the
    tolerance is ``eps`` evaluated at ``at_n`` (or ``eps`` itself when
    given as a plain number).  Indices are 0-based.
    """
    n = series.n if at_n is None else int(at_n)
    if not 1 <= n <= series.n:
        raise IndexError(f"at_n={n} outside [1, {series.n}]")
    x = series.realized[:n]
    y = series.target[:n]
    total_y = exact_total(y)
    if total_y == 0.0:
        raise ZeroTotalError("target prefix total is zero")
    c = exact_total(x) / total_y
    tol = _threshold(eps, n)
    flagged = np.abs(y - c * x) > tol
    return set(int(i) for i in np.nonzero(flagged)[0])


def default_prefix_grid(n: int, points: int = 16) -> tuple[int, ...]:
    """Roughly geometric prefix sizes ending at ``n``."""
    if n == 1:
        return (1,)
    start = min(4, n)
    raw = np.unique(np.round(np.geomspace(start, n, points)).astype(int))
    return tuple(int(k) for k in raw if 1 <= k <= n)


def _check_grid(grid: Sequence[int], n: int) -> tuple[int, ...]:
    grid = tuple(int(k) for k in grid)
    if not grid:
        raise InvalidParametersError("prefix grid is empty")
    if any(not 1 <= k <= n for k in grid):
        raise InvalidParametersError(f"prefix grid entries outside [1, {n}]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParametersError("prefix grid must be strictly increasing")
    return grid


def _tail(values: np.ndarray, fraction: float) -> np.ndarray:
    # at least two points, so short explicit grids still measure change
    count = max(2, int(np.ceil(len(values) * fraction)))
    return values[-min(count, len(values)):]


def _range_vs_median(values: np.ndarray) -> float:
    spread = float(np.max(values) - np.min(values))
    middle = float(np.median(values))
    if middle == 0.0:
        return 0.0 if spread == 0.0 else np.inf
    return spread / abs(middle)


@dataclass(frozen=True)
class MomentDiagnostic:
    """Prefix trajectory of sample p-th moments for both sides."""

    exponent: float
    trajectory: tuple[tuple[int, float, float], ...]  # (prefix n, realized, target)
    worst_tail_range: float
    verdict: Verdict


def moment_stability(
    series: PairedSeries,
    exponent: float,
    grid: Sequence[int] | None = None,
    *,
    range_fraction: float = 0.20,
    tail_fraction: float = 0.25,
) -> MomentDiagnostic:
    """Sample p-th moment over growing prefixes.

    Warns when the last-quartile trajectory range exceeds
    ``range_fraction`` of its median on either side: a late jump hints
    at moments too heavy for stable averaging.
    """
    grid = _check_grid(grid or default_prefix_grid(series.n), series.n)
    cum_x = np.cumsum(np.abs(series.realized) ** exponent)
    cum_y = np.cumsum(np.abs(series.target) ** exponent)
    idx = np.asarray(grid) - 1
    mx = cum_x[idx] / np.asarray(grid)
    my = cum_y[idx] / np.asarray(grid)
    worst = max(
        _range_vs_median(_tail(mx, tail_fraction)),
        _range_vs_median(_tail(my, tail_fraction)),
    )
    verdict = Verdict.PASS if worst <= range_fraction else Verdict.WARN
    trajectory = tuple(
        (int(k), float(a), float(b)) for k, a, b in zip(grid, mx, my)
    )
    return MomentDiagnostic(exponent, trajectory, float(worst), verdict)


@dataclass(frozen=True)
class BoundednessDiagnostic:
    """Weighted-average trajectory plus a random-subset stress probe."""

    trajectory: tuple[tuple[int, float, float], ...]  # (n, avg weight, avg weighted moment)
    full_average: float
    worst_subset_average: float
    verdict: Verdict


def weight_boundedness(
    series: PairedSeries,
    spec: LossSpec,
    *,
    subset_fraction: float = 0.5,
    probes: int = 200,
    seed: int = 0,
    grid: Sequence[int] | None = None,
    subset_multiple: float = 3.0,
) -> BoundednessDiagnostic:
    """Averages of share weights and of weighted level moments.

    The weight is evaluated at the share on the spec's weight side,
    shares taken within each prefix.  The trajectory reports, per
    prefix, the mean weight and the mean of
    ``weight * (|realized|**p + |target|**p)``.  The probe draws
    ``probes`` seeded random subsets covering at least
    ``subset_fraction`` of the units and records the worst subset
    average of the weighted moment; a bounded family keeps that within
    a small multiple of the full average.  Per-probe seeding is
    ``(seed, probe index)``, so results do not depend on evaluation
    order.
    """
    if not 0 < subset_fraction < 1:
        raise InvalidParametersError(
            f"subset_fraction must be in (0, 1), got {subset_fraction}"
        )
    if probes < 1:
        raise InvalidParametersError("probes must be >= 1")
    grid = _check_grid(grid or default_prefix_grid(series.n), series.n)
    p = spec.exponent

    def weight_shares(part: PairedSeries) -> np.ndarray:
        if spec.weight_side.value == "realized":
            return part.realized_shares().shares
        return part.target_shares().shares

    rows = []
    for k in grid:
        prefix = series.prefix(k)
        weights, keep = weights_for(weight_shares(prefix), spec)
        moment = np.abs(prefix.realized) ** p + np.abs(prefix.target) ** p
        used = int(np.count_nonzero(keep))
        avg_w = float(np.sum(weights[keep])) / used
        avg_m = float(np.sum((weights * moment)[keep])) / used
        rows.append((int(k), avg_w, avg_m))

    n = series.n
    weights, keep = weights_for(weight_shares(series), spec)
    weighted_moment = weights * (
        np.abs(series.realized) ** p + np.abs(series.target) ** p
    )
    full_average = float(np.sum(weighted_moment[keep])) / int(np.count_nonzero(keep))

    size = max(1, int(np.ceil(subset_fraction * n)))
    worst = -np.inf
    for j in range(probes):
        rng = np.random.default_rng([seed, j])
        idx = rng.choice(n, size=size, replace=False)
        kept = keep[idx]
        if not np.any(kept):
            continue
        avg = float(np.sum(weighted_moment[idx][kept])) / int(np.count_nonzero(kept))
        worst = max(worst, avg)
    if worst == -np.inf:
        worst = full_average

    ok = worst <= subset_multiple * full_average
    return BoundednessDiagnostic(
        tuple(rows), full_average, float(worst),
        Verdict.PASS if ok else Verdict.WARN,
    )


@dataclass(frozen=True)
class MeanStabilityDiagnostic:
    """Prefix means of both sides with tail oscillation."""

    trajectory: tuple[tuple[int, float, float], ...]
    oscillation_realized: float
    oscillation_target: float
    verdict: Verdict


def mean_stability(
    series: PairedSeries,
    grid: Sequence[int] | None = None,
    *,
    tail_fraction: float = 0.25,
    oscillation_limit: float = 0.05,
) -> MeanStabilityDiagnostic:
    """Prefix means ``total/n``; a settling mean has a quiet tail.

    Oscillation is (max - min) / median over the final ``tail_fraction``
    of the grid.  Means that keep drifting (e.g. linearly growing
    values) fail.
    """
    grid = _check_grid(grid or default_prefix_grid(series.n), series.n)
    idx = np.asarray(grid) - 1
    mx = np.cumsum(series.realized)[idx] / np.asarray(grid)
    my = np.cumsum(series.target)[idx] / np.asarray(grid)
    osc_x = _range_vs_median(_tail(mx, tail_fraction))
    osc_y = _range_vs_median(_tail(my, tail_fraction))
    verdict = (
        Verdict.PASS if max(osc_x, osc_y) <= oscillation_limit else Verdict.FAIL
    )
    trajectory = tuple(
        (int(k), float(a), float(b)) for k, a, b in zip(grid, mx, my)
    )
    return MeanStabilityDiagnostic(trajectory, float(osc_x), float(osc_y), verdict)


@dataclass(frozen=True)
class WeightLimitDiagnostic:
    """Prefix averages of share weights on both sides."""

    trajectory: tuple[tuple[int, float, float], ...]
    limit_realized: float
    limit_target: float
    drift: float
    verdict: Verdict


def weight_limits(
    series: PairedSeries,
    spec: LossSpec,
    grid: Sequence[int] | None = None,
    *,
    drift_limit: float = 0.20,
) -> WeightLimitDiagnostic:
    """Do the share-weight averages settle toward limits?

    Reports prefix averages of ``w(x_i)`` and ``w(y_i)`` (shares taken
    within each prefix), the final averages as limit estimates, and the
    relative drift over the final quartile of the grid.
    """
    grid = _check_grid(grid or default_prefix_grid(series.n), series.n)
    rows = []
    for k in grid:
        prefix = series.prefix(k)
        wx, keep_x = weights_for(prefix.realized_shares().shares, spec)
        wy, keep_y = weights_for(prefix.target_shares().shares, spec)
        avg_x = float(np.sum(wx[keep_x])) / int(np.count_nonzero(keep_x))
        avg_y = float(np.sum(wy[keep_y])) / int(np.count_nonzero(keep_y))
        rows.append((int(k), avg_x, avg_y))

    avgs_x = np.asarray([r[1] for r in rows])
    avgs_y = np.asarray([r[2] for r in rows])
    drifts = [0.0]
    for avgs in (avgs_x, avgs_y):
        tail = _tail(avgs, 0.25)
        first = tail[0]
        if first != 0 and len(tail) > 1:
            drifts.append(abs(tail[-1] - first) / abs(first))
    drift = float(max(drifts))
    verdict = Verdict.PASS if drift <= drift_limit else Verdict.WARN
    return WeightLimitDiagnostic(
        tuple(rows), float(avgs_x[-1]), float(avgs_y[-1]), drift, verdict
    )


@dataclass(frozen=True)
class SparseDiagnostic:
    """Flagged-deviation counts over growing prefixes."""

    trajectory: tuple[tuple[int, int, float], ...]  # (n, flagged, fraction)
    verdict: Verdict


def sparse_deviations(
    series: PairedSeries,
    eps: EpsilonSchedule | float,
    grid: Sequence[int] | None = None,
    *,
    max_fraction: float = 0.02,
    decrease_ratio: float = 0.5,
    tail_fraction: float = 0.25,
) -> SparseDiagnostic:
    """Fraction of units flagged by :func:`deviation_set` per prefix.

    A single dataset cannot exhibit a limit, so the verdict is a level
    check with a trend escape hatch: Pass when the final fraction is at
    most ``max_fraction``; Warn when the tail has at least halved
    relative to the head (``decrease_ratio``); Fail otherwise.
    """
    grid = _check_grid(grid or default_prefix_grid(series.n), series.n)
    rows = []
    for k in grid:
        flagged = len(deviation_set(series, eps, k))
        rows.append((int(k), flagged, flagged / k))
    fractions = np.asarray([r[2] for r in rows])
    last_tail = float(np.median(_tail(fractions, tail_fraction)))
    head_count = max(1, int(np.ceil(len(fractions) * tail_fraction)))
    head = float(np.median(fractions[:head_count]))
    if last_tail <= max_fraction:
        verdict = Verdict.PASS
    elif head > 0 and last_tail / head <= decrease_ratio:
        verdict = Verdict.WARN
    else:
        verdict = Verdict.FAIL
    return SparseDiagnostic(tuple(rows), verdict)


@dataclass(frozen=True)
class DiagnosticConfig:
    """Thresholds and probe settings for :func:`diagnose`."""

    grid_points: int = 16
    moment_range_fraction: float = 0.20
    subset_fraction: float = 0.5
    subset_probes: int = 200
    subset_multiple: float = 3.0
    oscillation_limit: float = 0.05
    tail_fraction: float = 0.25
    weight_drift_limit: float = 0.20
    sparse_max_fraction: float = 0.02
    sparse_decrease_ratio: float = 0.5
    seed: int = 0


CONDITION_NAMES = (
    "finite_moments",
    "weight_boundedness",
    "mean_stability",
    "weight_regularity",
    "sparse_deviations",
)


@dataclass(frozen=True)
class AssumptionReport:
    """All five condition diagnostics for one dataset and loss spec."""

    moments: MomentDiagnostic
    boundedness: BoundednessDiagnostic
    means: MeanStabilityDiagnostic
    weights: WeightLimitDiagnostic
    sparse: SparseDiagnostic

    @property
    def verdicts(self) -> dict[str, Verdict]:
        return {
            "finite_moments": self.moments.verdict,
            "weight_boundedness": self.boundedness.verdict,
            "mean_stability": self.means.verdict,
            "weight_regularity": self.weights.verdict,
            "sparse_deviations": self.sparse.verdict,
        }


def diagnose(
    series: PairedSeries,
    spec: LossSpec,
    eps: EpsilonSchedule | float = EpsilonSchedule(),
    config: DiagnosticConfig = DiagnosticConfig(),
) -> AssumptionReport:
    """Run all five condition checkers with shared settings."""
    grid = default_prefix_grid(series.n, config.grid_points)
    return AssumptionReport(
        moments=moment_stability(
            series,
            spec.exponent,
            grid,
            range_fraction=config.moment_range_fraction,
            tail_fraction=config.tail_fraction,
        ),
        boundedness=weight_boundedness(
            series,
            spec,
            subset_fraction=config.subset_fraction,
            probes=config.subset_probes,
            seed=config.seed,
            grid=grid,
            subset_multiple=config.subset_multiple,
        ),
        means=mean_stability(
            series,
            grid,
            tail_fraction=config.tail_fraction,
            oscillation_limit=config.oscillation_limit,
        ),
        weights=weight_limits(
            series, spec, grid, drift_limit=config.weight_drift_limit
        ),
        sparse=sparse_deviations(
            series,
            eps,
            grid,
            max_fraction=config.sparse_max_fraction,
            decrease_ratio=config.sparse_decrease_ratio,
            tail_fraction=config.tail_fraction,
        ),
    )
