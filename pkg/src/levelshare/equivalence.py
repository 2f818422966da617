"""Diagnostics linking the level and share forms of a loss.

The central quantities: the ratio of totals ``c = S_realized / S_target``
that converts between the two argument scales, the constant that links
the mean level loss and mean share loss asymptotically, their actual
difference and ratios on a dataset, the rescaling gap (how much the
loss changes when the target is aligned to the realized total), and the
unit-by-unit differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assumptions import EpsilonSchedule, deviation_set
from .errors import EmptyAfterSkipError, ZeroTotalError
from .losses import (
    LossSpec,
    Normalization,
    WeightSide,
    level_loss,
    per_unit_level_losses,
    per_unit_share_losses,
    share_loss,
    weights_for,
)
from .series import PairedSeries


def total_ratio(series: PairedSeries) -> float:
    """Ratio of totals, realized over target."""
    if series.total_target == 0.0:
        raise ZeroTotalError("target total is zero")
    return series.total_realized / series.total_target


def share_level_identity(
    series: PairedSeries, index: int, exponent: float
) -> tuple[float, float]:
    """Both sides of the share/level difference identity for one unit.

    The absolute share difference raised to ``exponent`` equals the
    absolute level difference, after rescaling the target by the ratio
    of totals, divided by the realized total raised to the same power:

        |x_i - y_i|**p == |X_i - c*Y_i|**p / S_x**p,  c = S_x / S_y.

    Returns ``(share_side, level_side)``; both sides agree to within
    1e-12 of ``max(1, share_side)``.  ``index`` is 0-based.
    """
    if not 0 <= index < series.n:
        raise IndexError(f"unit index {index} outside [0, {series.n})")
    s_x = series.total_realized
    if s_x == 0.0:
        raise ZeroTotalError("realized total is zero")
    c = total_ratio(series)
    x_i = series.realized_shares().shares[index]
    y_i = series.target_shares().shares[index]
    share_side = abs(x_i - y_i) ** exponent
    level_side = (
        abs(series.realized[index] - c * series.target[index]) ** exponent
        / s_x**exponent
    )
    return float(share_side), float(level_side)


def equivalence_constant(spec: LossSpec, series: PairedSeries) -> float:
    """Constant linking the mean level loss to the mean share loss.

    Computed from the sample means ``total/n`` on the relevant side:

    - unit weights: (mean realized)**p;
    - absolute percentage error, i.e. ``p=1, q=-1``: exactly 1 on
      either weight side (the weight cancels the scale);
    - other negative weight exponents: the sample mean on the weight
      side (target mean for target-weighted losses such as the
      chi-square family, realized mean for realized-weighted ones).
    """
    n = series.n
    mean_realized = series.total_realized / n
    mean_target = series.total_target / n
    q = spec.weight_exponent
    if q == 0.0:
        if mean_realized == 0.0:
            raise ZeroTotalError("realized total is zero")
        return mean_realized**spec.exponent
    if spec.exponent == 1.0 and q == -1.0:
        return 1.0
    mean = (
        mean_realized if spec.weight_side is WeightSide.REALIZED else mean_target
    )
    if mean == 0.0:
        raise ZeroTotalError(f"{spec.weight_side.value} total is zero")
    return mean


def equivalence_difference(spec: LossSpec, series: PairedSeries) -> float:
    """Mean level loss minus the constant times the mean share loss."""
    constant = equivalence_constant(spec, series)
    mean_level = level_loss(spec, series).value
    mean_share = share_loss(spec, series).value
    return mean_level - constant * mean_share


def equivalence_ratio(
    spec: LossSpec, series: PairedSeries
) -> tuple[float | None, float | None]:
    """Both orientations of the mean-loss ratio.

    Returns ``(share_over_level, level_over_share)``; an orientation is
    ``None`` exactly when its denominator mean is zero (identical
    series make both undefined).
    """
    mean_level = level_loss(spec, series).value
    mean_share = share_loss(spec, series).value
    share_over_level = None if mean_level == 0.0 else mean_share / mean_level
    level_over_share = None if mean_share == 0.0 else mean_level / mean_share
    return share_over_level, level_over_share


def rescaling_gap(spec: LossSpec, series: PairedSeries) -> float:
    """Mean weighted change in the loss from aligning the totals.

    Averages ``w(share_i) * (|X_i - Y_i|**p - |X_i - c*Y_i|**p)`` where
    ``c`` is the ratio of totals and the weight is evaluated at the
    share on the spec's weight side.  Identically zero when the totals
    already agree (``c == 1``), since both inner terms coincide
    termwise.
    """
    c = total_ratio(series)
    x = series.realized
    y = series.target
    shares = (
        series.realized_shares().shares
        if spec.weight_side is WeightSide.REALIZED
        else series.target_shares().shares
    )
    weights, keep = weights_for(shares, spec)
    used = int(np.count_nonzero(keep))
    if used == 0:
        raise EmptyAfterSkipError("all units were skipped by the zero-weight policy")
    p = spec.exponent
    inner = np.abs(x - y) ** p - np.abs(x - c * y) ** p
    return float(np.sum((weights * inner)[keep])) / used


def per_unit_differences(spec: LossSpec, series: PairedSeries) -> np.ndarray:
    """Level loss minus constant times share loss, unit by unit.

    Units dropped by a SKIP_UNIT policy (on either the level or the
    share side) are omitted from the result.
    """
    constant = equivalence_constant(spec, series)
    level_values, level_keep = per_unit_level_losses(spec, series)
    share_values, share_keep = per_unit_share_losses(spec, series)
    keep = level_keep & share_keep
    return level_values[keep] - constant * share_values[keep]


@dataclass(frozen=True)
class EquivalenceReport:
    """Every level/share diagnostic for one dataset and loss spec."""

    n_units: int
    total_ratio: float
    mean_realized: float
    mean_target: float
    equivalence_constant: float
    mean_level_loss: float
    mean_share_loss: float
    equivalence_difference: float
    ratio_share_over_level: float | None
    ratio_level_over_share: float | None
    rescaling_gap: float
    max_per_unit_difference: float
    sparse_fraction: float


def full_report(
    spec: LossSpec,
    series: PairedSeries,
    eps: EpsilonSchedule | float = EpsilonSchedule(),
) -> EquivalenceReport:
    """Assemble the complete equivalence report.

    ``sparse_fraction`` is the fraction of units flagged by
    :func:`levelshare.assumptions.deviation_set` at the full sample
    size under ``eps``.
    """
    n = series.n
    ratio = total_ratio(series)
    constant = equivalence_constant(spec, series)
    mean_level = level_loss(spec, series).value
    mean_share = share_loss(spec, series).value
    share_over_level, level_over_share = equivalence_ratio(spec, series)
    unit_diffs = per_unit_differences(spec, series)
    max_unit = float(np.max(np.abs(unit_diffs))) if unit_diffs.size else 0.0
    flagged = deviation_set(series, eps, n)
    return EquivalenceReport(
        n_units=n,
        total_ratio=ratio,
        mean_realized=series.total_realized / n,
        mean_target=series.total_target / n,
        equivalence_constant=constant,
        mean_level_loss=mean_level,
        mean_share_loss=mean_share,
        equivalence_difference=mean_level - constant * mean_share,
        ratio_share_over_level=share_over_level,
        ratio_level_over_share=level_over_share,
        rescaling_gap=rescaling_gap(spec, series),
        max_per_unit_difference=max_unit,
        sparse_fraction=len(flagged) / n,
    )
