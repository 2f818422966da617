"""Weighted exponentiated difference losses in level and share form.

The family is ``|a_i - b_i|**p * w(base_i)`` with weight ``w(t) = t**q``,
``p > 0`` and ``q <= 0``.  Level form feeds the raw values through;
share form feeds each series' shares of its own total.  The catalog of
named measures (total/mean absolute difference, index of dissimilarity,
chi-square and friends) dispatches onto this family.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyAfterSkipError,
    InvalidParametersError,
    UnknownMeasureError,
    ZeroWeightError,
)
from .series import PairedSeries


class WeightSide(enum.Enum):
    """Which side of the pair the weight is evaluated on."""

    REALIZED = "realized"
    TARGET = "target"


class ZeroWeightPolicy(enum.Enum):
    """What to do when a negative weight exponent meets a zero base."""

    ERROR = "error"
    SKIP_UNIT = "skip_unit"


class Normalization(enum.Enum):
    TOTAL = "total"
    MEAN = "mean"
    HALF_MEAN = "half_mean"
    HALF_TOTAL = "half_total"


@dataclass(frozen=True)
class LossSpec:
    """Parameters of one member of the loss family.

    Parameters
    ----------
    exponent : float
        Power ``p > 0`` applied to the absolute difference.
    weight_exponent : float
        Power ``q <= 0`` defining the weight ``w(t) = t**q``.  ``q = 0``
        means unit weights, including at a zero base.
    weight_side : WeightSide
        Whether the weight base is the realized or the target value.
    zero_weight_policy : ZeroWeightPolicy
        Handling of zero bases under ``q < 0``: raise, or drop the unit
        and report a reduced ``units_used``.
    """

    exponent: float
    weight_exponent: float = 0.0
    weight_side: WeightSide = WeightSide.TARGET
    zero_weight_policy: ZeroWeightPolicy = ZeroWeightPolicy.ERROR

    def __post_init__(self):
        if not (self.exponent > 0 and np.isfinite(self.exponent)):
            raise InvalidParametersError(
                f"exponent must be positive and finite, got {self.exponent}"
            )
        if not (self.weight_exponent <= 0 and np.isfinite(self.weight_exponent)):
            raise InvalidParametersError(
                f"weight exponent must be <= 0 and finite, got {self.weight_exponent}"
            )


@dataclass(frozen=True)
class MeasureValue:
    """A computed measure plus how many units actually entered it."""

    value: float
    units_used: int
    normalization: Normalization


def weights_for(
    base: np.ndarray, spec: LossSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate ``w(t) = t**q`` on ``base`` under the spec's policy.

    Returns ``(weights, keep)`` where ``keep`` marks units that survive
    the zero-weight policy.  Skipped units carry weight 0.
    """
    q = spec.weight_exponent
    if q == 0.0:
        return np.ones_like(base), np.ones(base.shape, dtype=bool)
    zero = base == 0.0
    if np.any(zero):
        if spec.zero_weight_policy is ZeroWeightPolicy.ERROR:
            raise ZeroWeightError(
                "zero weight base with negative weight exponent "
                f"(q={q}); use SKIP_UNIT to drop such units"
            )
        keep = ~zero
    else:
        keep = np.ones(base.shape, dtype=bool)
    weights = np.zeros_like(base)
    weights[keep] = base[keep] ** q
    return weights, keep


def _per_unit(
    spec: LossSpec, a: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-unit loss values ``|a-b|**p * w`` and the keep mask.

    ``a`` is the realized side, ``b`` the target side (levels or shares).
    """
    base = a if spec.weight_side is WeightSide.REALIZED else b
    weights, keep = weights_for(base, spec)
    values = np.abs(a - b) ** spec.exponent * weights
    return values, keep


def per_unit_level_losses(
    spec: LossSpec, series: PairedSeries
) -> tuple[np.ndarray, np.ndarray]:
    """Per-unit level losses and keep mask."""
    return _per_unit(spec, series.realized, series.target)


def per_unit_share_losses(
    spec: LossSpec, series: PairedSeries
) -> tuple[np.ndarray, np.ndarray]:
    """Per-unit share losses and keep mask; requires positive totals."""
    x = series.realized_shares().shares
    y = series.target_shares().shares
    return _per_unit(spec, x, y)


def _normalize(
    values: np.ndarray, keep: np.ndarray, normalization: Normalization
) -> MeasureValue:
    used = int(np.count_nonzero(keep))
    if used == 0:
        raise EmptyAfterSkipError("all units were skipped by the zero-weight policy")
    total = float(np.sum(values[keep]))
    if normalization is Normalization.TOTAL:
        value = total
    elif normalization is Normalization.MEAN:
        value = total / used
    elif normalization is Normalization.HALF_MEAN:
        value = total / (2 * used)
    else:
        value = total / 2
    return MeasureValue(value, used, normalization)


def level_loss(
    spec: LossSpec,
    series: PairedSeries,
    normalization: Normalization = Normalization.MEAN,
) -> MeasureValue:
    """Weighted exponentiated difference loss on the raw levels.

    The mean form divides the summed per-unit losses by the number of
    units used; the total form does not divide.  The value is zero
    exactly when realized and target agree on every counted unit.
    """
    values, keep = per_unit_level_losses(spec, series)
    return _normalize(values, keep, normalization)


def share_loss(
    spec: LossSpec,
    series: PairedSeries,
    normalization: Normalization = Normalization.MEAN,
) -> MeasureValue:
    """Same loss applied to each series' shares of its own total.

    Requires both totals to be positive.  The weight base is the share
    on the configured weight side.
    """
    values, keep = per_unit_share_losses(spec, series)
    return _normalize(values, keep, normalization)


class MeasureName(enum.Enum):
    TOTAL_ABSOLUTE_DIFFERENCE = "total_absolute_difference"
    MEAN_ABSOLUTE_DIFFERENCE = "mean_absolute_difference"
    INDEX_OF_DISSIMILARITY = "index_of_dissimilarity"
    TOTAL_ABSOLUTE_ERROR_OF_SHARES = "total_absolute_error_of_shares"
    CHI_SQUARE = "chi_square"
    PEARSON_CHI_SQUARE_DIVERGENCE = "pearson_chi_square_divergence"
    HUNTINGTON_HILL = "huntington_hill"
    COBB_DOUGLAS = "cobb_douglas"


MEASURE_LABELS = {
    MeasureName.TOTAL_ABSOLUTE_DIFFERENCE: "Total Absolute Difference",
    MeasureName.MEAN_ABSOLUTE_DIFFERENCE: "Mean Absolute Difference",
    MeasureName.INDEX_OF_DISSIMILARITY: "Index of Dissimilarity",
    MeasureName.TOTAL_ABSOLUTE_ERROR_OF_SHARES: "Total Absolute Error of Shares",
    MeasureName.CHI_SQUARE: "Chi-Square",
    MeasureName.PEARSON_CHI_SQUARE_DIVERGENCE: "Pearson Chi-Square Divergence",
    MeasureName.HUNTINGTON_HILL: "Huntington-Hill",
    MeasureName.COBB_DOUGLAS: "Cobb-Douglas",
}

# name -> (spec, use shares?, normalization)
_CATALOG = {
    MeasureName.TOTAL_ABSOLUTE_DIFFERENCE: (
        LossSpec(1.0), False, Normalization.TOTAL),
    MeasureName.MEAN_ABSOLUTE_DIFFERENCE: (
        LossSpec(1.0), False, Normalization.MEAN),
    MeasureName.TOTAL_ABSOLUTE_ERROR_OF_SHARES: (
        LossSpec(1.0), True, Normalization.TOTAL),
    MeasureName.CHI_SQUARE: (
        LossSpec(2.0, -1.0, WeightSide.TARGET), False, Normalization.TOTAL),
    MeasureName.PEARSON_CHI_SQUARE_DIVERGENCE: (
        LossSpec(2.0, -1.0, WeightSide.TARGET), True, Normalization.TOTAL),
    MeasureName.HUNTINGTON_HILL: (
        LossSpec(2.0, -1.0, WeightSide.REALIZED), False, Normalization.TOTAL),
}


def named_measure(
    name: MeasureName | str,
    series: PairedSeries,
    *,
    id_normalization: str = "paper",
    exponent: float | None = None,
    weight_exponent: float | None = None,
    arguments: str = "level",
) -> MeasureValue:
    """Compute a measure from the named catalog.

    Parameters
    ----------
    name : MeasureName or str
        Catalog entry; strings use the enum values, e.g.
        ``"index_of_dissimilarity"``.
    id_normalization : str
        For the index of dissimilarity only: ``"paper"`` divides the
        summed absolute share differences by ``2n``; ``"conventional"``
        divides by 2.
    exponent, weight_exponent : float
        Required for ``cobb_douglas`` (``weight_exponent < 0``); ignored
        otherwise.
    arguments : str
        For ``cobb_douglas``: ``"level"`` or ``"share"`` arguments.
    """
    if isinstance(name, str):
        try:
            name = MeasureName(name)
        except ValueError:
            known = ", ".join(m.value for m in MeasureName)
            raise UnknownMeasureError(f"unknown measure {name!r}; known: {known}")

    if name is MeasureName.INDEX_OF_DISSIMILARITY:
        if id_normalization == "paper":
            normalization = Normalization.HALF_MEAN
        elif id_normalization == "conventional":
            normalization = Normalization.HALF_TOTAL
        else:
            raise InvalidParametersError(
                f"id_normalization must be 'paper' or 'conventional', got {id_normalization!r}"
            )
        return share_loss(LossSpec(1.0), series, normalization)

    if name is MeasureName.COBB_DOUGLAS:
        if exponent is None or weight_exponent is None:
            raise InvalidParametersError(
                "cobb_douglas needs exponent and weight_exponent"
            )
        if weight_exponent >= 0:
            raise InvalidParametersError(
                "cobb_douglas weight_exponent must be negative"
            )
        spec = LossSpec(exponent, weight_exponent, WeightSide.TARGET)
        if arguments == "level":
            return level_loss(spec, series, Normalization.TOTAL)
        if arguments == "share":
            return share_loss(spec, series, Normalization.TOTAL)
        raise InvalidParametersError(
            f"arguments must be 'level' or 'share', got {arguments!r}"
        )

    spec, use_shares, normalization = _CATALOG[name]
    fn = share_loss if use_shares else level_loss
    return fn(spec, series, normalization)
