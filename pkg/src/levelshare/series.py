"""Paired target/realization series and their share representation.

A :class:`PairedSeries` holds aligned nonnegative ``realized`` and
``target`` vectors, one entry per unit.  Shares are a unit's value
divided by its series total; share-based operations therefore require
strictly positive totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DataError,
    NegativeValueError,
    NonFiniteValueError,
    ZeroTotalError,
)

SHARE_SUM_TOLERANCE = 1e-12


def exact_total(values: Iterable[float]) -> float:
    """Exactly rounded sum of ``values``.

    Uses ``math.fsum``, which is independent of summation order.  Series
    totals drive share denominators and total ratios, so they get the
    exact treatment; bulk loss accumulation uses numpy's pairwise sum.
    """
    return math.fsum(values)


def _as_valid_array(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DataError(f"{what} must contain at least one unit")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError(f"{what} contains non-finite values")
    if np.any(arr < 0):
        raise NegativeValueError(f"{what} contains negative values")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ShareSeries:
    """Shares of a series total; entries lie in [0, 1] and sum to 1."""

    shares: np.ndarray

    def __post_init__(self):
        arr = _as_valid_array(self.shares, "shares")
        if np.any(arr > 1.0):
            raise DataError("shares exceed 1")
        total = exact_total(arr)
        if abs(total - 1.0) > SHARE_SUM_TOLERANCE:
            raise DataError(f"shares sum to {total!r}, not 1")
        object.__setattr__(self, "shares", arr)

    @property
    def n(self) -> int:
        return int(self.shares.size)


def to_shares(values: Sequence[float] | np.ndarray) -> ShareSeries:
    """Convert nonnegative values to shares of their total.

    Parameters
    ----------
    values : array-like
        Nonnegative, finite values with a strictly positive sum.

    Returns
    -------
    ShareSeries
        ``values / sum(values)``; sums to 1 within 1e-12.

    Raises
    ------
    ZeroTotalError
        If the values sum to zero.
    NegativeValueError
        If any value is negative.
    """
    arr = _as_valid_array(values, "values")
    total = exact_total(arr)
    if total == 0.0:
        raise ZeroTotalError("cannot form shares of an all-zero series")
    return ShareSeries(arr / total)


@dataclass(frozen=True, eq=False)
class PairedSeries:
    """Aligned nonnegative realization/target vectors with unit labels.

    ``realized`` holds the produced values (estimates, counts,
    predictions) and ``target`` the values they are measured against.
    Labels are optional; positional labels ``u1..un`` are generated when
    none are supplied.
    """

    realized: np.ndarray
    target: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        realized = _as_valid_array(self.realized, "realized")
        target = _as_valid_array(self.target, "target")
        if realized.size != target.size:
            raise DataError(
                f"realized has {realized.size} units, target has {target.size}"
            )
        if self.labels is not None:
            labels = tuple(str(v) for v in self.labels)
            if len(labels) != realized.size:
                raise DataError(
                    f"{len(labels)} labels for {realized.size} units"
                )
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "realized", realized)
        object.__setattr__(self, "target", target)

    @property
    def n(self) -> int:
        return int(self.realized.size)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(f"u{i + 1}" for i in range(self.n))

    @cached_property
    def total_realized(self) -> float:
        return exact_total(self.realized)

    @cached_property
    def total_target(self) -> float:
        return exact_total(self.target)

    def realized_shares(self) -> ShareSeries:
        if self.total_realized == 0.0:
            raise ZeroTotalError("realized series total is zero")
        return ShareSeries(self.realized / self.total_realized)

    def target_shares(self) -> ShareSeries:
        if self.total_target == 0.0:
            raise ZeroTotalError("target series total is zero")
        return ShareSeries(self.target / self.total_target)

    def prefix(self, at_n: int) -> PairedSeries:
        """First ``at_n`` units as a new series."""
        if not 1 <= at_n <= self.n:
            raise IndexError(f"prefix length {at_n} outside [1, {self.n}]")
        labels = self.labels[:at_n] if self.labels is not None else None
        return PairedSeries(self.realized[:at_n], self.target[:at_n], labels)
