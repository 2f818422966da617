"""Shared test helpers: random series factories and exact rescaling."""

from __future__ import annotations

import math

import numpy as np

from levelshare import PairedSeries


def random_series(
    rng: np.random.Generator,
    n: int | None = None,
    lo: float = 1.0,
    hi: float = 10.0,
    max_n: int = 100,
) -> PairedSeries:
    """Independent positive uniform values on both sides."""
    if n is None:
        n = int(rng.integers(2, max_n + 1))
    return PairedSeries(rng.uniform(lo, hi, n), rng.uniform(lo, hi, n))


def rescale_to_equal_totals(series: PairedSeries) -> PairedSeries:
    """Rescale the target so both exact totals agree bit for bit.

    Multiplies the target by the ratio of totals, then nudges the first
    entry until ``math.fsum`` of both sides returns the identical
    double.  Fails loudly if the nudge does not converge.
    """
    goal = series.total_realized
    target = np.array(series.target) * (goal / series.total_target)
    for _ in range(10):
        gap = goal - math.fsum(target)
        if gap == 0.0:
            result = PairedSeries(series.realized, target)
            assert result.total_realized == result.total_target
            return result
        target = target.copy()
        target[0] += gap
    raise AssertionError("exact total rescaling did not converge")
