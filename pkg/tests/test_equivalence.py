"""Level/share equivalence diagnostics."""

import numpy as np
import pytest

from conftest import random_series, rescale_to_equal_totals
from levelshare import (
    EpsilonSchedule,
    LossSpec,
    PairedSeries,
    WeightSide,
    ZeroTotalError,
    compliant_generator,
    equivalence_constant,
    equivalence_difference,
    equivalence_ratio,
    full_report,
    level_loss,
    per_unit_differences,
    rescaling_gap,
    run_convergence,
    share_level_identity,
    share_loss,
    small_sample_datasets,
    total_ratio,
)

SET1, _ = small_sample_datasets()
APE = LossSpec(1.0, -1.0, WeightSide.TARGET)


def test_total_ratio():
    assert total_ratio(SET1) == pytest.approx(1.01, rel=1e-15)
    equal = PairedSeries([3.0, 4.0], [3.0, 4.0])
    assert total_ratio(equal) == 1.0
    assert total_ratio(PairedSeries([2.0, 4.0], [1.0, 2.0])) == 2.0
    with pytest.raises(ZeroTotalError):
        total_ratio(PairedSeries([1.0], [0.0]))


def test_share_level_identity_examples():
    series = PairedSeries([2.0, 2.0], [1.0, 3.0])
    lhs, rhs = share_level_identity(series, 0, 1.0)
    assert lhs == pytest.approx(0.25, abs=1e-15)
    assert rhs == pytest.approx(0.25, abs=1e-15)
    lhs2, rhs2 = share_level_identity(series, 0, 2.0)
    assert (lhs2, rhs2) == (pytest.approx(0.0625), pytest.approx(0.0625))
    equal = PairedSeries([5.0, 6.0], [5.0, 6.0])
    assert share_level_identity(equal, 1, 3.0) == (0.0, 0.0)
    with pytest.raises(IndexError):
        share_level_identity(series, 2, 1.0)
    with pytest.raises(IndexError):
        share_level_identity(series, -1, 1.0)


def test_share_level_identity_random_sweep():
    rng = np.random.default_rng(21)
    worst = 0.0
    for _ in range(300):
        series = random_series(rng, lo=1e-3, hi=1e6)
        for p in (0.5, 1.0, 2.0, 3.0):
            idx = int(rng.integers(series.n))
            lhs, rhs = share_level_identity(series, idx, p)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    assert worst <= 1e-12


def test_equivalence_constant_catalog():
    rng = np.random.default_rng(22)
    series = random_series(rng)
    assert equivalence_constant(APE, series) == 1.0
    ape_realized = LossSpec(1.0, -1.0, WeightSide.REALIZED)
    assert equivalence_constant(ape_realized, series) == 1.0
    two_units = PairedSeries([1.0, 3.0], [5.0, 7.0])
    assert equivalence_constant(LossSpec(1.0), two_units) == 2.0
    assert equivalence_constant(LossSpec(2.0), two_units) == 4.0
    webster = LossSpec(2.0, -1.0, WeightSide.TARGET)
    assert equivalence_constant(webster, two_units) == 6.0
    equal_proportions = LossSpec(2.0, -1.0, WeightSide.REALIZED)
    assert equivalence_constant(equal_proportions, two_units) == 2.0
    cobb_douglas = LossSpec(1.5, -0.5, WeightSide.TARGET)
    assert equivalence_constant(cobb_douglas, two_units) == 6.0


def test_equivalence_difference_small_sample():
    diff = equivalence_difference(LossSpec(1.0), SET1)
    assert diff == pytest.approx(4.55, rel=1e-12)


def test_equivalence_difference_trivial_cases():
    equal = PairedSeries([2.0, 9.0], [2.0, 9.0])
    assert equivalence_difference(LossSpec(2.0), equal) == 0.0
    rng = np.random.default_rng(23)
    series = rescale_to_equal_totals(random_series(rng))
    assert equivalence_difference(APE, series) == pytest.approx(0.0, abs=1e-13)


def test_equivalence_ratio_orientations():
    equal = PairedSeries([2.0, 9.0], [2.0, 9.0])
    assert equivalence_ratio(LossSpec(1.0), equal) == (None, None)

    rng = np.random.default_rng(24)
    series = rescale_to_equal_totals(random_series(rng))
    share_over_level, level_over_share = equivalence_ratio(APE, series)
    assert share_over_level == pytest.approx(1.0, rel=1e-12)
    assert level_over_share == pytest.approx(1.0, rel=1e-12)

    share_over_level, level_over_share = equivalence_ratio(LossSpec(1.0), SET1)
    assert share_over_level == pytest.approx(1.782e-4, rel=1e-3)
    assert share_over_level * level_over_share == pytest.approx(1.0, rel=1e-12)


def test_ratio_duality_on_random_series():
    rng = np.random.default_rng(25)
    for _ in range(50):
        series = random_series(rng)
        a, b = equivalence_ratio(LossSpec(1.0), series)
        assert a is not None and b is not None
        assert a * b == pytest.approx(1.0, rel=1e-12)


def test_rescaling_gap_small_sample():
    assert rescaling_gap(LossSpec(1.0), SET1) == pytest.approx(4.1, rel=1e-12)


def test_rescaling_gap_zero_at_equal_totals():
    series = PairedSeries([2.0, 2.0], [1.0, 3.0])
    assert rescaling_gap(LossSpec(1.0), series) == 0.0
    rng = np.random.default_rng(26)
    for _ in range(50):
        rescaled = rescale_to_equal_totals(random_series(rng))
        for p in (0.5, 1.0, 2.0):
            assert rescaling_gap(LossSpec(p), rescaled) == 0.0


def test_per_unit_differences():
    diffs = per_unit_differences(LossSpec(1.0), SET1)
    assert diffs == pytest.approx([0.55, 8.55], rel=1e-12)
    equal = PairedSeries([2.0, 9.0], [2.0, 9.0])
    assert np.array_equal(per_unit_differences(LossSpec(2.0), equal), [0.0, 0.0])
    rng = np.random.default_rng(27)
    series = rescale_to_equal_totals(random_series(rng))
    assert np.max(np.abs(per_unit_differences(APE, series))) <= 1e-13


def test_full_report_small_sample():
    report = full_report(LossSpec(1.0), SET1)
    assert report.n_units == 2
    assert report.total_ratio == pytest.approx(1.01, rel=1e-15)
    assert report.equivalence_constant == 505.0
    assert report.equivalence_difference == pytest.approx(4.55, rel=1e-12)
    assert report.rescaling_gap == pytest.approx(4.1, rel=1e-12)
    assert report.max_per_unit_difference == pytest.approx(8.55, rel=1e-12)


def test_full_report_identical_series():
    equal = PairedSeries([2.0, 9.0], [2.0, 9.0])
    report = full_report(LossSpec(1.0), equal)
    assert report.equivalence_difference == 0.0
    assert report.ratio_share_over_level is None
    assert report.ratio_level_over_share is None
    assert report.rescaling_gap == 0.0
    assert report.sparse_fraction == 0.0


def test_full_report_cross_consistency():
    rng = np.random.default_rng(28)
    spec = LossSpec(2.0, -1.0, WeightSide.TARGET)
    for _ in range(25):
        series = random_series(rng)
        report = full_report(spec, series)
        assert report.total_ratio == pytest.approx(
            report.mean_realized / report.mean_target, rel=1e-12
        )
        recomputed = (
            level_loss(spec, series).value
            - report.equivalence_constant * share_loss(spec, series).value
        )
        assert report.equivalence_difference == pytest.approx(
            recomputed, rel=1e-12, abs=1e-15
        )
        assert 0.0 <= report.sparse_fraction <= 1.0


def test_full_report_single_unit():
    single = PairedSeries([4.0], [5.0])
    report = full_report(LossSpec(1.0), single)
    assert report.mean_share_loss == 0.0
    assert report.ratio_level_over_share is None
    assert report.ratio_share_over_level == 0.0


def test_rescaling_gap_envelope_across_grid():
    # |gap| stays under a two-term envelope fitted on a pilot seed:
    # one term in the total-ratio error, one in the flagged fraction.
    spec = LossSpec(1.0)
    grid = (100, 400, 1600, 6400)
    eps = EpsilonSchedule()

    def medians(seed):
        points = run_convergence(
            compliant_generator(seed=seed), spec, grid, replicates=40, eps=eps
        )
        gap = points.median_abs("keydiff")[1]
        ratio_err = points.median_abs("c_error")[1] ** min(spec.exponent, 1.0)
        flagged = points.median_abs("sparse_fraction")[1]
        return gap, ratio_err, flagged

    gap_pilot, ratio_pilot, flagged_pilot = medians(seed=404)
    c_ratio = float(np.max(gap_pilot / ratio_pilot))
    c_flagged = float(np.max(gap_pilot / flagged_pilot))

    gap, ratio_err, flagged = medians(seed=505)
    envelope = c_ratio * ratio_err + c_flagged * flagged
    assert np.all(gap <= envelope)
