"""Loss family evaluation and the named-measure catalog."""

import numpy as np
import pytest

from conftest import random_series, rescale_to_equal_totals
from levelshare import (
    EmptyAfterSkipError,
    InvalidParametersError,
    LossSpec,
    MeasureName,
    Normalization,
    PairedSeries,
    UnknownMeasureError,
    WeightSide,
    ZeroWeightError,
    ZeroWeightPolicy,
    level_loss,
    named_measure,
    share_loss,
    small_sample_datasets,
)

SET1, SET2 = small_sample_datasets()
APE = LossSpec(1.0, -1.0, WeightSide.TARGET)


def test_loss_spec_validation():
    with pytest.raises(InvalidParametersError):
        LossSpec(0.0)
    with pytest.raises(InvalidParametersError):
        LossSpec(-1.0)
    with pytest.raises(InvalidParametersError):
        LossSpec(1.0, 0.5)


def test_total_absolute_difference_both_sets():
    assert level_loss(LossSpec(1.0), SET1, Normalization.TOTAL).value == 10.0
    assert level_loss(LossSpec(1.0), SET2, Normalization.TOTAL).value == 10.0


def test_weighted_squared_level_loss():
    # 1^2/10 + 9^2/990 = 2/11, target-weighted
    spec = LossSpec(2.0, -1.0, WeightSide.TARGET)
    value = level_loss(spec, SET1, Normalization.TOTAL).value
    assert value == pytest.approx(2.0 / 11.0, rel=1e-14)


def test_share_loss_absolute_difference():
    result = share_loss(LossSpec(1.0), SET1, Normalization.TOTAL)
    assert result.value == pytest.approx(2 * 9 / 10100, rel=1e-12)
    assert round(result.value, 4) == 0.0018


def test_share_loss_identical_series_is_zero():
    series = PairedSeries([3.0, 7.0], [3.0, 7.0])
    assert share_loss(LossSpec(1.0), series).value == 0.0


def test_share_loss_weighted_squared():
    # shares (0.5, 0.5) vs (0.25, 0.75): 0.25^2/0.25 + 0.25^2/0.75 = 1/3
    series = PairedSeries([1.0, 1.0], [1.0, 3.0])
    spec = LossSpec(2.0, -1.0, WeightSide.TARGET)
    value = share_loss(spec, series, Normalization.TOTAL).value
    assert value == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_mean_vs_total_forms():
    spec = LossSpec(1.0)
    total = level_loss(spec, SET1, Normalization.TOTAL)
    mean = level_loss(spec, SET1, Normalization.MEAN)
    assert total.value == 10.0
    assert mean.value == 5.0
    assert total.units_used == mean.units_used == 2


def test_zero_weight_policy_error_and_skip():
    series = PairedSeries([1.0, 2.0], [0.0, 4.0])
    spec = LossSpec(1.0, -1.0, WeightSide.TARGET)
    with pytest.raises(ZeroWeightError):
        level_loss(spec, series)
    skipping = LossSpec(
        1.0, -1.0, WeightSide.TARGET, ZeroWeightPolicy.SKIP_UNIT
    )
    result = level_loss(skipping, series, Normalization.TOTAL)
    assert result.units_used == 1
    assert result.value == pytest.approx(2.0 / 4.0)
    all_zero = PairedSeries([1.0], [0.0])
    with pytest.raises(EmptyAfterSkipError):
        level_loss(skipping, all_zero)


def test_unit_weights_accept_zero_values():
    # q = 0 means the weight is 1 even at a zero base
    series = PairedSeries([0.0, 2.0], [1.0, 0.0])
    assert level_loss(LossSpec(1.0), series, Normalization.TOTAL).value == 3.0


def test_index_of_dissimilarity_paper_and_conventional():
    paper1 = named_measure(MeasureName.INDEX_OF_DISSIMILARITY, SET1)
    paper2 = named_measure(MeasureName.INDEX_OF_DISSIMILARITY, SET2)
    assert round(paper1.value, 4) == 0.0004
    assert round(paper2.value, 4) == 0.0024
    assert paper1.value == pytest.approx(9 / 20200, rel=1e-12)
    assert paper2.value == pytest.approx(49 / 20200, rel=1e-12)
    conventional = named_measure(
        MeasureName.INDEX_OF_DISSIMILARITY, SET1, id_normalization="conventional"
    )
    # with n = 2 the conventional half-total is twice the per-unit half-mean
    assert conventional.value == pytest.approx(2 * paper1.value, rel=1e-14)


def test_pearson_chi_square_divergence():
    value = named_measure(MeasureName.PEARSON_CHI_SQUARE_DIVERGENCE, SET1).value
    assert value == pytest.approx(8.02e-5, rel=5e-3)


def test_named_measure_catalog_dispatch():
    assert named_measure("total_absolute_difference", SET1).value == 10.0
    assert named_measure(MeasureName.MEAN_ABSOLUTE_DIFFERENCE, SET1).value == 5.0
    taes = named_measure(MeasureName.TOTAL_ABSOLUTE_ERROR_OF_SHARES, SET1).value
    assert taes == pytest.approx(2 * 9 / 10100, rel=1e-12)
    chi = named_measure(MeasureName.CHI_SQUARE, SET1).value
    assert chi == pytest.approx(2 / 11, rel=1e-14)
    hh = named_measure(MeasureName.HUNTINGTON_HILL, SET1).value
    assert hh == pytest.approx(1.0 / 11 + 81.0 / 999, rel=1e-14)
    cd = named_measure(
        MeasureName.COBB_DOUGLAS, SET1, exponent=2.0, weight_exponent=-1.0
    ).value
    assert cd == pytest.approx(chi, rel=1e-14)
    cd_share = named_measure(
        MeasureName.COBB_DOUGLAS, SET1, exponent=2.0, weight_exponent=-1.0,
        arguments="share",
    ).value
    assert cd_share == pytest.approx(8.02e-5, rel=5e-3)


def test_named_measure_errors():
    with pytest.raises(UnknownMeasureError):
        named_measure("no_such_measure", SET1)
    with pytest.raises(InvalidParametersError):
        named_measure(MeasureName.COBB_DOUGLAS, SET1, exponent=None)
    with pytest.raises(InvalidParametersError):
        named_measure(
            MeasureName.COBB_DOUGLAS, SET1, exponent=1.0, weight_exponent=0.5
        )
    with pytest.raises(InvalidParametersError):
        named_measure(MeasureName.INDEX_OF_DISSIMILARITY, SET1,
                      id_normalization="bogus")


def test_nonnegativity_and_zero_at_equality():
    rng = np.random.default_rng(11)
    specs = [
        LossSpec(0.5), LossSpec(1.0), LossSpec(2.0),
        LossSpec(2.0, -1.0, WeightSide.TARGET),
        LossSpec(1.5, -0.5, WeightSide.REALIZED),
    ]
    for _ in range(50):
        series = random_series(rng)
        equal = PairedSeries(series.realized, series.realized)
        for spec in specs:
            assert level_loss(spec, series).value >= 0.0
            assert share_loss(spec, series).value >= 0.0
            assert level_loss(spec, equal).value == 0.0
            assert share_loss(spec, equal).value == 0.0


def test_share_loss_scale_invariance():
    rng = np.random.default_rng(12)
    spec = LossSpec(2.0, -1.0, WeightSide.TARGET)
    for _ in range(50):
        series = random_series(rng)
        alpha, beta = rng.uniform(0.1, 50.0, 2)
        scaled = PairedSeries(alpha * series.realized, beta * series.target)
        original = share_loss(spec, series).value
        rescaled = share_loss(spec, scaled).value
        assert rescaled == pytest.approx(original, rel=1e-12)


def test_level_loss_homogeneity_unit_weights():
    rng = np.random.default_rng(13)
    for p in (0.5, 1.0, 2.0, 3.0):
        spec = LossSpec(p)
        for _ in range(25):
            series = random_series(rng)
            alpha = float(rng.uniform(0.1, 20.0))
            scaled = PairedSeries(alpha * series.realized, alpha * series.target)
            assert level_loss(spec, scaled).value == pytest.approx(
                alpha**p * level_loss(spec, series).value, rel=1e-12
            )


def test_ape_level_equals_share_at_equal_totals():
    rng = np.random.default_rng(14)
    for _ in range(50):
        series = rescale_to_equal_totals(random_series(rng))
        level = level_loss(APE, series).value
        share = share_loss(APE, series).value
        assert share == pytest.approx(level, rel=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(15)
    specs = [LossSpec(1.0), LossSpec(2.0, -1.0, WeightSide.TARGET)]
    for _ in range(25):
        series = random_series(rng)
        order = rng.permutation(series.n)
        shuffled = PairedSeries(series.realized[order], series.target[order])
        for spec in specs:
            for fn in (level_loss, share_loss):
                assert fn(spec, shuffled).value == pytest.approx(
                    fn(spec, series).value, rel=1e-12
                )
        for name in (MeasureName.INDEX_OF_DISSIMILARITY, MeasureName.CHI_SQUARE):
            assert named_measure(name, shuffled).value == pytest.approx(
                named_measure(name, series).value, rel=1e-12
            )
