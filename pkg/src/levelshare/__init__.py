"""Level- and share-based accuracy losses with equivalence diagnostics.

The same loss family can score raw values ("levels") or each unit's
share of its series total.  This package evaluates both forms, reports
the quantities that link them (ratio of totals, equivalence constant,
difference, ratios, rescaling gap), checks the regularity conditions
that make them asymptotically interchangeable, and runs seeded Monte
Carlo experiments that measure how fast the link tightens as the number
of units grows.
"""

from .assumptions import (
    AssumptionReport,
    DiagnosticConfig,
    EpsilonSchedule,
    Verdict,
    deviation_set,
    diagnose,
    mean_stability,
    moment_stability,
    sparse_deviations,
    weight_boundedness,
    weight_limits,
)
from .equivalence import (
    EquivalenceReport,
    equivalence_constant,
    equivalence_difference,
    equivalence_ratio,
    full_report,
    per_unit_differences,
    rescaling_gap,
    share_level_identity,
    total_ratio,
)
from .errors import (
    DataError,
    DegenerateInputError,
    DuplicateIdError,
    EmptyAfterSkipError,
    InvalidParametersError,
    NegativeValueError,
    NonFiniteValueError,
    ParseError,
    UnknownMeasureError,
    ZeroTotalError,
    ZeroWeightError,
)
from .io import (
    ExperimentConfig,
    load_experiment_config,
    read_dataset,
    read_rate_points,
    report_document,
    write_dataset,
    write_rate_points,
)
from .losses import (
    LossSpec,
    MeasureName,
    MeasureValue,
    Normalization,
    WeightSide,
    ZeroWeightPolicy,
    level_loss,
    named_measure,
    share_loss,
)
from .series import PairedSeries, ShareSeries, exact_total, to_shares
from .simulate import (
    ConstantPlusNoise,
    DeviationInjection,
    GeneratorSpec,
    NoiseModel,
    RateFit,
    RatePoint,
    RatePoints,
    SkewedHeavy,
    TwoPointScale,
    UniformPositive,
    compliant_generator,
    fit_rate,
    generate,
    run_convergence,
    small_sample_datasets,
    small_sample_demo,
    violating_generator,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "ConstantPlusNoise",
    "DataError",
    "DegenerateInputError",
    "DeviationInjection",
    "DiagnosticConfig",
    "DuplicateIdError",
    "EmptyAfterSkipError",
    "EpsilonSchedule",
    "EquivalenceReport",
    "ExperimentConfig",
    "GeneratorSpec",
    "InvalidParametersError",
    "LossSpec",
    "MeasureName",
    "MeasureValue",
    "NegativeValueError",
    "NoiseModel",
    "NonFiniteValueError",
    "Normalization",
    "PairedSeries",
    "ParseError",
    "RateFit",
    "RatePoint",
    "RatePoints",
    "ShareSeries",
    "SkewedHeavy",
    "TwoPointScale",
    "UniformPositive",
    "UnknownMeasureError",
    "Verdict",
    "WeightSide",
    "ZeroTotalError",
    "ZeroWeightError",
    "ZeroWeightPolicy",
    "compliant_generator",
    "deviation_set",
    "diagnose",
    "equivalence_constant",
    "equivalence_difference",
    "equivalence_ratio",
    "exact_total",
    "fit_rate",
    "full_report",
    "generate",
    "level_loss",
    "load_experiment_config",
    "mean_stability",
    "moment_stability",
    "named_measure",
    "per_unit_differences",
    "read_dataset",
    "read_rate_points",
    "report_document",
    "rescaling_gap",
    "run_convergence",
    "share_level_identity",
    "share_loss",
    "small_sample_datasets",
    "small_sample_demo",
    "sparse_deviations",
    "to_shares",
    "total_ratio",
    "violating_generator",
    "weight_boundedness",
    "weight_limits",
    "write_dataset",
    "write_rate_points",
]
