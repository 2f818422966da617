"""Synthetic paired-series generation and convergence experiments.

Generation is a pure function of (generator spec, size, replicate):
every random draw comes from a generator seeded with that triple, so
grid cells can run in any order and still reproduce bit for bit.

The construction: draw positive base values for the realized side
(optionally scaled by a latent factor drawn once per replicate, which
makes the sequence exchangeable rather than independent), derive the
target side by bounded multiplicative noise whose scale shrinks like
``n**(-noise decay)``, then hit a vanishing fraction of units
(``fraction * n**(-injection decay)``) with large multiplicative
shocks.  Positive decay keeps the shocked fraction vanishing; zero
decay keeps it constant, which is the canonical violating regime.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import stats

from .assumptions import EpsilonSchedule, deviation_set
from .equivalence import (
    EquivalenceReport,
    equivalence_difference,
    full_report,
    rescaling_gap,
    total_ratio,
)
from .errors import DegenerateInputError, InvalidParametersError
from .losses import LossSpec
from .series import PairedSeries


@dataclass(frozen=True)
class UniformPositive:
    """Base values uniform on [lo, hi), 0 <= lo < hi."""

    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise InvalidParametersError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi})")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, n)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class SkewedHeavy:
    """Right-skewed positive base values (gamma), like area populations."""

    shape: float = 2.0
    scale: float = 1.5

    def __post_init__(self):
        if self.shape <= 0 or self.scale <= 0:
            raise InvalidParametersError("shape and scale must be positive")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.gamma(self.shape, self.scale, n)

    def mean(self) -> float:
        return self.shape * self.scale


@dataclass(frozen=True)
class ConstantPlusNoise:
    """Base values ``level + uniform(-spread, spread)``."""

    level: float = 10.0
    spread: float = 0.0

    def __post_init__(self):
        if self.level <= 0 or not 0 <= self.spread <= self.level:
            raise InvalidParametersError(
                "need level > 0 and 0 <= spread <= level"
            )

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.spread == 0:
            return np.full(n, float(self.level))
        return self.level + rng.uniform(-self.spread, self.spread, n)

    def mean(self) -> float:
        return float(self.level)


BaseFamily = Union[UniformPositive, SkewedHeavy, ConstantPlusNoise]


@dataclass(frozen=True)
class NoiseModel:
    """Relative target noise: target = realized * (1 + sigma_n * zeta).

    ``sigma_n = scale * n**(-decay)``; ``zeta`` is uniform on [-1, 1],
    so the noise is symmetric and bounded and all moments exist.  The
    relative factor is clipped at 0 from below.
    """

    scale: float = 0.1
    decay: float = 0.25

    def __post_init__(self):
        if self.scale < 0 or self.decay < 0:
            raise InvalidParametersError("scale and decay must be >= 0")

    def sigma(self, n: int) -> float:
        return self.scale * n ** (-self.decay) if self.scale > 0 else 0.0


@dataclass(frozen=True)
class DeviationInjection:
    """Multiplicative shocks on a ``fraction * n**(-decay)`` subset."""

    fraction: float = 1.0
    decay: float = 0.5
    shock_lo: float = 2.0
    shock_hi: float = 10.0

    def __post_init__(self):
        if self.fraction < 0 or self.decay < 0:
            raise InvalidParametersError("fraction and decay must be >= 0")
        if not 0 < self.shock_lo <= self.shock_hi:
            raise InvalidParametersError("need 0 < shock_lo <= shock_hi")

    def count(self, n: int) -> int:
        return int(round(self.fraction * n ** (1.0 - self.decay)))

    def mean_shock(self) -> float:
        return 0.5 * (self.shock_lo + self.shock_hi)


@dataclass(frozen=True)
class TwoPointScale:
    """Latent scale drawn once per replicate: low or high."""

    low: float = 0.5
    high: float = 2.0
    high_probability: float = 0.5

    def __post_init__(self):
        if self.low <= 0 or self.high <= 0:
            raise InvalidParametersError("scales must be positive")
        if not 0 <= self.high_probability <= 1:
            raise InvalidParametersError("high_probability must be in [0, 1]")

    def sample(self, rng: np.random.Generator) -> float:
        return self.high if rng.random() < self.high_probability else self.low


@dataclass(frozen=True)
class GeneratorSpec:
    base: BaseFamily = SkewedHeavy()
    noise: NoiseModel = NoiseModel()
    injection: DeviationInjection | None = None
    mixing: TwoPointScale | None = None
    seed: int = 0

    def limit_ratio(self) -> float:
        """Limiting ratio of realized to target means.

        Noise is symmetric and shocked fractions with positive decay
        vanish, so the ratio is 1 unless shocks persist (zero decay),
        in which case the target mean stays inflated by the mean shock
        on the shocked fraction.
        """
        inj = self.injection
        if inj is not None and inj.decay == 0.0 and inj.fraction > 0.0:
            return 1.0 / (1.0 + inj.fraction * (inj.mean_shock() - 1.0))
        return 1.0


def compliant_generator(
    base: BaseFamily = SkewedHeavy(), seed: int = 0, mixing: TwoPointScale | None = None
) -> GeneratorSpec:
    """Regime satisfying all regularity conditions: shrinking noise and
    a shocked fraction vanishing like ``n**-0.5``.

    Shocks are kept in [2, 4]: large enough that shocked units are
    genuine deviants, small enough that their positive contribution to
    the rescaling gap cannot cancel the unshocked units' negative one
    (wider shocks make the gap non-monotone over small sizes).
    """
    return GeneratorSpec(
        base=base,
        noise=NoiseModel(scale=0.1, decay=0.25),
        injection=DeviationInjection(fraction=1.0, decay=0.5, shock_lo=2.0, shock_hi=4.0),
        mixing=mixing,
        seed=seed,
    )


def violating_generator(
    base: BaseFamily = SkewedHeavy(), fraction: float = 0.05, seed: int = 0
) -> GeneratorSpec:
    """Regime with a constant shocked fraction: deviations never thin out."""
    return GeneratorSpec(
        base=base,
        noise=NoiseModel(scale=0.1, decay=0.25),
        injection=DeviationInjection(fraction=fraction, decay=0.0),
        mixing=None,
        seed=seed,
    )


def generate(gen: GeneratorSpec, n: int, replicate: int = 0) -> PairedSeries:
    """Draw one paired series of size ``n``.

    Deterministic in (gen, n, replicate).  The injected shock count is
    exactly ``round(fraction * n**(1 - decay))``.
    """
    if n < 1:
        raise InvalidParametersError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng([abs(int(gen.seed)), int(n), int(replicate)])
    scale = gen.mixing.sample(rng) if gen.mixing is not None else 1.0
    realized = gen.base.sample(rng, n) * scale
    sigma = gen.noise.sigma(n)
    zeta = rng.uniform(-1.0, 1.0, n)
    target = realized * np.maximum(1.0 + sigma * zeta, 0.0)
    if gen.injection is not None:
        count = gen.injection.count(n)
        if count > n:
            raise InvalidParametersError(
                f"injection count {count} exceeds n={n}"
            )
        if count > 0:
            idx = rng.choice(n, size=count, replace=False)
            shocks = rng.uniform(gen.injection.shock_lo, gen.injection.shock_hi, count)
            target = target.copy()
            target[idx] *= shocks
    return PairedSeries(realized, target)


@dataclass(frozen=True)
class RatePoint:
    """One experiment cell: errors of a single generated series."""

    n: int
    replicate: int
    c_error: float
    diff: float
    keydiff: float
    sparse_fraction: float


@dataclass(frozen=True)
class RatePoints:
    points: tuple[RatePoint, ...]

    def grid(self) -> tuple[int, ...]:
        return tuple(sorted({p.n for p in self.points}))

    def median_abs(self, field: str) -> tuple[np.ndarray, np.ndarray]:
        """Per-size medians of |field|, sorted by size."""
        sizes = self.grid()
        medians = []
        for n in sizes:
            values = [abs(getattr(p, field)) for p in self.points if p.n == n]
            medians.append(float(np.median(values)))
        return np.asarray(sizes, dtype=float), np.asarray(medians)


def run_convergence(
    gen: GeneratorSpec,
    spec: LossSpec,
    n_grid: Sequence[int],
    replicates: int,
    eps: EpsilonSchedule | float = EpsilonSchedule(),
) -> RatePoints:
    """Generate a series per (size, replicate) cell and record its errors.

    Per cell: the absolute error of the ratio of totals against the
    generator's limiting ratio, the equivalence difference, the
    rescaling gap, and the flagged-deviation fraction.  Rows are
    emitted for every cell; any cell failure aborts with the cell's
    coordinates.
    """
    n_grid = tuple(int(n) for n in n_grid)
    if not n_grid:
        raise InvalidParametersError("n_grid is empty")
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidParametersError("n_grid must be strictly increasing")
    if replicates < 1:
        raise InvalidParametersError("replicates must be >= 1")
    limit = gen.limit_ratio()
    rows = []
    for n in n_grid:
        for replicate in range(replicates):
            try:
                series = generate(gen, n, replicate)
                c_err = abs(total_ratio(series) - limit)
                diff = equivalence_difference(spec, series)
                gap = rescaling_gap(spec, series)
                flagged = len(deviation_set(series, eps, n))
            except Exception as exc:
                raise RuntimeError(
                    f"experiment cell failed (n={n}, replicate={replicate}, "
                    f"seed={gen.seed}): {exc}"
                ) from exc
            rows.append(
                RatePoint(n, replicate, c_err, diff, gap, flagged / n)
            )
    return RatePoints(tuple(rows))


RATE_FIELDS = ("c_error", "diff", "keydiff")


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    stderr: float


def fit_rate(points: RatePoints, field: str) -> RateFit:
    """Log-log regression of per-size median absolute error on size.

    Medians are taken over replicates at each size; all medians must be
    positive (an exactly-zero median means the error vanished
    identically and there is no rate to fit).
    """
    if field not in RATE_FIELDS:
        raise InvalidParametersError(
            f"field must be one of {RATE_FIELDS}, got {field!r}"
        )
    sizes, medians = points.median_abs(field)
    if len(sizes) < 3:
        raise DegenerateInputError(
            f"need at least 3 distinct sizes, got {len(sizes)}"
        )
    if np.any(medians <= 0):
        raise DegenerateInputError(
            "a per-size median error is zero; no rate to fit"
        )
    result = stats.linregress(np.log(sizes), np.log(medians))
    return RateFit(
        float(result.slope), float(result.intercept), float(result.stderr)
    )


def small_sample_datasets() -> tuple[PairedSeries, PairedSeries]:
    """The two-unit demonstration pair: one target, two realizations.

    Both realizations share the same total (1010) and the same total
    absolute difference (10) against the target, yet their share-based
    measures differ, which is the whole point of the demonstration.
    """
    target = [10.0, 990.0]
    set1 = PairedSeries([11.0, 999.0], target, ("unit-1", "unit-2"))
    set2 = PairedSeries([15.0, 995.0], target, ("unit-1", "unit-2"))
    return set1, set2


def small_sample_demo() -> tuple[EquivalenceReport, EquivalenceReport]:
    """Equivalence reports (absolute difference loss) for the two-unit
    demonstration datasets."""
    set1, set2 = small_sample_datasets()
    spec = LossSpec(1.0)
    return full_report(spec, set1), full_report(spec, set2)
