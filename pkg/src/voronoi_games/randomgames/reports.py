"""Monte Carlo estimator reports and their CSV form."""

import csv
import math
from typing import Iterable, Optional, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from voronoi_games.config.settings import settings

REPORT_COLUMNS = ["check", "n", "m", "estimate", "se", "exact", "lower", "upper", "samples", "seed", "passed"]

# Absolute slack added to every z·SE band; a zero-variance estimator must
# still match an exact value computed along a different float path.
_BAND_SLACK = 1e-9


class EstimatorReport(BaseModel):
    """Estimate ± standard error, compared against an exact value or a bound.

    ``passed`` holds when the estimate lies within ``z`` standard errors of
    ``exact`` and does not cross ``lower`` or ``upper`` by more than that.
    """

    model_config = ConfigDict(frozen=True)

    check: str
    estimate: float
    se: float = Field(ge=0)
    samples: int = Field(ge=0)
    seed: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    exact: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    z: float = Field(default=3.0, gt=0)

    @property
    def band(self) -> float:
        return self.z * self.se + _BAND_SLACK

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.estimate):
            return False
        if self.exact is not None and abs(self.estimate - self.exact) > self.band:
            return False
        if self.lower is not None and self.estimate < self.lower - self.band:
            return False
        if self.upper is not None and self.estimate > self.upper + self.band:
            return False
        return True

    def csv_row(self) -> list:
        return [
            self.check,
            "" if self.n is None else self.n,
            "" if self.m is None else self.m,
            repr(self.estimate),
            repr(self.se),
            "" if self.exact is None else repr(self.exact),
            "" if self.lower is None else repr(self.lower),
            "" if self.upper is None else repr(self.upper),
            self.samples,
            "" if self.seed is None else self.seed,
            int(self.passed),
        ]


def resolve_seed(seed: Optional[int]) -> int:
    return settings.seed if seed is None else int(seed)


def mean_and_se(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and its standard error (0 for fewer than two samples)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return math.nan, 0.0
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))


def estimate_report(check: str, values: np.ndarray, seed: Optional[int], **reference) -> EstimatorReport:
    mean, se = mean_and_se(values)
    return EstimatorReport(check=check, estimate=mean, se=se, samples=int(np.size(values)), seed=seed, **reference)


def write_reports(out: TextIO, reports: Iterable[EstimatorReport], seed: Optional[int] = None) -> int:
    """Write the versioned header plus one row per report, sorted by (check, n, m)."""
    rows = sorted(reports, key=lambda r: (r.check, r.n or 0, r.m or 0, r.seed or 0))
    writer = csv.writer(out)
    writer.writerow([f"# voronoi-games estimators v1 seed={seed}"])
    writer.writerow(REPORT_COLUMNS)
    for report in rows:
        writer.writerow(report.csv_row())
    return len(rows)
