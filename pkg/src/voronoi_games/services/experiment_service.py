"""Service for running best-response experiments over grids of random instances."""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO

import numpy as np
from opentelemetry import trace
from pydantic import BaseModel, Field, PositiveInt

from voronoi_games.config.settings import settings
from voronoi_games.equilibrium import multi_start_search
from voronoi_games.errors import VoronoiGameError
from voronoi_games.eval.references import load_reference_tables, reference_counts, reference_max_passes
from voronoi_games.games import GameVariant, Objective
from voronoi_games.randomgames import random_instance

tracer = trace.get_tracer(__name__)

EXPERIMENT_COLUMNS = [
    "variant",
    "objective",
    "n",
    "m",
    "threshold",
    "instances",
    "successes",
    "rate",
    "reference_successes",
    "reference_rate",
    "within_band",
    "max_passes_observed",
    "reference_max_passes",
]

DEFAULT_THRESHOLDS = [1, 2, 5, 10, 100]


class ExperimentConfig(BaseModel):
    variant: GameVariant = GameVariant.ONE_WAY_1D
    objective: Objective = Objective.MAXIMIZE
    n_values: list[PositiveInt] = Field(default_factory=lambda: [10, 100])
    m_values: list[PositiveInt] = Field(default_factory=lambda: [2, 3, 4])
    instances: int = Field(default=200, ge=0)
    attempts: int = Field(default=100, ge=1)
    max_passes: int = Field(default=1000, ge=1)
    seed: int = Field(default_factory=lambda: settings.seed)
    thresholds: list[int] = Field(default_factory=lambda: list(DEFAULT_THRESHOLDS))
    out: Optional[Path] = None

    @classmethod
    def preset(cls, variant: GameVariant, objective: Objective, paper_scale: bool = False, **overrides) -> "ExperimentConfig":
        """Desk-scale defaults, or the full published grid with ``paper_scale``."""
        variant = GameVariant(variant)
        planar = variant.dimension == 2
        if paper_scale:
            values = {
                "n_values": [10, 100, 1000] if planar else [10, 100, 1000, 10000],
                "instances": 1000,
            }
        else:
            values = {"n_values": [10, 50] if planar else [10, 100], "instances": 200}
        values["attempts"] = 10 if planar else 100
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(variant=variant, objective=objective, **values)

    def cells(self) -> list["ExperimentCell"]:
        return [
            ExperimentCell(self.variant, self.objective, n, m, self.instances, self.attempts, self.max_passes, self.seed)
            for n in self.n_values
            for m in self.m_values
        ]

    @property
    def active_thresholds(self) -> list[int]:
        return sorted({t for t in self.thresholds if t <= self.attempts} | {self.attempts})


@dataclass(frozen=True)
class ExperimentCell:
    variant: GameVariant
    objective: Objective
    n: int
    m: int
    instances: int
    attempts: int
    max_passes: int
    seed: int

    def seed_sequence(self) -> np.random.SeedSequence:
        variant_code = list(GameVariant).index(self.variant)
        objective_code = list(Objective).index(self.objective)
        return np.random.SeedSequence(self.seed, spawn_key=(self.n, self.m, variant_code, objective_code))


@dataclass(frozen=True)
class CellResult:
    cell: ExperimentCell
    attempts_needed: tuple[Optional[int], ...]
    passes: tuple[Optional[int], ...]

    def successes(self, threshold: int) -> int:
        return sum(1 for a in self.attempts_needed if a is not None and a <= threshold)

    @property
    def max_passes_observed(self) -> Optional[int]:
        observed = [p for p in self.passes if p is not None]
        return max(observed) if observed else None


def run_cell(cell: ExperimentCell) -> CellResult:
    """Multi-start best response on ``cell.instances`` fresh instances."""
    attempts_needed, passes = [], []
    with tracer.start_as_current_span("experiment.cell") as span:
        span.set_attribute("variant", cell.variant.value)
        span.set_attribute("objective", cell.objective.value)
        span.set_attribute("n", cell.n)
        span.set_attribute("m", cell.m)
        span.set_attribute("seed", cell.seed)
        for child in cell.seed_sequence().spawn(cell.instances):
            instance_seed, dynamics_seed = (int(s) for s in child.generate_state(2))
            instance = random_instance(cell.n, cell.m, cell.variant, cell.objective, seed=instance_seed)
            outcome = multi_start_search(instance, cell.attempts, cell.max_passes, seed=dynamics_seed)
            attempts_needed.append(outcome.attempts if outcome.converged else None)
            passes.append(outcome.passes if outcome.converged else None)
        result = CellResult(cell, tuple(attempts_needed), tuple(passes))
        span.set_attribute("successes", result.successes(cell.attempts))
    return result


def within_band(successes: int, instances: int, reference: int, reference_instances: int) -> bool:
    """Two-sample 3σ binomial agreement between a measured and a published rate."""
    rate = successes / instances
    p = reference / reference_instances
    se = math.sqrt(p * (1 - p) * (1 / instances + 1 / reference_instances))
    return abs(rate - p) <= 3 * se + 0.5 / instances


class ExperimentService:
    """Runs experiment grids and renders their success tables."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or settings.workers

    def _results(self, cells: list[ExperimentCell]) -> list[CellResult]:
        if self.workers <= 1 or len(cells) <= 1:
            return [run_cell(cell) for cell in cells]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(run_cell, cells))

    def run(self, config: ExperimentConfig) -> dict:
        """
        Run every (n, m) cell of ``config``.

        Returns:
            dict with keys:
                - found (bool): True when the run completed
                - rows (list[dict]): one row per (n, m, threshold), sorted
                - seed (int): master seed
                - error (str), exit_code (int): when the run failed
        """
        if config.instances == 0:
            return {"found": True, "rows": [], "seed": config.seed}
        tables = load_reference_tables()
        with tracer.start_as_current_span("experiment.run") as span:
            span.set_attribute("variant", config.variant.value)
            span.set_attribute("objective", config.objective.value)
            span.set_attribute("cells", len(config.n_values) * len(config.m_values))
            span.set_attribute("seed", config.seed)
            try:
                results = self._results(config.cells())
            except VoronoiGameError as e:
                return {"found": False, "error": str(e), "exit_code": e.exit_code, "seed": config.seed}

        rows = []
        for result in results:
            cell = result.cell
            published = reference_counts(cell.variant, cell.objective, cell.n, cell.m, tables) or {}
            published_passes = reference_max_passes(cell.variant, cell.objective, cell.n, cell.m, tables)
            for threshold in config.active_thresholds:
                successes = result.successes(threshold)
                reference = published.get(threshold)
                rows.append({
                    "variant": cell.variant.value,
                    "objective": cell.objective.value,
                    "n": cell.n,
                    "m": cell.m,
                    "threshold": threshold,
                    "instances": cell.instances,
                    "successes": successes,
                    "rate": successes / cell.instances,
                    "reference_successes": reference,
                    "reference_rate": None if reference is None else reference / tables.instances,
                    "within_band": None if reference is None else within_band(
                        successes, cell.instances, reference, tables.instances
                    ),
                    "max_passes_observed": result.max_passes_observed,
                    "reference_max_passes": published_passes,
                })
        rows.sort(key=lambda r: (r["variant"], r["objective"], r["n"], r["m"], r["threshold"]))
        return {"found": True, "rows": rows, "seed": config.seed}

    @staticmethod
    def write_csv(rows: list[dict], out: TextIO, seed: int) -> None:
        writer = csv.writer(out)
        writer.writerow([f"# voronoi-games experiment v1 seed={seed}"])
        writer.writerow(EXPERIMENT_COLUMNS)
        for row in rows:
            writer.writerow(["" if row[c] is None else row[c] for c in EXPERIMENT_COLUMNS])
