"""Published success counts and pass maxima for best-response experiments."""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from voronoi_games.games import GameVariant, Objective

TABLES_FILE = Path(__file__).parent / "reference_tables.json"


class SuccessCell(BaseModel):
    m: int
    n: int
    counts: list[int]


class SuccessTable(BaseModel):
    variant: str
    objective: Objective
    attempts: int
    thresholds: list[int]
    cells: list[SuccessCell]


class PassesRow(BaseModel):
    variant: str
    objective: Objective
    m: int
    cells: dict[str, int]


class ReferenceTables(BaseModel):
    format: str
    version: int
    instances: int
    passes: int
    success_counts: list[SuccessTable]
    max_passes: list[PassesRow]


def _table_variant(variant: GameVariant) -> str:
    # Planar tables were measured once and apply to both boundary conditions
    return "voronoi_2d" if variant.dimension == 2 else variant.value


@lru_cache(maxsize=4)
def load_reference_tables(path: Optional[Path] = None) -> ReferenceTables:
    return ReferenceTables.model_validate_json(Path(path or TABLES_FILE).read_text(encoding="utf-8"))


def reference_counts(
    variant: GameVariant, objective: Objective, n: int, m: int, tables: Optional[ReferenceTables] = None
) -> Optional[dict[int, int]]:
    """Threshold → published success count for one (n, m) cell, or None."""
    tables = tables or load_reference_tables()
    key = _table_variant(GameVariant(variant))
    for table in tables.success_counts:
        if table.variant != key or table.objective is not Objective(objective):
            continue
        for cell in table.cells:
            if cell.n == n and cell.m == m:
                return dict(zip(table.thresholds, cell.counts))
    return None


def reference_max_passes(
    variant: GameVariant, objective: Objective, n: int, m: int, tables: Optional[ReferenceTables] = None
) -> Optional[int]:
    tables = tables or load_reference_tables()
    key = _table_variant(GameVariant(variant))
    for row in tables.max_passes:
        if row.variant == key and row.objective is Objective(objective) and row.m == m:
            return row.cells.get(str(n))
    return None
