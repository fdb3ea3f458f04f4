"""Product distributions: independent per-player randomisation over candidates."""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from voronoi_games.errors import InvalidInstanceError, ParseError
from voronoi_games.games import GameInstance
from voronoi_games.games.serialization import format_number, parse_number
from voronoi_games.geometry import Number

SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ProductDistribution:
    probabilities: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.probabilities)
        for k, row in enumerate(rows):
            if not row:
                raise InvalidInstanceError(f"player {k} has an empty probability vector")
            if any(s < 0 for s in row):
                raise InvalidInstanceError(f"player {k} has a negative probability")
            total = sum(row)
            exact = all(isinstance(s, (Fraction, int)) for s in row)
            if (total != 1) if exact else abs(total - 1) > SUM_TOLERANCE:
                raise InvalidInstanceError(f"player {k} probabilities sum to {total}, not 1")
        object.__setattr__(self, "probabilities", rows)

    @classmethod
    def uniform(cls, instance: GameInstance, exact: Optional[bool] = None) -> "ProductDistribution":
        exact = instance.exact if exact is None else exact
        one = Fraction(1) if exact else 1.0
        return cls(tuple(tuple(one / m for _ in range(m)) for m in instance.m))

    @classmethod
    def deterministic(cls, instance: GameInstance, profile: Sequence[int]) -> "ProductDistribution":
        profile = instance.validate_profile(profile)
        return cls(tuple(
            tuple(Fraction(1) if i == profile[k] else Fraction(0) for i in range(m))
            for k, m in enumerate(instance.m)
        ))

    @classmethod
    def random(cls, instance: GameInstance, rng: Union[np.random.Generator, int, None] = None) -> "ProductDistribution":
        """Independent Dirichlet(1, ..., 1) vector per player."""
        rng = np.random.default_rng(rng)
        rows = []
        for m in instance.m:
            row = [float(v) for v in rng.dirichlet(np.ones(m))]
            # Absorb rounding so every row sums to 1 within SUM_TOLERANCE
            row[-1] = max(0.0, 1.0 - sum(row[:-1]))
            rows.append(tuple(row))
        return cls(tuple(rows))

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def s(self, k: int, i: int) -> Number:
        return self.probabilities[k][i]

    def check_matches(self, instance: GameInstance) -> None:
        if tuple(len(row) for row in self.probabilities) != instance.m:
            raise InvalidInstanceError(
                f"distribution shape {[len(r) for r in self.probabilities]} does not match "
                f"instance candidates {list(instance.m)}"
            )

    def probability_of_profile(self, profile: Sequence[int]) -> Number:
        return prod(self.probabilities[k][i] for k, i in enumerate(profile))


class DistributionDocument(BaseModel):
    players: dict[str, list[Union[str, int, float]]]


def dumps_distribution(dist: ProductDistribution) -> str:
    doc = DistributionDocument(players={
        str(k): [format_number(s) for s in row] for k, row in enumerate(dist.probabilities)
    })
    return doc.model_dump_json(indent=2)


def loads_distribution(text: str, exact: bool = False) -> ProductDistribution:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno)
    try:
        doc = DistributionDocument.model_validate(data)
    except ValidationError as e:
        raise InvalidInstanceError(f"invalid distribution document: {e}")
    try:
        keys = sorted(doc.players, key=int)
    except ValueError:
        raise InvalidInstanceError("distribution player keys must be integers")
    if [int(key) for key in keys] != list(range(len(keys))):
        raise InvalidInstanceError("distribution must list players 0..n-1")
    return ProductDistribution(tuple(
        tuple(parse_number(raw, exact) for raw in doc.players[key]) for key in keys
    ))


def dump_distribution(dist: ProductDistribution, path: Path) -> None:
    Path(path).write_text(dumps_distribution(dist) + "\n", encoding="utf-8")


def load_distribution(path: Path, exact: bool = False) -> ProductDistribution:
    return loads_distribution(Path(path).read_text(encoding="utf-8"), exact)
