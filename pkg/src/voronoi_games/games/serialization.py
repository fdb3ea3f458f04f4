"""Instance JSON documents.

Points are written as strings: ``str(Fraction)`` for exact instances and
``repr(float)`` otherwise, so both kinds round-trip bit-exactly.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from pydantic import BaseModel, Field, ValidationError

from voronoi_games.errors import InvalidInstanceError, ParseError
from voronoi_games.games.models import GameInstance, GameVariant, Objective
from voronoi_games.geometry import Number, PlanarPoint

INSTANCE_FORMAT = "voronoi-games/instance"

Coordinate = Union[str, int, float]


class InstanceDocument(BaseModel):
    format: str = INSTANCE_FORMAT
    version: int = 1
    variant: GameVariant
    objective: Objective = Objective.MAXIMIZE
    exact: bool = False
    players: list[list[Union[Coordinate, list[Coordinate]]]] = Field(min_length=1)


def format_number(value: Number) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def parse_number(raw: Coordinate, exact: bool) -> Number:
    if isinstance(raw, bool):
        raise InvalidInstanceError(f"not a number: {raw!r}")
    try:
        if exact:
            return Fraction(raw) if not isinstance(raw, float) else Fraction(repr(raw))
        return float(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInstanceError(f"not a number: {raw!r} ({e})")


def instance_to_document(instance: GameInstance) -> InstanceDocument:
    exact = instance.exact

    def fmt(p):
        if isinstance(p, PlanarPoint):
            return [format_number(p.x), format_number(p.y)]
        return format_number(p)

    return InstanceDocument(
        variant=instance.variant,
        objective=instance.objective,
        exact=exact,
        players=[[fmt(p) for p in points] for points in instance.candidates],
    )


def document_to_instance(doc: InstanceDocument) -> GameInstance:
    players = []
    for k, points in enumerate(doc.players):
        parsed = []
        for raw in points:
            if doc.variant.dimension == 2:
                if not isinstance(raw, list) or len(raw) != 2:
                    raise InvalidInstanceError(f"player {k}: 2-D points must be [x, y] pairs, got {raw!r}")
                parsed.append(PlanarPoint(parse_number(raw[0], doc.exact), parse_number(raw[1], doc.exact)))
            else:
                if isinstance(raw, list):
                    raise InvalidInstanceError(f"player {k}: 1-D points must be scalars, got {raw!r}")
                parsed.append(parse_number(raw, doc.exact))
        players.append(tuple(parsed))
    return GameInstance(doc.variant, doc.objective, tuple(players))


def dumps_instance(instance: GameInstance) -> str:
    return instance_to_document(instance).model_dump_json(indent=2)


def loads_instance(text: str) -> GameInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno)
    try:
        doc = InstanceDocument.model_validate(data)
    except ValidationError as e:
        raise InvalidInstanceError(f"invalid instance document: {e}")
    if doc.format != INSTANCE_FORMAT:
        raise InvalidInstanceError(f"unexpected document format {doc.format!r}")
    return document_to_instance(doc)


def dump_instance(instance: GameInstance, path: Path) -> None:
    Path(path).write_text(dumps_instance(instance) + "\n", encoding="utf-8")


def load_instance(path: Path) -> GameInstance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))
