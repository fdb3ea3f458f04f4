"""Expected 2-D cell areas under a product distribution.

Around a focal point p the plane is cut into angular sectors whose edges
pass through every point where two potential cell boundaries can cross
inside the box: circumcenters of p with two opponent candidates, crossings
of a bisector with a box edge, and the box corners. Four axis directions
are always added so no sector spans more than a quarter turn.

Inside one sector the order of the boundary lines along any ray is fixed,
so the cell part in the sector is the triangle cut off by the first chosen
line, with area ``Da * Db * sin(θb - θa) / 2`` where Da and Db are the
distances to that line along the two edge rays. Its expectation follows the
same sweep as the 1-D case, ordered along the sector's middle ray. Box edges
are boundaries present with probability 1: the unit square, or on the
torus the unit box centred on p (the cell of p among its own translates).
Torus opponents enter through their translates within √2 of p; per sector
each candidate uses its translate whose bisector is nearest.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.errors import DegenerateGeometryError, PreconditionError
from voronoi_games.expectation.distribution import ProductDistribution
from voronoi_games.games import GameInstance, GameVariant
from voronoi_games.geometry import PlanarPoint, bisector_distance, circumcenter, ray_angle

tracer = trace.get_tracer(__name__)

TWO_PI = 2 * math.pi
_AXIS_ANGLES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
_BOX_SLACK = 1e-9


@dataclass(frozen=True)
class BoxLine:
    """The line ``coordinate[axis] == value``."""

    axis: int
    value: float

    def distance(self, p: PlanarPoint, theta: float) -> Optional[float]:
        if self.value == p[self.axis]:
            return 0.0
        direction = math.cos(theta) if self.axis == 0 else math.sin(theta)
        if abs(direction) <= 1e-15:
            return None
        t = (self.value - p[self.axis]) / direction
        return t if t >= 0 else None


@dataclass(frozen=True)
class Source:
    """A (possibly translated) opponent candidate."""

    point: PlanarPoint
    owner: int
    index: int
    probability: float


@dataclass(frozen=True)
class SectorDecomposition:
    focal: PlanarPoint
    vertices: tuple[PlanarPoint, ...]
    vertex_angles: tuple[float, ...]
    breakpoints: tuple[float, ...]
    box: tuple[float, float, float, float]
    sources: tuple[Source, ...]
    live_candidates: dict

    @property
    def box_lines(self) -> tuple[BoxLine, ...]:
        x0, y0, x1, y1 = self.box
        return (BoxLine(0, x0), BoxLine(0, x1), BoxLine(1, y0), BoxLine(1, y1))

    @property
    def sectors(self) -> list[tuple[float, float]]:
        b = self.breakpoints
        return [(b[i], b[i + 1]) for i in range(len(b) - 1)] + [(b[-1], b[0] + TWO_PI)]


def _inside(box, point: PlanarPoint) -> bool:
    x0, y0, x1, y1 = box
    return (x0 - _BOX_SLACK <= point.x <= x1 + _BOX_SLACK) and (y0 - _BOX_SLACK <= point.y <= y1 + _BOX_SLACK)


def _as_float(p) -> PlanarPoint:
    return PlanarPoint(float(p[0]), float(p[1]))


def _check_general_position(instance: GameInstance, dist: ProductDistribution, k: int, p: PlanarPoint) -> None:
    originals = [
        _as_float(q)
        for j, points in enumerate(instance.candidates)
        if j != k
        for idx, q in enumerate(points)
        if dist.s(j, idx) > 0
    ]
    for q, r in itertools.combinations(originals, 2):
        if circumcenter(p, q, r, settings.tolerance) is None:
            raise DegenerateGeometryError(f"points {tuple(p)}, {tuple(q)}, {tuple(r)} are collinear")


def sector_decomposition(
    instance: GameInstance, dist: ProductDistribution, k: int, i: int
) -> SectorDecomposition:
    if instance.variant.dimension != 2:
        raise PreconditionError(f"{instance.variant.value} is not a 2-D variant")
    dist.check_matches(instance)
    torus = instance.variant is GameVariant.VORONOI_2D_TORUS
    p = _as_float(instance.candidates[k][i])
    if torus:
        p = PlanarPoint(p.x % 1, p.y % 1)
        box = (p.x - 0.5, p.y - 0.5, p.x + 0.5, p.y + 0.5)
    else:
        box = (0.0, 0.0, 1.0, 1.0)
    if not instance.exact:
        _check_general_position(instance, dist, k, p)

    sources = []
    live: dict = {}
    for j, points in enumerate(instance.candidates):
        if j == k:
            continue
        live[j] = 0
        for idx, q in enumerate(points):
            s = float(dist.s(j, idx))
            if s <= 0:
                continue
            live[j] += 1
            q = _as_float(q)
            if not torus:
                sources.append(Source(q, j, idx, s))
                continue
            for dx, dy in itertools.product((-1, 0, 1), repeat=2):
                shifted = PlanarPoint(q.x % 1 + dx, q.y % 1 + dy)
                # Bisectors of farther translates lie outside the box
                if (shifted.x - p.x) ** 2 + (shifted.y - p.y) ** 2 <= 2:
                    sources.append(Source(shifted, j, idx, s))

    vertices = []
    for a, b in itertools.combinations(sources, 2):
        c = circumcenter(p, a.point, b.point, settings.tolerance)
        if c is not None and _inside(box, c):
            vertices.append(c)
    vertices.sort(key=lambda v: ray_angle(p, v))
    vertex_angles = [ray_angle(p, v) for v in vertices]
    if not instance.exact:
        for (u, a), (v, b) in zip(zip(vertices, vertex_angles), zip(vertices[1:], vertex_angles[1:])):
            if a == b and (abs(u.x - v.x) > settings.tolerance or abs(u.y - v.y) > settings.tolerance):
                raise DegenerateGeometryError(f"vertices {tuple(u)} and {tuple(v)} share an angle")

    x0, y0, x1, y1 = box
    edge_points = [PlanarPoint(x0, y0), PlanarPoint(x1, y0), PlanarPoint(x1, y1), PlanarPoint(x0, y1)]
    for src in sources:
        a = 2 * (src.point.x - p.x)
        b = 2 * (src.point.y - p.y)
        rhs = src.point.x ** 2 + src.point.y ** 2 - p.x ** 2 - p.y ** 2
        if abs(b) > settings.tolerance:
            for x in (x0, x1):
                edge_points.append(PlanarPoint(x, (rhs - a * x) / b))
        if abs(a) > settings.tolerance:
            for y in (y0, y1):
                edge_points.append(PlanarPoint((rhs - b * y) / a, y))

    angles = set(vertex_angles) | set(_AXIS_ANGLES)
    angles.update(ray_angle(p, e) for e in edge_points if _inside(box, e) and e != p)
    return SectorDecomposition(
        focal=p,
        vertices=tuple(vertices),
        vertex_angles=tuple(vertex_angles),
        breakpoints=tuple(sorted(angles)),
        box=box,
        sources=tuple(sources),
        live_candidates=live,
    )


def _edge_distance(value: Optional[float], what: str) -> float:
    if value is None:
        raise DegenerateGeometryError(f"{what} is not reached by a sector edge ray")
    return value


def expected_di_dj(decomposition: SectorDecomposition, sector: tuple[float, float], early_stop: bool = True) -> float:
    """E[Da * Db] for the first chosen boundary line of one sector."""
    theta_a, theta_b = sector
    mid = (theta_a + theta_b) / 2
    p = decomposition.focal

    box_mid, box_line = min(
        ((d, line) for line in decomposition.box_lines if (d := line.distance(p, mid)) is not None),
        key=lambda pair: pair[0],
    )

    nearest: dict = {}
    if decomposition.sources:
        pts = np.array([src.point for src in decomposition.sources], dtype=float)
        delta = pts - np.array([p.x, p.y])
        along = math.cos(mid) * delta[:, 0] + math.sin(mid) * delta[:, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(along > settings.tolerance, (delta ** 2).sum(axis=1) / 2 / along, np.inf)
        for src, d in zip(decomposition.sources, t):
            if d >= box_mid:
                continue
            key = (src.owner, src.index)
            if key not in nearest or d < nearest[key][0]:
                nearest[key] = (float(d), src)

    unpassed = dict(decomposition.live_candidates)
    remaining = {j: 1.0 for j in unpassed}
    P = 1.0
    expected = 0.0
    for _, src in sorted(nearest.values(), key=lambda pair: pair[0]):
        if P == 0 and early_stop:
            return expected
        j = src.owner
        da = _edge_distance(bisector_distance(p, src.point, theta_a), "boundary line")
        db = _edge_distance(bisector_distance(p, src.point, theta_b), "boundary line")
        unpassed[j] -= 1
        if unpassed[j] == 0:
            expected += P * da * db
            P = 0.0
            remaining[j] = 0.0
        else:
            if P != 0 and remaining[j] > 0:
                expected += src.probability * (P / remaining[j]) * da * db
                P = P / remaining[j] * (remaining[j] - src.probability)
            remaining[j] -= src.probability
    if P == 0:
        return expected
    da = _edge_distance(box_line.distance(p, theta_a), "box edge")
    db = _edge_distance(box_line.distance(p, theta_b), "box edge")
    return expected + P * da * db


def expected_measure_2d(
    instance: GameInstance, dist: ProductDistribution, k: int, early_stop: bool = True
) -> list[float]:
    values = []
    with tracer.start_as_current_span("expectation.expected_utility_2d") as span:
        span.set_attribute("player", k)
        for i in range(len(instance.candidates[k])):
            if instance.n == 1:
                values.append(1.0)
                continue
            decomposition = sector_decomposition(instance, dist, k, i)
            area = 0.0
            for sector in decomposition.sectors:
                area += expected_di_dj(decomposition, sector, early_stop) * math.sin(sector[1] - sector[0]) / 2
            values.append(area)
        span.set_attribute("candidates", len(values))
    return values


def expected_utility_2d(
    instance: GameInstance, dist: ProductDistribution, k: int, early_stop: bool = True
) -> list[float]:
    sign = instance.objective.sign
    return [sign * v for v in expected_measure_2d(instance, dist, k, early_stop)]
