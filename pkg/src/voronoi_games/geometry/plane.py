"""Planar primitives: circumcenters, bisector distances and clipped Voronoi cells.

Cells are built by clipping a box with one half-plane per opponent
(Sutherland-Hodgman on a convex polygon). The same code runs on floats and
on ``Fraction`` coordinates; with fractions every predicate is exact.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from voronoi_games.config.settings import settings
from voronoi_games.errors import DuplicatePointError
from voronoi_games.geometry.circle import Number


class PlanarPoint(NamedTuple):
    x: Number
    y: Number


def is_exact(*values: Number) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


def _half(value: Number) -> Number:
    return Fraction(1, 2) if is_exact(value) else 0.5


def squared_distance(p: PlanarPoint, q: PlanarPoint) -> Number:
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def ray_angle(p: PlanarPoint, q: PlanarPoint) -> float:
    """Counterclockwise angle of the direction p -> q, in [0, 2π)."""
    return math.atan2(float(q.y - p.y), float(q.x - p.x)) % (2 * math.pi)


def circumcenter(
    p: PlanarPoint, q: PlanarPoint, r: PlanarPoint, tolerance: Optional[float] = None
) -> Optional[PlanarPoint]:
    """Point equidistant from p, q and r; ``None`` when the three are collinear."""
    tol = settings.tolerance if tolerance is None else tolerance
    d = 2 * (p.x * (q.y - r.y) + q.x * (r.y - p.y) + r.x * (p.y - q.y))
    if is_exact(d):
        if d == 0:
            return None
    elif abs(d) <= tol:
        return None
    p2 = p.x * p.x + p.y * p.y
    q2 = q.x * q.x + q.y * q.y
    r2 = r.x * r.x + r.y * r.y
    ux = (p2 * (q.y - r.y) + q2 * (r.y - p.y) + r2 * (p.y - q.y)) / d
    uy = (p2 * (r.x - q.x) + q2 * (p.x - r.x) + r2 * (q.x - p.x)) / d
    return PlanarPoint(ux, uy)


def bisector_distance(
    p: PlanarPoint, q: PlanarPoint, theta: float, tolerance: Optional[float] = None
) -> Optional[float]:
    """Distance from p along the ray at angle ``theta`` to the bisector of (p, q).

    Returns ``None`` when the ray never reaches the bisector (parallel or
    pointing away from q).
    """
    tol = settings.tolerance if tolerance is None else tolerance
    dx = float(q.x - p.x)
    dy = float(q.y - p.y)
    along = math.cos(theta) * dx + math.sin(theta) * dy
    if along <= tol:
        return None
    return (dx * dx + dy * dy) / 2 / along


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with counterclockwise vertices."""

    vertices: tuple[PlanarPoint, ...]

    @classmethod
    def box(cls, x0: Number, y0: Number, x1: Number, y1: Number) -> "ConvexPolygon":
        return cls((PlanarPoint(x0, y0), PlanarPoint(x1, y0), PlanarPoint(x1, y1), PlanarPoint(x0, y1)))

    def area(self) -> Number:
        n = len(self.vertices)
        if n < 3:
            return 0
        twice = 0
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            twice += a.x * b.y - b.x * a.y
        return abs(twice) / 2

    def clip(self, a: Number, b: Number, c: Number) -> "ConvexPolygon":
        """Intersect with the half-plane ``a*x + b*y <= c``."""
        out: list[PlanarPoint] = []
        n = len(self.vertices)
        for i in range(n):
            cur = self.vertices[i]
            nxt = self.vertices[(i + 1) % n]
            f_cur = a * cur.x + b * cur.y - c
            f_nxt = a * nxt.x + b * nxt.y - c
            if f_cur <= 0:
                out.append(cur)
            if (f_cur < 0 < f_nxt) or (f_nxt < 0 < f_cur):
                t = f_cur / (f_cur - f_nxt)
                out.append(PlanarPoint(cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)))
        return ConvexPolygon(tuple(out))

    def max_squared_radius(self, center: PlanarPoint) -> Number:
        return max((squared_distance(center, v) for v in self.vertices), default=0)


def _clip_cell(cell: ConvexPolygon, site: PlanarPoint, others: Iterable[PlanarPoint]) -> ConvexPolygon:
    ordered = sorted(others, key=lambda q: squared_distance(site, q))
    for q in ordered:
        if len(cell.vertices) < 3:
            break
        # Opponents farther than twice the cell radius cannot cut it
        if squared_distance(site, q) > 4 * cell.max_squared_radius(site):
            break
        a = 2 * (q.x - site.x)
        b = 2 * (q.y - site.y)
        c = (q.x * q.x + q.y * q.y) - (site.x * site.x + site.y * site.y)
        cell = cell.clip(a, b, c)
    return cell


def _check_distinct(points: Sequence[PlanarPoint]) -> None:
    seen = set()
    for point in points:
        if point in seen:
            raise DuplicatePointError(f"duplicate point {tuple(point)}")
        seen.add(point)


def voronoi_cell_square(site: PlanarPoint, others: Sequence[PlanarPoint]) -> ConvexPolygon:
    """Voronoi cell of ``site`` among ``others``, clipped to the unit square."""
    site = PlanarPoint(*site)
    others = [PlanarPoint(*q) for q in others]
    _check_distinct([site, *others])
    one = 1 if is_exact(site.x, site.y) else 1.0
    return _clip_cell(ConvexPolygon.box(0 * one, 0 * one, one, one), site, others)


def voronoi_cell_torus(site: PlanarPoint, others: Sequence[PlanarPoint]) -> ConvexPolygon:
    """Toroidal Voronoi cell, expressed in the unit box centred on ``site``.

    Each opponent enters through its 3×3 grid of translates.
    """
    site = PlanarPoint(site[0] % 1, site[1] % 1)
    others = [PlanarPoint(q[0] % 1, q[1] % 1) for q in others]
    _check_distinct([site, *others])
    h = _half(site.x)
    box = ConvexPolygon.box(site.x - h, site.y - h, site.x + h, site.y + h)
    replicas = [
        PlanarPoint(q.x + dx, q.y + dy)
        for q in others
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
    ]
    return _clip_cell(box, site, replicas)


def cell_area_square(site: PlanarPoint, others: Sequence[PlanarPoint]) -> Number:
    return voronoi_cell_square(site, others).area()


def cell_area_torus(site: PlanarPoint, others: Sequence[PlanarPoint]) -> Number:
    return voronoi_cell_torus(site, others).area()
