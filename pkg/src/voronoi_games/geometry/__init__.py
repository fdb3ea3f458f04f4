"""Circle arithmetic and planar Voronoi-cell primitives."""

from .circle import Number, clockwise_distance, counterclockwise_distance, normalize_position
from .plane import (
    ConvexPolygon,
    PlanarPoint,
    bisector_distance,
    cell_area_square,
    cell_area_torus,
    circumcenter,
    ray_angle,
    voronoi_cell_square,
    voronoi_cell_torus,
)

__all__ = [
    "Number",
    "clockwise_distance",
    "counterclockwise_distance",
    "normalize_position",
    "ConvexPolygon",
    "PlanarPoint",
    "bisector_distance",
    "cell_area_square",
    "cell_area_torus",
    "circumcenter",
    "ray_angle",
    "voronoi_cell_square",
    "voronoi_cell_torus",
]
