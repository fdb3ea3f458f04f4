"""Exhaustive pure-Nash-equilibrium enumeration over all ∏ m_k profiles."""

import itertools
from typing import Optional

import numpy as np
from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.errors import BudgetExceededError
from voronoi_games.games import GameInstance, GameVariant, StrategyProfile, is_pne

tracer = trace.get_tracer(__name__)

# Profiles per vectorised chunk, scaled down for wide instances
_CHUNK_CELLS = 4_000_000


def enumerate_pne(instance: GameInstance, budget: Optional[int] = None) -> list[StrategyProfile]:
    """All pure Nash equilibria, in lexicographic profile order."""
    limit = settings.enumeration_budget if budget is None else budget
    count = instance.profile_count
    if count > limit:
        raise BudgetExceededError("PNE enumeration", count, limit)

    with tracer.start_as_current_span("equilibrium.enumerate_pne") as span:
        span.set_attribute("profiles", count)
        if instance.variant.dimension == 1 and not instance.exact and instance.n > 1:
            found = enumerate_pne_vectorized(instance)
        else:
            found = [
                tuple(profile)
                for profile in itertools.product(*(range(m) for m in instance.m))
                if is_pne(instance, profile)
            ]
        span.set_attribute("count", len(found))
    return found


def _circle_utilities(instance: GameInstance, chosen: np.ndarray, coords: np.ndarray, k: int) -> np.ndarray:
    """Signed utility of each candidate of player k for every profile row.

    Mirrors ``CircleBoard.measure`` operation for operation so both paths
    agree to the bit.
    """
    others = np.delete(chosen, k, axis=1)[:, None, :]  # (rows, 1, n-1)
    x = coords[k][None, :, None]  # (1, maxm, 1)
    cw = np.mod(others - x, 1.0)
    succ_at = np.argmin(cw, axis=2)[..., None]
    if instance.variant is GameVariant.ONE_WAY_1D:
        measure = np.take_along_axis(cw, succ_at, axis=2)[..., 0]
    elif others.shape[2] == 1:
        measure = np.full(cw.shape[:2], 0.5)
    else:
        ccw = np.mod(x - others, 1.0)
        pred_at = np.argmin(ccw, axis=2)[..., None]
        others_b = np.broadcast_to(others, cw.shape)
        succ = np.take_along_axis(others_b, succ_at, axis=2)[..., 0]
        pred = np.take_along_axis(others_b, pred_at, axis=2)[..., 0]
        measure = np.mod(succ - pred, 1.0) / 2
    return instance.objective.sign * measure


def enumerate_pne_vectorized(instance: GameInstance) -> list[StrategyProfile]:
    """Float 1-D fast path; same comparison semantics as ``is_pne``."""
    n = instance.n
    m = np.asarray(instance.m)
    max_m = int(m.max())
    coords = np.full((n, max_m), np.nan)
    for k, points in enumerate(instance.candidates):
        coords[k, : len(points)] = [float(p) for p in points]
    valid = np.arange(max_m)[None, :] < m[:, None]
    tol = settings.tolerance

    total = instance.profile_count
    rows_per_chunk = max(1, _CHUNK_CELLS // (n * n * max_m))
    found: list[StrategyProfile] = []
    for start in range(0, total, rows_per_chunk):
        flat = np.arange(start, min(total, start + rows_per_chunk))
        profiles = np.stack(np.unravel_index(flat, tuple(m)), axis=1)
        chosen = coords[np.arange(n)[None, :], profiles]
        stable = np.ones(len(flat), dtype=bool)
        for k in range(n):
            if m[k] == 1:
                continue
            util = _circle_utilities(instance, chosen, coords, k)
            util = np.where(valid[k][None, :], util, -np.inf)
            current = util[np.arange(len(flat)), profiles[:, k]]
            stable &= ~np.any(util > current[:, None] + tol, axis=1)
        found.extend(tuple(int(i) for i in row) for row in profiles[stable])
    return found
