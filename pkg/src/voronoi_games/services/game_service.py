"""Service for file-based game operations: PNE search, expected utilities, reductions."""

from fractions import Fraction
from pathlib import Path
from typing import Optional

from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.equilibrium import enumerate_pne, find_pne_backtracking
from voronoi_games.errors import VoronoiGameError
from voronoi_games.expectation import expected_utilities, load_distribution
from voronoi_games.games import GameVariant, dump_instance, load_instance, utilities
from voronoi_games.games.serialization import format_number
from voronoi_games.hardness import build_game, check_equivalence, dump_roles, load_formula, pad_candidates

tracer = trace.get_tracer(__name__)


def _failure(error: Exception) -> dict:
    code = getattr(error, "exit_code", 2)
    return {"found": False, "error": str(error), "exit_code": code}


def _format_point(point) -> object:
    if isinstance(point, tuple):
        return [format_number(c) for c in point]
    return format_number(point)


class GameService:
    """Wraps the library operations behind dict results for the command line."""

    def __init__(self, data_dir: Optional[Path] = None, seed: Optional[int] = None):
        """
        Initialize the game service.

        Args:
            data_dir: Directory relative paths are resolved against. Defaults to settings.data_dir
            seed: Seed recorded in every result. Defaults to settings.seed
        """
        self.data_dir = data_dir or settings.data_dir
        self.seed = settings.seed if seed is None else seed

    def _resolve(self, path: Path) -> Path:
        path = Path(path)
        if path.exists() or path.is_absolute():
            return path
        candidate = self.data_dir / path
        return candidate if candidate.exists() else path

    def find_pne(self, instance_file: Path, method: str = "auto", budget: Optional[int] = None) -> dict:
        """
        List the pure Nash equilibria of an instance file.

        Args:
            instance_file: Instance JSON
            method: 'enumerate', 'search' (One-Way only, stops at the first PNE) or 'auto'
            budget: Profile or node budget override

        Returns:
            dict: On success found=True with equilibria (list of profiles), count,
            method, complete (False when the search stopped at the first PNE) and
            the utilities of each equilibrium. On failure found=False with
            error and exit_code.
        """
        try:
            instance = load_instance(self._resolve(instance_file))
            limit = settings.enumeration_budget if budget is None else budget
            if method == "auto":
                fits = instance.profile_count <= limit
                method = "enumerate" if fits or instance.variant is not GameVariant.ONE_WAY_1D else "search"
            with tracer.start_as_current_span("service.find_pne") as span:
                span.set_attribute("method", method)
                if method == "enumerate":
                    equilibria = enumerate_pne(instance, limit)
                    complete = True
                elif method == "search":
                    result = find_pne_backtracking(instance, budget=budget)
                    equilibria, complete = result.profiles, not result.found
                else:
                    return {"found": False, "error": f"unknown method '{method}'", "exit_code": 2}
                span.set_attribute("count", len(equilibria))
        except (VoronoiGameError, OSError) as e:
            return _failure(e)

        return {
            "found": True,
            "seed": self.seed,
            "instance": str(instance_file),
            "method": method,
            "count": len(equilibria),
            "complete": complete,
            "equilibria": [list(p) for p in equilibria],
            "utilities": [[format_number(u) for u in utilities(instance, p)] for p in equilibria],
        }

    def evaluate(self, instance_file: Path, distribution_file: Path) -> dict:
        """
        Expected utility of every candidate under a product distribution.

        Returns:
            dict: found=True with rows of player, candidate, point, probability
            and expected_utility; found=False with error and exit_code otherwise.
        """
        try:
            instance = load_instance(self._resolve(instance_file))
            dist = load_distribution(self._resolve(distribution_file), exact=instance.exact)
            dist.check_matches(instance)
            rows = []
            with tracer.start_as_current_span("service.evaluate") as span:
                for k in range(instance.n):
                    for i, value in enumerate(expected_utilities(instance, dist, k)):
                        rows.append({
                            "player": k,
                            "candidate": i,
                            "point": _format_point(instance.candidates[k][i]),
                            "probability": format_number(dist.s(k, i)),
                            "expected_utility": format_number(value),
                        })
                span.set_attribute("rows", len(rows))
        except (VoronoiGameError, OSError) as e:
            return _failure(e)
        return {"found": True, "seed": self.seed, "instance": str(instance_file), "rows": rows}

    def reduce(
        self,
        formula_file: Path,
        output_file: Path,
        eps: Optional[Fraction] = None,
        pad_to: Optional[int] = None,
    ) -> dict:
        """
        Build the reduction game of a formula file and write it with its role sidecar.

        Returns:
            dict: found=True with instance and roles paths, player count,
            the 2k + 6l count and the role census.
        """
        try:
            formula = load_formula(self._resolve(formula_file))
            tagged = build_game(formula, eps)
            if pad_to is not None:
                tagged = pad_candidates(tagged, pad_to)
            output_file = Path(output_file)
            roles_file = output_file.with_name(output_file.stem + ".roles.json")
            dump_instance(tagged.instance, output_file)
            dump_roles(tagged, roles_file)
        except (VoronoiGameError, OSError) as e:
            return _failure(e)
        return {
            "found": True,
            "seed": self.seed,
            "instance": str(output_file),
            "roles": str(roles_file),
            "player_count": tagged.instance.n,
            "compact_player_count": tagged.compact_player_count,
            "profile_count": tagged.instance.profile_count,
            "census": tagged.role_census,
            "eps": format_number(tagged.eps),
        }

    def equivalence(self, formula_file: Path, eps: Optional[Fraction] = None, budget: Optional[int] = None) -> dict:
        """
        Check that the formula's reduction game has a PNE iff the formula is satisfiable.
        """
        try:
            formula = load_formula(self._resolve(formula_file))
            report = check_equivalence(formula, eps, budget)
        except (VoronoiGameError, OSError) as e:
            return _failure(e)
        return {
            "found": True,
            "seed": self.seed,
            "pne_exists": report.pne_exists,
            "sat_exists": report.sat_exists,
            "agree": report.agree,
            "passed": report.passed,
            "nodes": report.nodes,
            "witnesses": report.witness_count,
            "extracted": None if report.extracted is None else list(report.extracted.assignment),
        }
