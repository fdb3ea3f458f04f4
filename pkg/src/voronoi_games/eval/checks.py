"""
Registry of numeric checks over the closed forms, estimators and oracles.

Every check returns a ``CheckResult``; the ones backed by Monte Carlo
estimates also carry their ``EstimatorReport`` rows so the runner can write
them as CSV. Grids of many simultaneous comparisons widen their bands with
a Bonferroni-corrected normal quantile.
"""

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, TextIO

import numpy as np
from opentelemetry import trace
from scipy import stats

from voronoi_games.equilibrium import enumerate_pne, improving_move_potential_ok, run_best_response
from voronoi_games.equilibrium.dynamics import MoveEvent, random_profile
from voronoi_games.expectation import (
    ProductDistribution,
    expected_utilities,
    oracle_expected_utility,
    total_expected_measure,
)
from voronoi_games.games import GameVariant, Objective, build_cycling_square_instance
from voronoi_games.hardness import Monotone1in3Formula, check_equivalence, small_formulas
from voronoi_games.randomgames import (
    EstimatorReport,
    beta_moment_estimate,
    harmonic_identity_holds_through,
    independence_check,
    is_monotone_bijection,
    lower_bound_chain,
    mean_pne_count,
    min_variant_moment,
    monotone_bijection,
    perturbation_inequality_mc,
    product_bound_holds_through,
    random_dominated_matrix,
    random_instance,
    smallest_n_reaching,
    smallest_spacing_mean,
    spacing_marginals_ks,
    stable_first_choice_probability,
    stable_product_moment,
    write_reports,
)
from voronoi_games.randomgames.reports import resolve_seed

tracer = trace.get_tracer(__name__)

FAMILY_ALPHA = 0.0027


def bonferroni_z(comparisons: int, alpha: float = FAMILY_ALPHA) -> float:
    """Two-sided normal quantile keeping the family-wise error at ``alpha``."""
    return float(stats.norm.isf(alpha / (2 * max(1, comparisons))))


@dataclass
class CheckContext:
    seed: int
    scale: float = 1.0
    mutate: frozenset = frozenset()

    def samples(self, default: int) -> int:
        return max(1, int(default * self.scale))

    def child_seeds(self, count: int) -> list[int]:
        return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(self.seed).spawn(count)]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    reports: list[EstimatorReport] = field(default_factory=list)
    seconds: float = 0.0


@dataclass(frozen=True)
class RegisteredCheck:
    name: str
    description: str
    fn: Callable[[CheckContext], CheckResult]
    slow: bool = False


CHECKS: dict[str, RegisteredCheck] = {}


def check(name: str, description: str, slow: bool = False):
    def register(fn: Callable[[CheckContext], CheckResult]):
        CHECKS[name] = RegisteredCheck(name, description, fn, slow)
        return fn

    return register


def _from_reports(name: str, reports: list[EstimatorReport], z: Optional[float] = None) -> CheckResult:
    if z is not None:
        reports = [r.model_copy(update={"z": z}) for r in reports]
    failed = [r for r in reports if not r.passed]
    detail = f"{len(reports) - len(failed)}/{len(reports)} estimates inside their bands"
    if failed:
        worst = failed[0]
        detail += f"; first failure {worst.check} n={worst.n} estimate={worst.estimate:.6g} se={worst.se:.3g}"
    return CheckResult(name, not failed, detail, reports)


# ---------------------------------------------------------------------------
# Spacings
# ---------------------------------------------------------------------------


@check("beta_moments", "E[(S_j/S_{j+1})^t] = j/(j+t) for the partial-sum ratios")
def _beta_moments(ctx: CheckContext) -> CheckResult:
    grid = [(j, t) for j in range(1, 11) for t in range(0, 6)]
    seeds = ctx.child_seeds(len(grid))
    samples = ctx.samples(20_000)
    reports = [beta_moment_estimate(j, t, samples, seed) for (j, t), seed in zip(grid, seeds)]
    return _from_reports("beta_moments", reports, bonferroni_z(len(grid)))


@check("independence", "S_n and the consecutive partial-sum ratios are independent")
def _independence(ctx: CheckContext) -> CheckResult:
    sizes = [2, 3, 5, 8]
    samples = ctx.samples(50_000)
    outcomes = [independence_check(n, samples, seed) for n, seed in zip(sizes, ctx.child_seeds(len(sizes)))]
    reports = [r for outcome in outcomes for r in outcome.factorizations]
    z = bonferroni_z(len(reports))
    reports = [r.model_copy(update={"z": z}) for r in reports]
    correlated = [
        (o.n, a, b, r) for o in outcomes for a, b, r in o.correlations if abs(r) > o.correlation_limit
    ]
    failed = [r for r in reports if not r.passed]
    detail = f"{sum(len(o.correlations) for o in outcomes)} correlations, {len(reports)} factorised moments"
    if correlated:
        n, a, b, r = correlated[0]
        detail += f"; n={n} corr({a}, {b}) = {r:.4f}"
    if failed:
        detail += f"; {failed[0].check} n={failed[0].n} off by {abs(failed[0].estimate - failed[0].exact):.3g}"
    return CheckResult("independence", not correlated and not failed, detail, reports)


@check("spacing_representation", "sorted uniforms and weighted exponentials give the same spacings")
def _spacing_representation(ctx: CheckContext) -> CheckResult:
    sizes = [2, 3, 5, 8]
    samples = ctx.samples(5_000)
    pvalues = [
        (n, p) for n, seed in zip(sizes, ctx.child_seeds(len(sizes))) for p in spacing_marginals_ks(n, samples, seed)
    ]
    threshold = 0.001 / len(pvalues)
    low = [(n, p) for n, p in pvalues if p <= threshold]
    detail = f"{len(pvalues)} KS tests, smallest p = {min(p for _, p in pvalues):.3g}"
    return CheckResult("spacing_representation", not low, detail)


@check("smallest_spacing", "the smallest of n circular spacings has mean 1/n²")
def _smallest_spacing(ctx: CheckContext) -> CheckResult:
    reports = [smallest_spacing_mean(n, ctx.samples(50_000), seed) for n, seed in zip((2, 5, 10), ctx.child_seeds(3))]
    return _from_reports("smallest_spacing", reports, bonferroni_z(len(reports)))


# ---------------------------------------------------------------------------
# Harmonic constants
# ---------------------------------------------------------------------------


@check("harmonic_identity", "Σ c_i = n - H_n^(2) holds exactly through n = 10^4")
def _harmonic_identity(ctx: CheckContext) -> CheckResult:
    n_max = 10**4
    ok = harmonic_identity_holds_through(n_max)
    return CheckResult("harmonic_identity", ok, f"exact integer test for 1 <= n <= {n_max}")


@check("product_bound", "∏ c_i >= exp(-H_n^(2) / (1 - H_n/n)) for 2 <= n <= 10^4")
def _product_bound(ctx: CheckContext) -> CheckResult:
    n_max = 10**4
    return CheckResult("product_bound", product_bound_holds_through(n_max), f"extended-precision logs up to n={n_max}")


@check("product_threshold", "∏ c_i first reaches 0.19 at a finite n")
def _product_threshold(ctx: CheckContext) -> CheckResult:
    n = smallest_n_reaching(0.19)
    if n is None:
        return CheckResult("product_threshold", False, "∏ c_i stays below 0.19 through n = 10^4")
    return CheckResult("product_threshold", True, f"∏ c_i >= 0.19 from n = {n}")


# ---------------------------------------------------------------------------
# Random One-Way games
# ---------------------------------------------------------------------------


@check("stable_first_choice", "P(all first choices stable) <= 1/m^(n-1)")
def _stable_first_choice(ctx: CheckContext) -> CheckResult:
    grid = [(n, m) for n in (2, 3, 5, 8) for m in (2, 3, 4)]
    samples = ctx.samples(40_000)
    reports = [stable_first_choice_probability(n, m, samples, s) for (n, m), s in zip(grid, ctx.child_seeds(len(grid)))]
    return _from_reports("stable_first_choice", reports, bonferroni_z(len(grid)))


@check("stable_product_moment", "E[∏ (X_i/S_n)^(m-1)] = 1/m^(n-1) for ordered spacings")
def _stable_product_moment(ctx: CheckContext) -> CheckResult:
    grid = [(n, m) for n in (2, 3, 5) for m in (2, 3)]
    samples = ctx.samples(100_000)
    reports = [stable_product_moment(n, m, samples, s) for (n, m), s in zip(grid, ctx.child_seeds(len(grid)))]
    return _from_reports("stable_product_moment", reports, bonferroni_z(len(grid)))


@check("min_variant_moment", "minimisation moment equals (n-1)/((mn-1) m^(n-2))")
def _min_variant_moment(ctx: CheckContext) -> CheckResult:
    grid = [(n, m) for n in (2, 3, 5) for m in (2, 3)]
    samples = ctx.samples(100_000)
    reports = [min_variant_moment(n, m, samples, s) for (n, m), s in zip(grid, ctx.child_seeds(len(grid)))]
    return _from_reports("min_variant_moment", reports, bonferroni_z(len(grid)))


@check("lower_bound_chain", "the all-first-choices probability dominates ∏ c_i^(m-1) / m^(n-1)")
def _lower_bound_chain(ctx: CheckContext) -> CheckResult:
    grid = [(n, m) for n in (2, 3, 5) for m in (2, 3)]
    samples = ctx.samples(100_000)
    reports = [lower_bound_chain(n, m, samples, s) for (n, m), s in zip(grid, ctx.child_seeds(len(grid)))]
    return _from_reports("lower_bound_chain", reports, bonferroni_z(len(grid)))


@check("mean_pne_count", "mean One-Way PNE counts fall inside their theoretical brackets")
def _mean_pne_count(ctx: CheckContext) -> CheckResult:
    grid = [
        (n, m, objective)
        for objective in (Objective.MAXIMIZE, Objective.MINIMIZE)
        for n, m in ((2, 2), (3, 2), (4, 2), (3, 3), (5, 2))
    ]
    instances = ctx.samples(300)
    reports = [
        mean_pne_count(n, m, GameVariant.ONE_WAY_1D, objective, instances, s)
        for (n, m, objective), s in zip(grid, ctx.child_seeds(len(grid)))
    ]
    return _from_reports("mean_pne_count", reports, bonferroni_z(len(grid)))


@check("pne_bracket_grid", "mean One-Way max PNE counts at 2000 instances stay inside [m ∏c_i^(m-1), m]", slow=True)
def _pne_bracket_grid(ctx: CheckContext) -> CheckResult:
    grid = [(n, 2) for n in range(4, 11)] + [(n, 3) for n in range(4, 8)]
    instances = ctx.samples(2000)
    reports = [
        mean_pne_count(n, m, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, instances, s)
        for (n, m), s in zip(grid, ctx.child_seeds(len(grid)))
    ]
    return _from_reports("pne_bracket_grid", reports)


@check("min_objective_bound", "mean One-Way min PNE counts reach m(m-1)/((mn-1) n^(m-1))", slow=True)
def _min_objective_bound(ctx: CheckContext) -> CheckResult:
    sizes = (4, 6, 8)
    instances = ctx.samples(2000)
    reports = [
        mean_pne_count(n, 2, GameVariant.ONE_WAY_1D, Objective.MINIMIZE, instances, s)
        for n, s in zip(sizes, ctx.child_seeds(len(sizes)))
    ]
    return _from_reports("min_objective_bound", reports)


@check("perturbation", "moving ε of a dominated column onto the dominating one never lowers the product moment")
def _perturbation(ctx: CheckContext) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    cases = [([[1, 2], [1, 2]], 0, 1, Fraction(1, 2))]
    for _ in range(19):
        rows, cols = (int(v) for v in rng.integers(2, 5, size=2))
        cases.append(random_dominated_matrix(rows, cols, rng))
    samples = ctx.samples(50_000)
    reports = [
        perturbation_inequality_mc(A, s, t, eps, samples, seed)
        for (A, s, t, eps), seed in zip(cases, ctx.child_seeds(len(cases)))
    ]
    return _from_reports("perturbation", reports, bonferroni_z(len(cases)))


@check("monotone_bijection", "subsets of size k map monotonically onto subsets of size n-k")
def _monotone_bijection(ctx: CheckContext) -> CheckResult:
    checked = 0
    for n in range(2, 11):
        for k in range(1, n // 2 + 1):
            mapping = monotone_bijection(n, k)
            if not is_monotone_bijection(mapping, n, k):
                return CheckResult("monotone_bijection", False, f"no valid mapping for n={n}, k={k}")
            checked += 1
    return CheckResult("monotone_bijection", True, f"{checked} (n, k) pairs with n <= 10")


# ---------------------------------------------------------------------------
# Exact game machinery
# ---------------------------------------------------------------------------


def _oracle_agreement(ctx: CheckContext, name: str, variants, sizes, count: int, tolerance: float) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for idx in range(count):
        variant = variants[idx % len(variants)]
        objective = (Objective.MAXIMIZE, Objective.MINIMIZE)[idx % 2]
        n = int(rng.integers(sizes[0], sizes[1] + 1))
        m = [int(v) for v in rng.integers(1, 4, size=n)]
        instance = random_instance(n, m, variant, objective, rng=rng)
        dist = ProductDistribution.random(instance, rng)
        for k in range(n):
            fast = expected_utilities(instance, dist, k)
            slow = oracle_expected_utility(instance, dist, k)
            worst = max(worst, max(abs(float(a) - float(b)) for a, b in zip(fast, slow)))
        conservation = abs(float(total_expected_measure(instance, dist)) - 1.0)
        worst = max(worst, conservation)
        if worst > tolerance:
            return CheckResult(name, False, f"instance {idx} ({variant.value}, n={n}) differs by {worst:.3g}")
    return CheckResult(name, True, f"{count} instances, max deviation {worst:.3g}")


@check("expected_utility_1d", "the distance-sorted sweep agrees with the profile-enumeration oracle on the circle")
def _expected_utility_1d(ctx: CheckContext) -> CheckResult:
    variants = (GameVariant.VORONOI_1D, GameVariant.ONE_WAY_1D)
    return _oracle_agreement(ctx, "expected_utility_1d", variants, (1, 6), ctx.samples(60), 1e-9)


@check("expected_utility_2d", "the sector decomposition agrees with the oracle in the square and on the torus")
def _expected_utility_2d(ctx: CheckContext) -> CheckResult:
    variants = (GameVariant.VORONOI_2D_SQUARE, GameVariant.VORONOI_2D_TORUS)
    return _oracle_agreement(ctx, "expected_utility_2d", variants, (1, 4), ctx.samples(10), 1e-7)


@check("no_pne_construction", "the fixed 2-D construction has no pure Nash equilibrium")
def _no_pne_construction(ctx: CheckContext) -> CheckResult:
    for n in (3, 5):
        for objective in (Objective.MAXIMIZE, Objective.MINIMIZE):
            instance = build_cycling_square_instance(n=n, objective=objective)
            found = enumerate_pne(instance)
            if found:
                return CheckResult("no_pne_construction", False, f"n={n} {objective.value}: PNE {found[0]}")
    return CheckResult("no_pne_construction", True, "n in {3, 5}, both objectives: 0 PNE")


def _monitored_dynamics(name: str, instances: Iterable, rng: np.random.Generator, max_passes: int) -> CheckResult:
    """Best response from a random profile on each 1-D instance, checking the potential at every move."""
    count = moves = 0
    for idx, instance in enumerate(instances):
        profile = list(random_profile(instance, rng))
        bad: list[MoveEvent] = []

        def track(event: MoveEvent) -> None:
            before = list(profile)
            profile[event.player] = event.new_choice
            if not improving_move_potential_ok(instance, before, profile):
                bad.append(event)

        outcome = run_best_response(instance, profile, max_passes, on_move=track)
        count += 1
        moves += outcome.moves
        if bad:
            return CheckResult(name, False, f"instance {idx} (n={instance.n}): move {bad[0]} broke monotonicity")
        if not outcome.converged:
            return CheckResult(name, False, f"instance {idx} (n={instance.n}) did not converge")
    return CheckResult(name, True, f"{count} instances, {moves} moves")


@check("potential_decrease", "every improving move on the circle moves the sorted arc multiset the right way")
def _potential_decrease(ctx: CheckContext) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    instances = (
        random_instance(int(rng.integers(3, 15)), 3, GameVariant.VORONOI_1D, objective, rng=rng)
        for objective in itertools.islice(itertools.cycle(Objective), ctx.samples(40))
    )
    return _monitored_dynamics("potential_decrease", instances, rng, 1000)


@check("voronoi_1d_convergence", "best response converges on 1000 random 1-D games per size and objective", slow=True)
def _voronoi_1d_convergence(ctx: CheckContext) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    per_cell = ctx.samples(1000)
    instances = (
        random_instance(n, 3, GameVariant.VORONOI_1D, objective, rng=rng)
        for n in (10, 100)
        for objective in Objective
        for _ in range(per_cell)
    )
    return _monitored_dynamics("voronoi_1d_convergence", instances, rng, 100_000)


# ---------------------------------------------------------------------------
# Hardness
# ---------------------------------------------------------------------------


@check("reduction_small", "a small satisfiable formula maps to a game with a PNE and back")
def _reduction_small(ctx: CheckContext) -> CheckResult:
    formulas = [
        Monotone1in3Formula(1, []),
        Monotone1in3Formula(3, [(1, 2, 3)]),
        Monotone1in3Formula(4, [(1, 2, 3), (1, 2, 4)]),
    ]
    for formula in formulas:
        report = check_equivalence(formula)
        if not report.passed:
            return CheckResult("reduction_small", False, f"k={formula.k}, l={formula.l}: {report}")
    return CheckResult("reduction_small", True, f"{len(formulas)} formulas agree")


@check("reduction_grid", "every formula with k <= 3 and l <= 2 agrees with its reduction game", slow=True)
def _reduction_grid(ctx: CheckContext) -> CheckResult:
    checked = 0
    for formula in small_formulas(3, 2):
        report = check_equivalence(formula)
        if not report.passed:
            return CheckResult("reduction_grid", False, f"k={formula.k}, clauses={formula.clauses}: {report}")
        checked += 1
    return CheckResult("reduction_grid", True, f"{checked} formulas agree")


@check("reduction_unsat", "the four-clause unsatisfiable formula maps to a game without PNE", slow=True)
def _reduction_unsat(ctx: CheckContext) -> CheckResult:
    formula = Monotone1in3Formula(4, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])
    report = check_equivalence(formula)
    return CheckResult(
        "reduction_unsat", report.passed, f"PNE found: {report.pne_exists}, nodes: {report.nodes}"
    )


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def _apply_mutation(result: CheckResult) -> CheckResult:
    """Negate every exact reference value; used to confirm a check can fail."""
    reports = [r if r.exact is None else r.model_copy(update={"exact": -r.exact}) for r in result.reports]
    if not reports:
        return CheckResult(result.name, False, "mutated: " + result.detail, [], result.seconds)
    return _from_reports(result.name, reports)


def select_checks(only: Optional[Iterable[str]] = None, include_slow: bool = False) -> list[RegisteredCheck]:
    if only:
        names = list(only)
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise KeyError(f"unknown checks: {', '.join(unknown)}")
        return [CHECKS[n] for n in names]
    return [c for c in CHECKS.values() if include_slow or not c.slow]


def run_checks(
    only: Optional[Iterable[str]] = None,
    seed: Optional[int] = None,
    scale: float = 1.0,
    include_slow: bool = False,
    mutate: Iterable[str] = (),
    out: Optional[TextIO] = None,
    verbose: bool = True,
) -> list[CheckResult]:
    """
    Run the selected checks and print a pass/fail summary.

    Args:
        only: Check names to run; all non-slow checks when omitted
        seed: Master seed; every check derives its own streams from it
        scale: Multiplier on each check's default sample size
        include_slow: Also run checks registered as slow
        mutate: Check names whose exact reference values get negated
        out: Where to write the estimator CSV, if anywhere
        verbose: Print the per-check report

    Returns:
        list of CheckResult in run order
    """
    seed = resolve_seed(seed)
    selected = select_checks(only, include_slow)
    mutate = frozenset(mutate)
    ctx = CheckContext(seed=seed, scale=scale, mutate=mutate)

    if verbose:
        print("=" * 80)
        print(f"Voronoi game checks (seed={seed}, scale={scale:g})")
        print("=" * 80)

    results = []
    for registered in selected:
        with tracer.start_as_current_span("checks.run") as span:
            span.set_attribute("check", registered.name)
            started = time.perf_counter()
            result = registered.fn(ctx)
            result.seconds = time.perf_counter() - started
            if registered.name in mutate:
                result = _apply_mutation(result)
            span.set_attribute("passed", result.passed)
        results.append(result)
        if verbose:
            mark = "✓" if result.passed else "❌"
            print(f"{mark} {result.name:<24} {result.detail} ({result.seconds:.1f}s)")

    if verbose:
        failed = [r for r in results if not r.passed]
        print(f"\n{'=' * 80}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        for r in failed:
            print(f"  ❌ {r.name}")
        print(f"{'=' * 80}")

    if out is not None:
        write_reports(out, [r for result in results for r in result.reports], seed)
    return results


def list_checks() -> list[tuple[str, str, bool]]:
    return [(c.name, c.description, c.slow) for c in CHECKS.values()]


__all__ = ["CHECKS", "CheckContext", "CheckResult", "bonferroni_z", "list_checks", "run_checks", "select_checks"]
