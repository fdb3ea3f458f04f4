import io
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import stats

from voronoi_games.errors import BudgetExceededError, PreconditionError
from voronoi_games.games import GameVariant, Objective
from voronoi_games.randomgames import (
    EstimatorReport,
    SpacingRoute,
    beta_moment_estimate,
    exact_product_moment,
    harmonic_constants,
    harmonic_identity_holds_through,
    independence_check,
    is_monotone_bijection,
    lower_bound_chain,
    mean_and_se,
    mean_pne_count,
    min_variant_moment,
    monotone_bijection,
    perturb,
    perturbation_inequality_mc,
    pne_count_bounds,
    product_bound_holds_through,
    random_dominated_matrix,
    random_instance,
    sample_spacings,
    smallest_n_reaching,
    smallest_spacing_mean,
    spacing_marginals_ks,
    stable_first_choice_probability,
    stable_product_moment,
    write_reports,
)
from voronoi_games.randomgames.harmonic import HarmonicConstants, _log_bounds, first_identity_failure


# ---------------------------------------------------------------------------
# Instances and reports
# ---------------------------------------------------------------------------


def test_random_instance_is_seeded():
    a = random_instance(6, 3, GameVariant.VORONOI_2D_TORUS, Objective.MINIMIZE, seed=4)
    b = random_instance(6, 3, GameVariant.VORONOI_2D_TORUS, Objective.MINIMIZE, seed=4)
    assert a == b
    assert a.m == (3,) * 6
    assert random_instance(3, [1, 2, 3], GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, seed=0).m == (1, 2, 3)


def test_random_points_are_uniform():
    instance = random_instance(1000, 2, GameVariant.VORONOI_1D, Objective.MAXIMIZE, seed=17)
    points = np.array([p for pts in instance.candidates for p in pts])
    counts, _ = np.histogram(points, bins=20, range=(0.0, 1.0))
    assert stats.chisquare(counts).pvalue > 0.001


def test_random_instance_rejects_bad_shapes():
    with pytest.raises(PreconditionError):
        random_instance(0, 2, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE)
    with pytest.raises(PreconditionError):
        random_instance(2, [1], GameVariant.ONE_WAY_1D, Objective.MAXIMIZE)
    with pytest.raises(PreconditionError):
        random_instance(2, 0, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE)


def test_report_band_and_csv():
    report = EstimatorReport(check="demo", estimate=0.51, se=0.01, samples=100, seed=1, exact=0.5)
    assert report.passed
    assert not report.model_copy(update={"exact": 0.6}).passed
    assert not EstimatorReport(check="demo", estimate=2.5, se=0.1, samples=10, upper=2.0).passed
    assert EstimatorReport(check="demo", estimate=1.9, se=0.0, samples=10, lower=1.9).passed

    out = io.StringIO()
    assert write_reports(out, [report.model_copy(update={"check": "z"}), report], seed=1) == 2
    lines = out.getvalue().splitlines()
    assert lines[0] == "# voronoi-games estimators v1 seed=1"
    assert lines[1].split(",")[0] == "check"
    assert lines[2].startswith("demo,")


def test_mean_and_se():
    mean, se = mean_and_se(np.array([1.0, 2.0, 3.0, 4.0]))
    assert mean == pytest.approx(2.5)
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    assert mean_and_se(np.array([5.0])) == (5.0, 0.0)


# ---------------------------------------------------------------------------
# Spacings
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("route", list(SpacingRoute))
def test_spacings_are_ordered_and_sum_to_one(route):
    sample = sample_spacings(7, seed=3, route=route)
    assert np.all(np.diff(sample.A) >= 0)
    assert sample.A.sum() == pytest.approx(1.0)
    assert sample.S[-1] == pytest.approx(sample.X.sum())


def test_beta_moments_grid():
    reports = [beta_moment_estimate(j, t, 20_000, seed=10 * j + t) for j in (1, 3, 10) for t in (1, 2, 5)]
    assert all(r.model_copy(update={"z": 3.5}).passed for r in reports)
    assert beta_moment_estimate(4, 0, 100, seed=0).estimate == 1.0


def test_beta_moment_sign_flip_is_caught():
    report = beta_moment_estimate(2, 3, 20_000, seed=1)
    assert not report.model_copy(update={"exact": -report.exact}).passed


def test_beta_moment_preconditions():
    with pytest.raises(PreconditionError):
        beta_moment_estimate(0, 1, 10)
    with pytest.raises(PreconditionError):
        beta_moment_estimate(1, -1, 10)


@pytest.mark.parametrize("n", [2, 4])
def test_independence(n):
    report = independence_check(n, 40_000, seed=n)
    assert len(report.correlations) == n * (n - 1) // 2
    assert report.passed


def test_independence_single_spacing_is_vacuous():
    assert independence_check(1, 10, seed=0).passed


def test_spacing_routes_agree():
    assert min(spacing_marginals_ks(4, 4_000, seed=12)) > 1e-4


def test_smallest_spacing_mean():
    report = smallest_spacing_mean(4, 50_000, seed=2)
    assert report.exact == pytest.approx(1 / 16)
    assert report.passed


# ---------------------------------------------------------------------------
# Harmonic constants
# ---------------------------------------------------------------------------


def test_harmonic_constants_small_n():
    hc = harmonic_constants(3)
    assert hc.c == (F(2, 3), F(7, 12), F(7, 18))
    assert hc.sum_c == F(59, 36) == 3 - hc.harmonic2
    assert hc.product_c == F(49, 324)
    assert hc.identity_holds()
    assert hc.product_bound_holds()
    assert harmonic_constants(2).product_c == F(1, 8)
    with pytest.raises(PreconditionError):
        harmonic_constants(1).product_bound()


def test_harmonic_identity_scaled_integers():
    assert first_identity_failure(300) is None
    assert harmonic_identity_holds_through(300)
    assert product_bound_holds_through(300)


def test_identity_spot_checks_reach_past_the_dense_range(monkeypatch):
    monkeypatch.setattr(HarmonicConstants, "identity_holds", lambda self: self.n != 250)
    assert first_identity_failure(300) == 250
    assert first_identity_failure(200) is None


def test_log_bounds_skip_the_degenerate_first_term():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bounds = _log_bounds(50)
    assert len(bounds) == 49
    # n = 2: H = 3/2, H^(2) = 5/4
    assert float(bounds[0]) == pytest.approx(-5.0)


def _float_product(n: int) -> float:
    harmonic = np.concatenate([[0.0], np.cumsum(1 / np.arange(1, n + 1))])
    i = np.arange(1, n + 1)
    return float(np.prod(1 + (harmonic[n - i] - harmonic[n]) / i))


def test_product_threshold():
    n = smallest_n_reaching(0.19, n_max=3000)
    assert n is not None
    assert _float_product(n) >= 0.19 - 1e-12
    assert _float_product(n - 1) < 0.19 + 1e-12
    assert smallest_n_reaching(0.5, n_max=50) is None


def test_pne_count_bounds():
    assert pne_count_bounds(2, 2, Objective.MAXIMIZE) == (F(1, 4), F(2))
    assert pne_count_bounds(2, 2, Objective.MINIMIZE) == (F(1, 3), None)
    assert pne_count_bounds(1, 1, Objective.MINIMIZE) == (F(1), F(1))


# ---------------------------------------------------------------------------
# Random One-Way games
# ---------------------------------------------------------------------------


def test_mean_pne_count_inside_bracket():
    report = mean_pne_count(4, 2, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, 300, seed=5)
    assert report.lower == pytest.approx(float(pne_count_bounds(4, 2, Objective.MAXIMIZE)[0]))
    assert report.upper == 2
    assert report.passed


def test_min_variant_lower_bound():
    report = mean_pne_count(4, 2, GameVariant.ONE_WAY_1D, Objective.MINIMIZE, 300, seed=6)
    assert report.lower == pytest.approx(1 / 14)
    assert report.upper is None
    assert report.passed


def test_mean_pne_count_budget():
    with pytest.raises(BudgetExceededError):
        mean_pne_count(10, 4, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, 1, budget=1000)


@pytest.mark.parametrize("n,m", [(3, 2), (5, 3)])
def test_stable_first_choice_probability(n, m):
    report = stable_first_choice_probability(n, m, 40_000, seed=n * m)
    assert report.upper == pytest.approx(1 / m ** (n - 1))
    assert report.passed


@pytest.mark.parametrize("n,m", [(2, 2), (4, 3)])
def test_closed_form_moments(n, m):
    assert stable_product_moment(n, m, 100_000, seed=1).passed
    assert min_variant_moment(n, m, 100_000, seed=2).passed
    assert lower_bound_chain(n, m, 100_000, seed=3).passed


def test_min_variant_moment_needs_two_players():
    with pytest.raises(PreconditionError):
        min_variant_moment(1, 2, 10)


# ---------------------------------------------------------------------------
# Perturbation and bijection
# ---------------------------------------------------------------------------


def test_exact_product_moment_example():
    A = [[1, 2], [1, 2]]
    assert exact_product_moment(A) == 14
    assert exact_product_moment(perturb(A, 0, 1, F(1, 2))) == F(27, 2)


def test_perturbation_preconditions():
    A = [[1, 2], [1, 2]]
    with pytest.raises(PreconditionError):
        perturb(A, 1, 0, F(1, 2))
    with pytest.raises(PreconditionError):
        perturb(A, 0, 0, F(1, 2))
    with pytest.raises(PreconditionError):
        perturb(A, 0, 1, 0)
    with pytest.raises(PreconditionError):
        perturb(A, 0, 1, 3)
    with pytest.raises(PreconditionError):
        perturb([[-1, 2]], 0, 1, F(1, 2))


def test_perturbation_never_lowers_the_moment():
    rng = np.random.default_rng(9)
    for seed in range(5):
        A, s, t, eps = random_dominated_matrix(3, 3, rng)
        report = perturbation_inequality_mc(A, s, t, eps, 50_000, seed=seed)
        assert report.model_copy(update={"z": 3.5}).passed
        assert report.exact >= -1e-12


def test_perturbation_equality_case():
    report = perturbation_inequality_mc([[1, 1], [2, 2]], 0, 1, F(1, 2), 20_000, seed=4)
    assert report.exact == pytest.approx(0.0, abs=1e-12)
    assert report.passed


@pytest.mark.parametrize("n", range(2, 9))
def test_monotone_bijection(n):
    for k in range(1, n // 2 + 1):
        mapping = monotone_bijection(n, k)
        assert is_monotone_bijection(mapping, n, k)


def test_monotone_bijection_preconditions():
    with pytest.raises(PreconditionError):
        monotone_bijection(4, 3)
    with pytest.raises(PreconditionError):
        monotone_bijection(4, 0)
    assert not is_monotone_bijection({frozenset({1}): frozenset({2, 3})}, 3, 1)


@pytest.mark.slow
@pytest.mark.parametrize("n,m", [(n, 2) for n in range(4, 11)] + [(n, 3) for n in range(4, 8)])
def test_mean_pne_count_bracket_at_scale(n, m):
    report = mean_pne_count(n, m, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, 2000, seed=100 + 10 * n + m)
    assert report.lower == pytest.approx(float(pne_count_bounds(n, m, Objective.MAXIMIZE)[0]))
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize("n", [4, 6, 8])
def test_min_variant_bound_at_scale(n):
    report = mean_pne_count(n, 2, GameVariant.ONE_WAY_1D, Objective.MINIMIZE, 2000, seed=200 + n)
    assert report.lower == pytest.approx(2 / ((2 * n - 1) * n))
    assert report.passed
