import math

import numpy as np
import pytest

from analysis import (
    classical_rw_distribution,
    compare_with_prediction,
    galton_predicted_moments,
    gaussian_approximation,
    konno_predicted_moments,
    moments,
    predicted_walk_moments,
    total_variation,
)
from app_config import config
from coins import make_galton_coin, make_hadamard, make_konno_coin
from exceptions import InvalidStateError, PredictionUndefinedError
from models import InitialCoinState, MomentReport, ProbabilityDistribution, StepOrdering, WalkTopology
from walk import evolve, initial_state, probabilities

HADAMARD_SPREAD = math.sqrt(1.0 - 1.0 / math.sqrt(2.0))


def _point(m: int) -> ProbabilityDistribution:
    return ProbabilityDistribution([m], [1.0], [0.0], 0)


def _line_walk(coin, init, n, ordering=StepOrdering.COIN_AFTER_SHIFT):
    return probabilities(evolve(initial_state(WalkTopology.line(), 0, init), coin, ordering, n))


def test_classical_two_steps():
    dist = classical_rw_distribution(2)
    assert dist.as_mapping() == {-2: pytest.approx(0.25), 0: pytest.approx(0.5), 2: pytest.approx(0.25)}
    assert np.allclose(dist.p_c1, dist.p / 2)
    assert np.allclose(dist.p_c2, dist.p / 2)


def test_classical_zero_steps():
    assert classical_rw_distribution(0).as_mapping() == {0: pytest.approx(1.0)}


def test_classical_rejects_negative_steps():
    with pytest.raises(InvalidStateError):
        classical_rw_distribution(-1)


@pytest.mark.parametrize("n", [1, 2, 17, 200, 10000])
def test_classical_variance_is_n(n):
    report = moments(classical_rw_distribution(n))
    assert report.mean == pytest.approx(0.0, abs=1e-9)
    assert report.variance == pytest.approx(n, abs=1e-9 * max(n, 1))
    assert report.std_dev == pytest.approx(math.sqrt(n), abs=1e-9)


def test_moments_of_point_mass():
    report = moments(_point(0))
    assert report.mean == 0.0
    assert report.variance == 0.0
    assert report.std_dev == 0.0


def test_moments_of_classical_two_steps():
    assert moments(classical_rw_distribution(2)).second_moment == pytest.approx(2.0)


def test_hadamard_three_step_mean(upper_init):
    assert moments(_line_walk(make_hadamard(), upper_init, 3)).mean == pytest.approx(1.0, abs=1e-12)


def test_quadratic_speedup(symmetric_init):
    quantum = moments(_line_walk(make_hadamard(), symmetric_init, 200))
    classical = moments(classical_rw_distribution(200))
    assert quantum.std_dev / 200 == pytest.approx(HADAMARD_SPREAD, rel=config.spread_tolerance)
    assert classical.std_dev == pytest.approx(math.sqrt(200), abs=1e-9)


def test_konno_literal_hadamard_upper_start(upper_init):
    report = konno_predicted_moments(make_hadamard(), upper_init, 100)
    assert abs(report.mean) == pytest.approx((1 - 1 / math.sqrt(2)) * 100)
    assert report.second_moment == pytest.approx((1 - 1 / math.sqrt(2)) * 100**2)


def test_konno_literal_symmetric_start_has_no_drift(symmetric_init):
    assert konno_predicted_moments(make_hadamard(), symmetric_init, 100).mean == pytest.approx(0.0, abs=1e-12)


def test_konno_identity_coin_is_ballistic(upper_init):
    report = konno_predicted_moments(make_konno_coin(1, 0, 1), upper_init, 40)
    assert report.second_moment == pytest.approx(1600.0)


def test_konno_swap_coin_is_undefined(upper_init):
    with pytest.raises(PredictionUndefinedError):
        konno_predicted_moments(make_konno_coin(0, 1, 1), upper_init, 10)
    with pytest.raises(PredictionUndefinedError):
        predicted_walk_moments(make_konno_coin(0, 1, 1), upper_init, 10)


@pytest.mark.parametrize("ordering", [StepOrdering.COIN_AFTER_SHIFT, StepOrdering.SHIFT_AFTER_COIN])
def test_walk_prediction_hadamard_upper_start_drifts_right(upper_init, ordering):
    report = predicted_walk_moments(make_hadamard(), upper_init, 100, ordering)
    assert report.mean == pytest.approx((1 - 1 / math.sqrt(2)) * 100)


def test_literal_drift_magnitude_matches_simulation(upper_init):
    n = 500
    coin = make_hadamard()
    measured = moments(_line_walk(coin, upper_init, n, StepOrdering.SHIFT_AFTER_COIN))
    literal = konno_predicted_moments(coin, upper_init, n)
    report = compare_with_prediction(measured, literal, (1 - abs(coin.b)) * n, magnitude_only=True)
    assert report.ok
    assert measured.mean > 0 > literal.mean


def test_literal_drift_fails_when_interference_term_is_present():
    # population and interference terms cancel in the literal bracket only
    n = 500
    coin = make_hadamard()
    init = InitialCoinState(complex(math.cos(math.pi / 8)), complex(math.sin(math.pi / 8)))
    scale = (1 - abs(coin.b)) * n
    measured = moments(_line_walk(coin, init, n, StepOrdering.SHIFT_AFTER_COIN))
    literal = konno_predicted_moments(coin, init, n)
    mapped = predicted_walk_moments(coin, init, n, StepOrdering.SHIFT_AFTER_COIN)
    assert literal.mean == pytest.approx(0.0, abs=1e-9)
    assert mapped.mean == pytest.approx(math.sqrt(2) * scale)
    assert not compare_with_prediction(measured, literal, scale, magnitude_only=True).mean_ok
    assert compare_with_prediction(measured, mapped, scale).mean_ok


def test_random_coins_break_the_literal_drift_magnitude(random_coins, rng):
    n = 500
    failures = []
    for coin in random_coins(10):
        theta = rng.uniform(0, math.pi / 2)
        phase = rng.uniform(0, 2 * math.pi)
        init = InitialCoinState(complex(math.cos(theta)), math.sin(theta) * complex(math.cos(phase), math.sin(phase)))
        measured = moments(_line_walk(coin, init, n, StepOrdering.SHIFT_AFTER_COIN))
        scale = (1 - abs(coin.b)) * n
        literal = compare_with_prediction(measured, konno_predicted_moments(coin, init, n), scale, magnitude_only=True)
        mapped = predicted_walk_moments(coin, init, n, StepOrdering.SHIFT_AFTER_COIN)
        assert compare_with_prediction(measured, mapped, scale).mean_ok
        if not literal.mean_ok:
            failures.append((coin, init, literal.mean_error_on_scale))
    assert failures, "expected at least one coin where |⟨x⟩| of the literal formula misses"


@pytest.mark.parametrize("ordering", [StepOrdering.COIN_AFTER_SHIFT, StepOrdering.SHIFT_AFTER_COIN])
def test_random_coins_converge_to_prediction(random_coins, rng, ordering):
    n = 500
    for coin in random_coins(10):
        assert abs(coin.a) >= 0.3
        theta = rng.uniform(0, math.pi / 2)
        phase = rng.uniform(0, 2 * math.pi)
        init = InitialCoinState(complex(math.cos(theta)), math.sin(theta) * complex(math.cos(phase), math.sin(phase)))
        measured = moments(_line_walk(coin, init, n, ordering))
        predicted = predicted_walk_moments(coin, init, n, ordering)
        report = compare_with_prediction(measured, predicted, (1 - abs(coin.b)) * n)
        assert report.second_moment_ok, report.second_moment_relative_error
        assert report.mean_ok, report.mean_error_on_scale


@pytest.mark.parametrize("delta", [math.pi / 10, math.pi / 5, 3 * math.pi / 10])
def test_galton_coin_walk_matches_prediction(real_equal_init, delta):
    n = 200
    measured = moments(_line_walk(make_galton_coin(delta), real_equal_init, n))
    predicted = galton_predicted_moments(delta, real_equal_init, n)
    assert predicted.mean == pytest.approx(0.0, abs=1e-12)
    assert abs(measured.mean) <= 0.02 * n
    assert measured.std_dev == pytest.approx(math.sqrt(1 - math.sin(delta)) * n, rel=config.spread_tolerance)


def test_galton_prediction_values(real_equal_init):
    report = galton_predicted_moments(math.pi / 5, real_equal_init, 100)
    assert report.std_dev == pytest.approx(math.sqrt(1 - math.sin(math.pi / 5)) * 100)
    assert report.std_dev == pytest.approx(64.2, abs=0.01)
    assert galton_predicted_moments(0.0, real_equal_init, 30).second_moment == pytest.approx(900.0)


def test_galton_tan_term(symmetric_init):
    # Im(αβ*) = -1/2 for α = 1/√2, β = i/√2
    delta = math.pi / 6
    report = galton_predicted_moments(delta, symmetric_init, 10)
    assert report.mean == pytest.approx(-math.tan(delta) * (1 - math.sin(delta)) * 10)


def test_galton_prediction_rejects_zero_spread(real_equal_init):
    with pytest.raises(PredictionUndefinedError):
        galton_predicted_moments(math.pi / 2, real_equal_init, 10)


def test_total_variation_basics(symmetric_init):
    dist = _line_walk(make_hadamard(), symmetric_init, 10)
    assert total_variation(dist, dist) == 0.0
    assert total_variation(_point(0), _point(1)) == pytest.approx(1.0)


def test_total_variation_quantum_vs_classical(symmetric_init):
    quantum = _line_walk(make_hadamard(), symmetric_init, 200)
    assert total_variation(quantum, classical_rw_distribution(200)) > 0.3


def test_total_variation_aligns_grids(symmetric_init):
    dist = _line_walk(make_hadamard(), symmetric_init, 10)
    assert total_variation(dist, dist.regrid(5)) == pytest.approx(0.0, abs=1e-15)
    assert total_variation(dist.regrid(2), dist.regrid(3)) == pytest.approx(0.0, abs=1e-15)
    assert total_variation(dist, dist.shifted(2).regrid(2)) > 0.0


def test_gaussian_approximation():
    dist = gaussian_approximation(200)
    assert dist.p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(dist.p[1::2] == 0.0)
    assert moments(dist).std_dev == pytest.approx(math.sqrt(200), rel=0.01)
    assert total_variation(dist, classical_rw_distribution(200)) < 0.01
    assert gaussian_approximation(0).as_mapping() == {0: pytest.approx(1.0)}


def test_compare_with_prediction_flags():
    predicted = MomentReport.from_moments(10.0, 1000.0)
    close = compare_with_prediction(MomentReport.from_moments(11.0, 1050.0), predicted, 50.0)
    assert close.ok
    far = compare_with_prediction(MomentReport.from_moments(-10.0, 1500.0), predicted, 50.0)
    assert not far.second_moment_ok
    assert not far.mean_ok
    mirrored = compare_with_prediction(MomentReport.from_moments(-10.0, 1000.0), predicted, 50.0, magnitude_only=True)
    assert mirrored.ok
