import math

import numpy as np
import pytest

from analysis import total_variation
from coins import make_galton_coin, make_hadamard
from exceptions import InvalidCoinError, InvalidStateError, TopologyError
from models import CoinOperator, InitialCoinState, StepOrdering, WalkTopology
from tests.conftest import SQRT_HALF
from tests.dense_oracle import oracle_distribution
from walk import equivalent_initial_coin, evolve, evolve_history, initial_state, probabilities, step

ORDERINGS = [StepOrdering.COIN_AFTER_SHIFT, StepOrdering.SHIFT_AFTER_COIN]


def _line_walk(coin, init, n, ordering=StepOrdering.COIN_AFTER_SHIFT, origin=0):
    return probabilities(evolve(initial_state(WalkTopology.line(), origin, init), coin, ordering, n))


def _circle_walk(coin, init, n, M, ordering=StepOrdering.COIN_AFTER_SHIFT, origin=0):
    return probabilities(evolve(initial_state(WalkTopology.circle(M), origin, init), coin, ordering, n))


def test_hadamard_three_steps(upper_init):
    dist = _line_walk(make_hadamard(), upper_init, 3)
    expected = {-3: 0.0, -2: 0.0, -1: 0.25, 0: 0.0, 1: 0.5, 2: 0.0, 3: 0.25}
    assert list(dist.positions) == list(expected)
    for m, p in expected.items():
        assert dist.probability(m) == pytest.approx(p, abs=1e-15)


def test_hadamard_one_step_amplitudes(upper_init):
    state = step(initial_state(WalkTopology.line(), 0, upper_init), make_hadamard())
    r, l = state.amplitude(1)
    assert r == pytest.approx(SQRT_HALF)
    assert l == pytest.approx(SQRT_HALF)
    assert state.amplitude(-1) == (0j, 0j)
    assert state.amplitude(0) == (0j, 0j)


def test_zero_steps_returns_input(symmetric_init):
    state = initial_state(WalkTopology.line(), 4, symmetric_init)
    assert evolve(state, make_hadamard(), n=0) is state
    dist = probabilities(state)
    assert dist.as_mapping() == {4: pytest.approx(1.0)}


def test_marginals_add_up(symmetric_init):
    dist = _line_walk(make_hadamard(), symmetric_init, 25)
    assert np.allclose(dist.p, dist.p_c1 + dist.p_c2, atol=1e-12)


@pytest.mark.parametrize("ordering", ORDERINGS)
def test_norm_and_parity_over_long_runs(random_coins, symmetric_init, ordering):
    coins = [make_hadamard()] + random_coins(5)
    for coin in coins:
        state = initial_state(WalkTopology.line(), 0, symmetric_init)
        for current in evolve_history(state, coin, ordering, 1000):
            assert abs(current.norm() - 1.0) <= 1e-10
        dist = probabilities(current)
        assert np.all(dist.p[1::2] == 0.0)
        assert dist.p.sum() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("ordering", ORDERINGS)
@pytest.mark.parametrize("n", [0, 1, 2, 5, 8])
def test_matches_dense_oracle(random_coins, ordering, n):
    coins = [make_hadamard(), make_galton_coin(math.pi / 5)] + random_coins(3)
    init = InitialCoinState(0.6 + 0j, 0.8j)
    for coin in coins:
        dist = _line_walk(coin, init, n, ordering)
        oracle = oracle_distribution(coin.matrix, init.alpha, init.beta, n, ordering.value)
        for m, p in oracle.items():
            assert dist.probability(m) == pytest.approx(p, abs=1e-12)


def test_origin_shifts_the_distribution(upper_init):
    base = _line_walk(make_hadamard(), upper_init, 6)
    moved = _line_walk(make_hadamard(), upper_init, 6, origin=5)
    assert total_variation(base.shifted(5), moved) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("ordering", ORDERINGS)
def test_circle_matches_dense_oracle(ordering):
    init = InitialCoinState(SQRT_HALF + 0j, 1j * SQRT_HALF)
    coin = make_hadamard()
    dist = _circle_walk(coin, init, 17, M=3, ordering=ordering, origin=1)
    oracle = oracle_distribution(coin.matrix, init.alpha, init.beta, 17, ordering.value, M=3, origin=1)
    assert len(dist.positions) == 7
    for m, p in oracle.items():
        assert dist.probability(m) == pytest.approx(p, abs=1e-12)


def test_circle_equals_line_before_wrapping(real_equal_init):
    coin = make_hadamard()
    for n in (0, 1, 7, 30):
        line = _line_walk(coin, real_equal_init, n)
        circle = _circle_walk(coin, real_equal_init, n, M=30)
        assert len(circle.positions) == 61
        assert total_variation(line, circle) == pytest.approx(0.0, abs=1e-14)


def test_circle_wraps_after_long_runs(real_equal_init):
    dist = _circle_walk(make_hadamard(), real_equal_init, 100, M=30)
    assert dist.p.sum() == pytest.approx(1.0, abs=1e-10)
    mapping = dict(zip(dist.positions.tolist(), dist.p.tolist()))
    assert sum(mapping[m] for m in range(25, 31)) > 1e-6
    assert sum(mapping[m] for m in range(-30, -24)) > 1e-6


def test_circle_display_offset():
    state = initial_state(WalkTopology.circle(30), 0, InitialCoinState(1 + 0j, 0j))
    assert state.display_offset == 30
    assert (state.positions + state.display_offset).tolist() == list(range(61))


def test_orderings_agree_for_symmetric_start(symmetric_init):
    coin = make_hadamard()
    a = _line_walk(coin, symmetric_init, 200, StepOrdering.COIN_AFTER_SHIFT)
    b = _line_walk(coin, symmetric_init, 200, StepOrdering.SHIFT_AFTER_COIN)
    assert total_variation(a, b) <= 1e-10


def test_orderings_differ_for_upper_start(upper_init):
    coin = make_hadamard()
    a = _line_walk(coin, upper_init, 2, StepOrdering.COIN_AFTER_SHIFT)
    b = _line_walk(coin, upper_init, 2, StepOrdering.SHIFT_AFTER_COIN)
    assert a.as_mapping() == {0: pytest.approx(0.5), 2: pytest.approx(0.5)}
    assert b.as_mapping() == {-2: pytest.approx(0.25), 0: pytest.approx(0.5), 2: pytest.approx(0.25)}
    assert total_variation(a, b) == pytest.approx(0.25)


def test_upper_start_orderings_are_one_step_apart(upper_init):
    coin = make_hadamard()
    a = _line_walk(coin, upper_init, 200, StepOrdering.COIN_AFTER_SHIFT)
    b = _line_walk(coin, upper_init, 199, StepOrdering.SHIFT_AFTER_COIN)
    assert total_variation(a, b.shifted(1)) <= 1e-10


def test_equivalent_initial_coin_maps_orderings(random_coins, rng):
    for coin in random_coins(3):
        phase = rng.uniform(0, 2 * math.pi)
        init = InitialCoinState(complex(math.cos(0.4)), complex(math.sin(0.4)) * complex(math.cos(phase), math.sin(phase)))
        a = _line_walk(coin, init, 20, StepOrdering.COIN_AFTER_SHIFT)
        b = _line_walk(coin, equivalent_initial_coin(coin, init), 20, StepOrdering.SHIFT_AFTER_COIN)
        assert total_variation(a, b) <= 1e-12


def test_initial_state_rejects_bad_norm():
    with pytest.raises(InvalidStateError):
        initial_state(WalkTopology.line(), 0, InitialCoinState(1 + 0j, 1 + 0j))


def test_initial_state_rejects_small_circle():
    with pytest.raises(TopologyError):
        initial_state(WalkTopology.circle(0), 0, InitialCoinState(1 + 0j, 0j))


def test_initial_state_rejects_origin_outside_circle():
    with pytest.raises(InvalidStateError):
        initial_state(WalkTopology.circle(3), 4, InitialCoinState(1 + 0j, 0j))


def test_evolve_rejects_invalid_coin(upper_init):
    state = initial_state(WalkTopology.line(), 0, upper_init)
    with pytest.raises(InvalidCoinError):
        evolve(state, CoinOperator(1 + 0j, 1 + 0j, 0j, 1 + 0j), n=3)


def test_evolve_rejects_negative_steps(upper_init):
    state = initial_state(WalkTopology.line(), 0, upper_init)
    with pytest.raises(InvalidStateError):
        evolve(state, make_hadamard(), n=-1)
