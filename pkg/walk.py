"""
Exact evolution of the coined walk on the line and on the circle.

One step with the default ordering (shift, then coin) reads

    R_{m,n} = a·R_{m−1,n−1} + b·L_{m+1,n−1}
    L_{m,n} = c·R_{m−1,n−1} + d·L_{m+1,n−1}

which is the Hadamard recursion for U = Ĥ. On the circle m+1 at +M wraps to −M
and m−1 at −M wraps to +M.
"""

import cmath
import logging
from typing import Iterator

import numpy as np
from typeguard import typechecked

from app_config import config
from coins import require_valid_coin
from exceptions import InvalidStateError, TopologyError
from models import (
    CoinOperator,
    InitialCoinState,
    ProbabilityDistribution,
    StepOrdering,
    WalkState,
    WalkTopology,
)
from models.base import frozen_array

logger = logging.getLogger(__name__)


def _snapshot(n: int, topology: WalkTopology, origin: int, r: np.ndarray, l: np.ndarray) -> WalkState:
    return WalkState(n, topology, origin, frozen_array(r, np.complex128), frozen_array(l, np.complex128))


def _check_topology(topology: WalkTopology) -> None:
    if topology.is_circle and topology.M < 1:
        raise TopologyError(f"a circle needs M ≥ 1, got M={topology.M}")


@typechecked
def initial_state(topology: WalkTopology, origin: int, coin: InitialCoinState) -> WalkState:
    """
    Walker localised at `origin` with coin amplitudes (α, β), n = 0.

    Raises:
        TopologyError: for a circle with M < 1
        InvalidStateError: if |α|²+|β|² ≠ 1 or the origin lies outside −M..M
    """
    _check_topology(topology)
    if not (cmath.isfinite(coin.alpha) and cmath.isfinite(coin.beta)):
        raise InvalidStateError("coin amplitudes must be finite")
    if abs(coin.norm - 1.0) > config.coin_tolerance:
        raise InvalidStateError(f"|α|²+|β|² = {coin.norm!r}, expected 1")

    if topology.is_circle:
        M = topology.M
        if not -M <= origin <= M:
            raise InvalidStateError(f"origin {origin} outside the circle range {-M}..{M}")
        r = np.zeros(2 * M + 1, dtype=np.complex128)
        l = np.zeros(2 * M + 1, dtype=np.complex128)
        r[origin + M] = coin.alpha
        l[origin + M] = coin.beta
        return _snapshot(0, topology, origin, r, l)

    return _snapshot(0, topology, origin, np.array([coin.alpha]), np.array([coin.beta]))


def _apply_coin(coin: CoinOperator, r: np.ndarray, l: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return coin.a * r + coin.b * l, coin.c * r + coin.d * l


def _shift(state_is_circle: bool, r: np.ndarray, l: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if state_is_circle:
        return np.roll(r, 1), np.roll(l, -1)
    # parity lattice grows by one site: R moves up, L moves down
    zero = np.zeros(1, dtype=np.complex128)
    return np.concatenate([zero, r]), np.concatenate([l, zero])


def step(state: WalkState, coin: CoinOperator, ordering: StepOrdering = StepOrdering.COIN_AFTER_SHIFT) -> WalkState:
    """Advance the walk by one step. The coin is assumed valid (see evolve)."""
    circle = state.topology.is_circle
    if ordering == StepOrdering.COIN_AFTER_SHIFT:
        r, l = _shift(circle, state.r, state.l)
        r, l = _apply_coin(coin, r, l)
    else:
        r, l = _apply_coin(coin, state.r, state.l)
        r, l = _shift(circle, r, l)
    return _snapshot(state.n + 1, state.topology, state.origin, r, l)


@typechecked
def evolve_history(
    state: WalkState,
    coin: CoinOperator,
    ordering: StepOrdering = StepOrdering.COIN_AFTER_SHIFT,
    n: int = 0,
) -> Iterator[WalkState]:
    """Yield the state after each of the next n steps."""
    if n < 0:
        raise InvalidStateError(f"number of steps must be ≥ 0, got {n}")
    require_valid_coin(coin)
    current = state
    for _ in range(n):
        current = step(current, coin, ordering)
        yield current


@typechecked
def evolve(
    state: WalkState,
    coin: CoinOperator,
    ordering: StepOrdering = StepOrdering.COIN_AFTER_SHIFT,
    n: int = 0,
) -> WalkState:
    """Apply `step` n times; n = 0 returns the input state."""
    current = state
    for current in evolve_history(state, coin, ordering, n):
        pass
    logger.debug(
        f"🔄 Evolved {state.topology.kind.value} walk by {n} steps "
        f"({ordering.value}), norm={current.norm():.15f}"
    )
    return current


def probabilities(state: WalkState) -> ProbabilityDistribution:
    """
    P_m = |R_m|² + |L_m|² with the R/L marginals.

    Line output covers every integer from origin−n to origin+n, so the
    structurally empty parity sites appear as explicit zeros.
    """
    p_r = np.abs(state.r) ** 2
    p_l = np.abs(state.l) ** 2
    if state.topology.is_circle:
        return ProbabilityDistribution(state.positions, p_r, p_l, state.n)

    size = 2 * state.n + 1
    dense_r = np.zeros(size)
    dense_l = np.zeros(size)
    dense_r[::2] = p_r
    dense_l[::2] = p_l
    positions = state.origin - state.n + np.arange(size)
    return ProbabilityDistribution(positions, dense_r, dense_l, state.n)


def equivalent_initial_coin(coin: CoinOperator, init: InitialCoinState) -> InitialCoinState:
    """
    Coin state whose shift-after-coin walk has the same distribution as the
    coin-after-shift walk started from `init`.

    (UV)ⁿ = U (VU)ⁿ U†, and the trailing U does not change P_m, so the answer
    is U†·(α, β).
    """
    alpha, beta = coin.adjoint().matrix @ init.vector
    return InitialCoinState(complex(alpha), complex(beta))
