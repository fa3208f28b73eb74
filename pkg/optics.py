"""
Element-level simulation of the optical cavities that realise the walk.

The field inside a cavity is a frequency comb: grid index k carries a cebit
(c1, c2). Each roundtrip sends the field through the cavity's elements in
order. Electro-optic modulators shift the frequency of each cebit component,
while wave plates, beamsplitters and the Galton EOM mix the two components.
All elements are lossless.

Jones conventions (fast axis at θ from x):

    R(θ)     = [[cos θ, sin θ], [−sin θ, cos θ]]
    HWP(θ)   = R(−θ)·diag(1, −1)·R(θ)
    QWP(θ)   = R(−θ)·diag(1,  i)·R(θ)          (QWP(θ)² = HWP(θ) exactly)
    EOM(θ,φ) = R(−θ)·diag(e^{−iφ/2}, e^{iφ/2})·R(θ)
"""

import abc
import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from typeguard import typechecked

from app_config import config
from coins import make_galton_coin, make_hadamard, raw_beamsplitter
from exceptions import CavityConfigurationError, InvalidStateError, TopologyError
from models import (
    CavityConfig,
    CavityDesign,
    CoinOperator,
    Direction,
    FieldState,
    InitialCoinState,
    ProbabilityDistribution,
    WalkState,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Jones matrices
# ---------------------------------------------------------------------------

def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


def _rotated(theta: float, diagonal: np.ndarray) -> CoinOperator:
    return CoinOperator.from_matrix(_rotation(-theta) @ np.diag(diagonal) @ _rotation(theta))


@typechecked
def hwp_matrix(theta: float) -> CoinOperator:
    """Ideal half-wave plate: [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]."""
    c, s = math.cos(2.0 * theta), math.sin(2.0 * theta)
    return CoinOperator(complex(c), complex(s), complex(s), complex(-c))


@typechecked
def qwp_matrix(theta: float) -> CoinOperator:
    """Ideal quarter-wave plate; diag(1, i) when aligned with the axes."""
    return _rotated(theta, np.array([1.0, 1j]))


@typechecked
def eom_retarder_matrix(theta: float, retardance: float) -> CoinOperator:
    """
    EOM driven at constant voltage: a symmetric retarder with its axes at θ.

    At θ = π/4 this equals U_δ with δ = retardance/2.
    """
    half = retardance / 2.0
    return _rotated(theta, np.array([np.exp(-1j * half), np.exp(1j * half)]))


def hybrid_channels() -> dict[str, CoinOperator]:
    """
    Jones matrices of the QWP1 (π/4) / BS / QWP2 (−π/4) set of the
    bidirectional ring.

    Transmitted light crosses both plates (QWP1 then QWP2 clockwise, the
    reverse counterclockwise). Reflected light crosses the same plate twice.
    """
    qwp1 = qwp_matrix(math.pi / 4)
    qwp2 = qwp_matrix(-math.pi / 4)
    return {
        "transmitted_cw": qwp2.compose(qwp1),
        "transmitted_ccw": qwp1.compose(qwp2),
        "reflected_cw": qwp1.compose(qwp1),
        "reflected_ccw": qwp2.compose(qwp2),
    }


# ---------------------------------------------------------------------------
# Field construction and readout
# ---------------------------------------------------------------------------

def _ring_bounds(M: int, subdivisions: int) -> tuple[int, int]:
    """Inclusive grid range of a ring of 2M+1 walk sites; walk site m sits at m·s."""
    return -M * subdivisions, M * subdivisions + subdivisions - 1


def _embed(state: FieldState, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Copy the field onto the window lo..hi (inclusive); raises if support leaks out."""
    size = hi - lo + 1
    c1 = np.zeros(size, dtype=np.complex128)
    c2 = np.zeros(size, dtype=np.complex128)
    for k, (a, b) in state.populated().items():
        if not lo <= k <= hi:
            raise TopologyError(f"field populated at grid index {k}, outside the ring {lo}..{hi}")
        c1[k - lo] = a
        c2[k - lo] = b
    return c1, c2


def _replace(state: FieldState, start: int, c1: np.ndarray, c2: np.ndarray, roundtrips: int = 0) -> FieldState:
    return FieldState(
        start, c1, c2, state.cebit_kind, state.subdivisions, state.roundtrip_count + roundtrips
    )


@typechecked
def initial_field(cavity: CavityConfig, origin: int, coin: InitialCoinState) -> FieldState:
    """Single-frequency injection at walk site `origin` with cebit amplitudes (α, β)."""
    if abs(coin.norm - 1.0) > config.coin_tolerance:
        raise InvalidStateError(f"|α|²+|β|² = {coin.norm!r}, expected 1")
    topology = cavity.topology
    if topology.is_circle:
        if topology.M < 1:
            raise TopologyError(f"a circle needs M ≥ 1, got M={topology.M}")
        if not -topology.M <= origin <= topology.M:
            raise InvalidStateError(f"origin {origin} outside the circle range {-topology.M}..{topology.M}")
    s = cavity.subdivisions
    return FieldState(
        origin * s,
        np.array([coin.alpha]),
        np.array([coin.beta]),
        cavity.design.cebit_kind,
        s,
    )


def field_from_walk_state(state: WalkState, cavity: CavityConfig) -> FieldState:
    """Load a walk state into a cavity: R → c1, L → c2, site m at grid index m·s."""
    s = cavity.subdivisions
    populated = state.populated()
    if not populated:
        raise InvalidStateError("walk state has no populated site")
    lo, hi = min(populated), max(populated)
    c1 = np.zeros((hi - lo) * s + 1, dtype=np.complex128)
    c2 = np.zeros_like(c1)
    for m, (r, l) in populated.items():
        c1[(m - lo) * s] = r
        c2[(m - lo) * s] = l
    return FieldState(lo * s, c1, c2, cavity.design.cebit_kind, s)


def spectrum(state: FieldState, n: Optional[int] = None) -> ProbabilityDistribution:
    """
    Intensity per frequency: P_k = |c1|² + |c2|², on the state's grid.

    `n` labels the distribution with a walk step count (defaults to the
    number of roundtrips).
    """
    return ProbabilityDistribution(
        state.positions,
        np.abs(state.c1) ** 2,
        np.abs(state.c2) ** 2,
        state.roundtrip_count if n is None else n,
        state.subdivisions,
    )


def port_spectrum(state: FieldState, component: int) -> dict[int, float]:
    """Spectrum seen through an output port that only passes one cebit component."""
    return spectrum(state).marginal(component)


# ---------------------------------------------------------------------------
# Element actions
# ---------------------------------------------------------------------------

def apply_eom(state: FieldState, shift_c1: int, shift_c2: int) -> FieldState:
    """Move c1 by shift_c1 and c2 by shift_c2 grid units. Pure relabelling."""
    low = min(shift_c1, shift_c2)
    size = state.c1.size + abs(shift_c1 - shift_c2)
    c1 = np.zeros(size, dtype=np.complex128)
    c2 = np.zeros(size, dtype=np.complex128)
    c1[shift_c1 - low: shift_c1 - low + state.c1.size] = state.c1
    c2[shift_c2 - low: shift_c2 - low + state.c2.size] = state.c2
    return _replace(state, state.start + low, c1, c2)


def _eombar_branch(values: np.ndarray, direction: Direction) -> np.ndarray:
    out = np.zeros_like(values)
    if direction == Direction.INCREASE:
        # M1 picks off the top frequency for EOMa (down to the bottom); EOMb shifts the rest up
        out[1:] = values[:-1]
        out[0] = values[-1]
    else:
        # mirrors swapped: the bottom frequency goes up to the top, the rest shift down
        out[:-1] = values[1:]
        out[-1] = values[0]
    return out


def apply_eombar(
    state: FieldState,
    M: int,
    direction: Direction,
    components: tuple[int, ...] = (1, 2),
) -> FieldState:
    """
    EOM-bar: frequency shift by one grid unit with wrap-around on the ring
    −M·s .. M·s+s−1 (−M..M for s = 1). Both optical paths have equal length, so
    no phase is added.

    Raises:
        TopologyError: if M < 1 or the field is populated outside the ring
    """
    if M < 1:
        raise TopologyError(f"an EOM-bar needs M ≥ 1, got M={M}")
    lo, hi = _ring_bounds(M, state.subdivisions)
    c1, c2 = _embed(state, lo, hi)
    if 1 in components:
        c1 = _eombar_branch(c1, direction)
    if 2 in components:
        c2 = _eombar_branch(c2, direction)
    return _replace(state, lo, c1, c2)


def apply_coin_element(state: FieldState, coin: CoinOperator) -> FieldState:
    """Mix the two cebit components at every frequency."""
    return _replace(
        state,
        state.start,
        coin.a * state.c1 + coin.b * state.c2,
        coin.c * state.c1 + coin.d * state.c2,
    )


class OpticalElement(abc.ABC):
    """An intracavity element acting on the whole field."""

    @abc.abstractmethod
    def apply(self, state: FieldState) -> FieldState:
        ...


@dataclass(frozen=True)
class Eom(OpticalElement):
    shift_c1: int = 1
    shift_c2: int = -1

    def apply(self, state: FieldState) -> FieldState:
        return apply_eom(state, self.shift_c1, self.shift_c2)


@dataclass(frozen=True)
class EomBar(OpticalElement):
    M: int
    c1: Optional[Direction] = Direction.INCREASE
    c2: Optional[Direction] = Direction.DECREASE

    def apply(self, state: FieldState) -> FieldState:
        if self.c1 is not None:
            state = apply_eombar(state, self.M, self.c1, (1,))
        if self.c2 is not None:
            state = apply_eombar(state, self.M, self.c2, (2,))
        return state


@dataclass(frozen=True)
class CoinElement(OpticalElement):
    """Any element whose action is a fixed 2×2 matrix on the cebit."""

    @property
    @abc.abstractmethod
    def coin(self) -> CoinOperator:
        ...

    def apply(self, state: FieldState) -> FieldState:
        return apply_coin_element(state, self.coin)


@dataclass(frozen=True)
class HalfWavePlate(CoinElement):
    theta: float = math.pi / 8

    @property
    def coin(self) -> CoinOperator:
        return hwp_matrix(self.theta)


@dataclass(frozen=True)
class QuarterWavePlate(CoinElement):
    theta: float = math.pi / 8

    @property
    def coin(self) -> CoinOperator:
        return qwp_matrix(self.theta)


@dataclass(frozen=True)
class GaltonEom(CoinElement):
    """Second EOM with axes at π/4 replacing the wave plate; applies U_δ per pass."""

    delta: float = math.pi / 5

    @property
    def coin(self) -> CoinOperator:
        return eom_retarder_matrix(math.pi / 4, 2.0 * self.delta)


@dataclass(frozen=True)
class BeamSplitter(CoinElement):
    """
    Beamsplitter on a path cebit. The compensated splitter includes the phase
    filters that turn it into an exact Hadamard; `delta` gives the variable
    splitter U_δ instead.
    """

    compensated: bool = True
    delta: Optional[float] = None

    @property
    def coin(self) -> CoinOperator:
        if self.delta is not None:
            return make_galton_coin(self.delta)
        return make_hadamard() if self.compensated else raw_beamsplitter()


@dataclass(frozen=True)
class HybridCoupler(CoinElement):
    """
    QWP1 / BS / QWP2 set of the bidirectional ring acting on the hybrid cebit
    (clockwise x, counterclockwise y). Transmission keeps direction and
    polarization, reflection reverses direction and swaps x ↔ y.
    """

    splitter: CoinOperator = field(default_factory=make_hadamard)
    phase_filters: bool = True

    @property
    def coin(self) -> CoinOperator:
        if self.phase_filters:
            return self.splitter
        return CoinOperator.from_matrix(self.splitter.matrix * _hybrid_phases())


@functools.lru_cache(maxsize=1)
def _hybrid_phases() -> np.ndarray:
    """Phases the unfiltered hybrid coupler adds to each splitter entry."""
    jones = {name: op.matrix for name, op in hybrid_channels().items()}
    # amplitude landing in the cebit polarization of the outgoing direction
    t_cw = jones["transmitted_cw"][0, 0]
    t_ccw = jones["transmitted_ccw"][1, 1]
    r_cw = jones["reflected_cw"][1, 0]
    r_ccw = jones["reflected_ccw"][0, 1]
    leaks = (
        jones["transmitted_cw"][1, 0],
        jones["transmitted_ccw"][0, 1],
        jones["reflected_cw"][0, 0],
        jones["reflected_ccw"][1, 1],
    )
    if max(abs(x) for x in leaks) > config.element_tolerance:
        raise CavityConfigurationError("wave plates leak light out of the cebit polarizations")
    phases = np.array([[t_cw, r_ccw], [r_cw, t_ccw]])
    phases.setflags(write=False)
    return phases


# ---------------------------------------------------------------------------
# Cavities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CavityPipeline:
    """Elements of one roundtrip: frequency shifters, then the gated coin elements."""

    shifters: tuple[OpticalElement, ...]
    coin_elements: tuple[CoinElement, ...]


def _shifters(cavity: CavityConfig) -> tuple[OpticalElement, ...]:
    design = cavity.design
    topology = cavity.topology
    if design == CavityDesign.DUAL_RING_PATH:
        if topology.is_circle:
            return (
                EomBar(topology.M, Direction.INCREASE, None),
                EomBar(topology.M, None, Direction.DECREASE),
            )
        return Eom(1, 0), Eom(0, -1)

    single = EomBar(topology.M) if topology.is_circle else Eom(1, -1)
    return (single,) * design.passes


def _coin_elements(cavity: CavityConfig) -> tuple[CoinElement, ...]:
    design = cavity.design
    delta = cavity.coin_element_delta
    if design == CavityDesign.RING_POLARIZATION:
        return (GaltonEom(delta) if delta is not None else HalfWavePlate(math.pi / 8),)
    if design == CavityDesign.LINEAR_POLARIZATION:
        # double pass: each pass applies half of the roundtrip coin
        element = GaltonEom(delta / 2.0) if delta is not None else QuarterWavePlate(math.pi / 8)
        return element, element
    if design == CavityDesign.DUAL_RING_PATH:
        return (BeamSplitter(compensated=True, delta=delta),)
    splitter = make_galton_coin(delta) if delta is not None else make_hadamard()
    return (HybridCoupler(splitter),)


def validate_cavity(cavity: CavityConfig) -> CavityConfig:
    if cavity.f < 1:
        raise CavityConfigurationError(f"f must be ≥ 1, got {cavity.f}")
    if cavity.topology.is_circle and cavity.topology.M < 1:
        raise CavityConfigurationError(f"circle cavities need M ≥ 1, got M={cavity.topology.M}")
    if cavity.coin_element_delta is not None and not math.isfinite(cavity.coin_element_delta):
        raise CavityConfigurationError("coin_element_delta must be finite")
    return cavity


def cavity_pipeline(cavity: CavityConfig) -> CavityPipeline:
    """
    Per-roundtrip elements of a design. Circle topologies swap every EOM for
    an EOM-bar. The EOM acts before the coin set, matching shift-then-coin.
    """
    validate_cavity(cavity)
    return CavityPipeline(_shifters(cavity), _coin_elements(cavity))


def _check_compatible(state: FieldState, cavity: CavityConfig) -> None:
    if state.cebit_kind != cavity.design.cebit_kind:
        raise CavityConfigurationError(
            f"{cavity.design.value} needs {cavity.design.cebit_kind.value} cebits, "
            f"got {state.cebit_kind.value}"
        )
    if state.subdivisions != cavity.subdivisions:
        raise CavityConfigurationError(
            f"field grid has {state.subdivisions} units per step, cavity expects {cavity.subdivisions}"
        )


def roundtrip(state: FieldState, cavity: CavityConfig, pipeline: Optional[CavityPipeline] = None) -> FieldState:
    """
    One cavity roundtrip: every frequency shifter, then the coin elements if the
    schedule lets them act on this roundtrip.
    """
    _check_compatible(state, cavity)
    pipeline = pipeline or cavity_pipeline(cavity)
    before = state.intensity()
    coin_active = cavity.coin_acts_after(state.roundtrip_count)

    out = state
    for element in pipeline.shifters:
        out = element.apply(out)
    if coin_active:
        for element in pipeline.coin_elements:
            out = element.apply(out)

    drift = abs(out.intensity() - before)
    if drift > config.element_tolerance:
        logger.warning(f"⚠️ Roundtrip {state.roundtrip_count} changed the intensity by {drift:.3e}")
    return _replace(out, out.start, out.c1, out.c2, roundtrips=1)


@typechecked
def run_cavity(initial: FieldState, cavity: CavityConfig, steps: int) -> FieldState:
    """Run steps·f roundtrips; with every-f gating the spectrum reproduces the walk."""
    if steps < 0:
        raise InvalidStateError(f"number of steps must be ≥ 0, got {steps}")
    _check_compatible(initial, cavity)
    pipeline = cavity_pipeline(cavity)
    state = initial
    for _ in range(steps * cavity.f):
        state = roundtrip(state, cavity, pipeline)
    logger.debug(
        f"🔦 {cavity.design.value} cavity: {steps} steps, f={cavity.f}, "
        f"gating={cavity.coin_gating.value}, intensity={state.intensity():.15f}"
    )
    return state
