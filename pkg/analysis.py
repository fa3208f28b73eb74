"""
Statistics and theory comparisons for walk distributions.

Includes the classical random-walk baseline, moments, the asymptotic moment
predictions for the general coin and for U_δ, and the total-variation
distance used by every equivalence check.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.stats import binom
from typeguard import typechecked

from app_config import config
from coins import require_valid_coin
from exceptions import InvalidStateError, PredictionUndefinedError
from models import (
    CoinOperator,
    ConvergenceReport,
    InitialCoinState,
    MomentReport,
    ProbabilityDistribution,
    StepOrdering,
)
from walk import equivalent_initial_coin

logger = logging.getLogger(__name__)


@typechecked
def classical_rw_distribution(n: int) -> ProbabilityDistribution:
    """
    Fair-coin random walk after n steps: P_m = C(n, (n+m)/2) / 2ⁿ for
    m ≡ n (mod 2). Both coin marginals are P/2.
    """
    if n < 0:
        raise InvalidStateError(f"number of steps must be ≥ 0, got {n}")
    positions = np.arange(-n, n + 1)
    p = np.zeros(positions.size)
    k = np.arange(n + 1)
    p[::2] = binom.pmf(k, n, 0.5)
    return ProbabilityDistribution(positions, p / 2.0, p / 2.0, n)


@typechecked
def gaussian_approximation(n: int) -> ProbabilityDistribution:
    """
    Large-n Gaussian envelope of the classical walk (standard deviation √n),
    placed on the populated parity sites and normalised.
    """
    if n < 0:
        raise InvalidStateError(f"number of steps must be ≥ 0, got {n}")
    positions = np.arange(-n, n + 1)
    p = np.zeros(positions.size)
    if n == 0:
        p[0] = 1.0
    else:
        lattice = positions[::2].astype(np.float64)
        weights = np.exp(-(lattice**2) / (2.0 * n))
        p[::2] = weights / weights.sum()
    return ProbabilityDistribution(positions, p / 2.0, p / 2.0, n)


def moments(dist: ProbabilityDistribution) -> MomentReport:
    """⟨x⟩ and ⟨x²⟩ in walk-step units."""
    x = dist.walk_positions
    p = dist.p
    mean = float(np.sum(x * p))
    second = float(np.sum(x * x * p))
    return MomentReport.from_moments(mean, second)


def _check_a(coin: CoinOperator) -> None:
    if abs(coin.a) <= config.min_konno_a:
        raise PredictionUndefinedError("drift", f"|a| = {abs(coin.a):.3e} (swap-like coin)")


@typechecked
def konno_predicted_moments(coin: CoinOperator, init: InitialCoinState, n: int) -> MomentReport:
    """
    Asymptotic moments for a general coin, evaluated exactly as usually quoted:

        ⟨x⟩  = [|β|² − |α|² + 2 Re(a b* α β*) / |a|²] (1 − |b|) n
        ⟨x²⟩ = (1 − |b|) n²

    Against shift-after-coin walk.step this is not a mirror image of the
    measured drift: the population term |β|² − |α|² has the opposite sign,
    while the interference term 2 Re(a b* α β*) / |a|² keeps its sign. |⟨x⟩|
    therefore matches the simulation only when Re(a b* α β*) = 0 (for example
    the Hadamard coin from (1, 0)). predicted_walk_moments gives the mapping
    that holds for every coin.
    """
    require_valid_coin(coin)
    _check_a(coin)
    a, b = coin.a, coin.b
    alpha, beta = init.alpha, init.beta
    spread = 1.0 - abs(b)
    bracket = abs(beta) ** 2 - abs(alpha) ** 2 + 2.0 * (a * b.conjugate() * alpha * beta.conjugate()).real / abs(a) ** 2
    return MomentReport.from_moments(bracket * spread * n, spread * n * n)


@typechecked
def predicted_walk_moments(
    coin: CoinOperator,
    init: InitialCoinState,
    n: int,
    ordering: StepOrdering = StepOrdering.COIN_AFTER_SHIFT,
) -> MomentReport:
    """
    Asymptotic moments mapped onto walk.step, where R steps right.

    Shift-after-coin from (α, β):
        ⟨x⟩ = [|α|² − |β|² + 2 Re(a b* α β*) / |a|²] (1 − |b|) n
    Coin-after-shift from (α, β) has the distribution of shift-after-coin
    from U†(α, β). ⟨x²⟩ = (1 − |b|) n² in both cases.
    """
    require_valid_coin(coin)
    _check_a(coin)
    if ordering == StepOrdering.COIN_AFTER_SHIFT:
        init = equivalent_initial_coin(coin, init)
    a, b = coin.a, coin.b
    alpha, beta = init.alpha, init.beta
    spread = 1.0 - abs(b)
    bracket = abs(alpha) ** 2 - abs(beta) ** 2 + 2.0 * (a * b.conjugate() * alpha * beta.conjugate()).real / abs(a) ** 2
    return MomentReport.from_moments(bracket * spread * n, spread * n * n)


@typechecked
def galton_predicted_moments(delta: float, init: InitialCoinState, n: int) -> MomentReport:
    """
    Moments for the coin U_δ, evaluated literally:

        ⟨x⟩  = [|β|² − |α|² + 2 Im(α β*) tan δ] (1 − sin δ) n
        ⟨x²⟩ = (1 − sin δ) n²

    For a real, equal-amplitude start ⟨x⟩ = 0 and σ = √(1 − sin δ)·n.
    """
    if not math.isfinite(delta):
        raise PredictionUndefinedError("Galton", f"δ = {delta} is not finite")
    sin_d = math.sin(delta)
    if sin_d >= 1.0 - 1e-12:
        raise PredictionUndefinedError("Galton", "sin δ = 1 leaves no spread (δ = π/2)")
    if abs(math.cos(delta)) < 1e-12:
        raise PredictionUndefinedError("Galton", "tan δ diverges")
    alpha, beta = init.alpha, init.beta
    spread = 1.0 - sin_d
    bracket = abs(beta) ** 2 - abs(alpha) ** 2 + 2.0 * (alpha * beta.conjugate()).imag * math.tan(delta)
    return MomentReport.from_moments(bracket * spread * n, spread * n * n)


def _on_grid(dist: ProbabilityDistribution, resolution: int) -> ProbabilityDistribution:
    return dist if dist.resolution == resolution else dist.regrid(resolution // dist.resolution)


def total_variation(dist_a: ProbabilityDistribution, dist_b: ProbabilityDistribution) -> float:
    """
    ½ Σ_m |P_a(m) − P_b(m)| over the union support. Distributions on different
    grids are first refined to a common grid.
    """
    resolution = math.lcm(dist_a.resolution, dist_b.resolution)
    a = _on_grid(dist_a, resolution)
    b = _on_grid(dist_b, resolution)
    support = np.union1d(a.positions, b.positions)
    pa = np.zeros(support.size)
    pb = np.zeros(support.size)
    pa[np.searchsorted(support, a.positions)] = a.p
    pb[np.searchsorted(support, b.positions)] = b.p
    distance = 0.5 * float(np.sum(np.abs(pa - pb)))
    return min(max(distance, 0.0), 1.0)


def compare_with_prediction(
    measured: MomentReport,
    predicted: MomentReport,
    scale: float,
    magnitude_only: bool = False,
    relative_tolerance: Optional[float] = None,
) -> ConvergenceReport:
    """
    Check simulated moments against an asymptotic prediction.

    ⟨x²⟩ is compared relatively; ⟨x⟩ is compared on `scale` (normally
    (1 − |b|) n). `magnitude_only` compares |⟨x⟩|. It validates the literal
    drift formula only for starts with Re(a b* α β*) = 0, where the two
    conventions differ by an overall sign.
    """
    tol = config.konno_relative_tolerance if relative_tolerance is None else relative_tolerance
    if predicted.second_moment != 0:
        second_error = abs(measured.second_moment - predicted.second_moment) / abs(predicted.second_moment)
    else:
        second_error = 0.0 if measured.second_moment == 0 else math.inf

    mean_measured, mean_predicted = measured.mean, predicted.mean
    if magnitude_only:
        mean_measured, mean_predicted = abs(mean_measured), abs(mean_predicted)
    mean_gap = abs(mean_measured - mean_predicted)
    if scale > 0:
        mean_error = mean_gap / scale
    else:
        mean_error = 0.0 if mean_gap == 0 else math.inf

    report = ConvergenceReport(
        measured=measured,
        predicted=predicted,
        second_moment_relative_error=second_error,
        mean_error_on_scale=mean_error,
        second_moment_ok=second_error <= tol,
        mean_ok=mean_error <= tol,
    )
    if not report.ok:
        logger.debug(f"📊 Prediction mismatch: ⟨x²⟩ err={second_error:.3%}, ⟨x⟩ err={mean_error:.3%}")
    return report
