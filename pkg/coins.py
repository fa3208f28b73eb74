"""
Coin operators for the two-state walk.

Available coins
---------------
- make_hadamard(): (1/√2)[[1, 1], [1, −1]]
- make_konno_coin(a, b, Δ): the general unitary with c = −Δb*, d = Δa*
- make_galton_coin(δ): U_δ = [[cos δ, −i sin δ], [−i sin δ, cos δ]]
- raw_beamsplitter(): lossless 50/50 splitter, i on reflection
- random_konno_coin(rng): random member of the Konno family
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np
from typeguard import typechecked

from app_config import config
from exceptions import InvalidCoinError
from models import CoinOperator, CoinValidation

logger = logging.getLogger(__name__)

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def make_hadamard() -> CoinOperator:
    """Return the Hadamard coin."""
    return CoinOperator(_SQRT_HALF + 0j, _SQRT_HALF + 0j, _SQRT_HALF + 0j, -_SQRT_HALF + 0j)


@typechecked
def make_konno_coin(a: complex, b: complex, delta: complex) -> CoinOperator:
    """
    Build U = (a b; c d) with c = −Δb*, d = Δa*.

    Raises:
        InvalidCoinError: if |a|²+|b|² ≠ 1 or |Δ| ≠ 1 beyond the coin tolerance,
            or if any parameter is not finite.
    """
    a, b, delta = complex(a), complex(b), complex(delta)
    if not all(cmath.isfinite(z) for z in (a, b, delta)):
        raise InvalidCoinError("parameters must be finite")
    row_error = abs(abs(a) ** 2 + abs(b) ** 2 - 1.0)
    unit_error = abs(abs(delta) - 1.0)
    failures = {}
    if row_error > config.coin_tolerance:
        failures["row_norm"] = row_error
    if unit_error > config.coin_tolerance:
        failures["unit_determinant"] = unit_error
    if failures:
        raise InvalidCoinError("|a|²+|b|² and |Δ| must both equal 1", failures)

    coin = CoinOperator(a, b, -delta * b.conjugate(), delta * a.conjugate())
    logger.debug(f"🪙 Konno coin a={a}, b={b}, Δ={delta}")
    return coin


@typechecked
def make_galton_coin(delta: float) -> CoinOperator:
    """Return U_δ, unitary for every finite δ."""
    if not math.isfinite(delta):
        raise InvalidCoinError(f"δ must be finite, got {delta}")
    c = math.cos(delta)
    s = math.sin(delta)
    return CoinOperator(complex(c), -1j * s, -1j * s, complex(c))


def raw_beamsplitter() -> CoinOperator:
    """Lossless 50/50 beamsplitter without phase compensation (i on reflection)."""
    return CoinOperator(_SQRT_HALF + 0j, 1j * _SQRT_HALF, 1j * _SQRT_HALF, _SQRT_HALF + 0j)


def validate_coin(coin: CoinOperator, tolerance: Optional[float] = None) -> CoinValidation:
    """
    Check the four unitarity constraint lines of the general coin.

    The diagnostics carry the residual of every constraint; `failed` names the
    ones above tolerance.
    """
    tol = config.coin_tolerance if tolerance is None else tolerance
    a, b, c, d = coin.a, coin.b, coin.c, coin.d
    det = coin.delta
    residuals = {
        "row1_norm": abs(abs(a) ** 2 + abs(b) ** 2 - 1.0),
        "row2_norm": abs(abs(c) ** 2 + abs(d) ** 2 - 1.0),
        "row_orthogonality": abs(a * c.conjugate() + b * d.conjugate()),
        "unit_determinant": abs(abs(det) - 1.0),
        "c_relation": abs(c + det * b.conjugate()),
        "d_relation": abs(d - det * a.conjugate()),
    }
    finite = all(cmath.isfinite(z) for z in (a, b, c, d))
    failed = tuple(name for name, value in residuals.items() if not (value <= tol))
    if not finite:
        failed = ("finite",) + failed
    return CoinValidation(valid=finite and not failed, residuals=residuals, failed=failed)


def require_valid_coin(coin: CoinOperator) -> CoinOperator:
    """Return `coin` unchanged or raise InvalidCoinError with the failing residuals."""
    report = validate_coin(coin)
    if not report.valid:
        raise InvalidCoinError(
            f"constraints violated: {', '.join(report.failed)}",
            {name: report.residuals.get(name, math.inf) for name in report.failed},
        )
    return coin


def random_konno_coin(rng: np.random.Generator, max_abs_b: float = 0.9) -> CoinOperator:
    """
    Draw a coin from the Konno family.

    |b| is uniform in [0, max_abs_b], the phases of a, b and Δ are uniform, and
    |a| follows from the unit-row constraint. Keeping |b| < 1 bounds |a| away
    from the |a| → 0 singularity of the drift formula.
    """
    abs_b = float(rng.uniform(0.0, max_abs_b))
    abs_a = math.sqrt(1.0 - abs_b**2)
    phase_a, phase_b, phase_delta = rng.uniform(0.0, 2.0 * math.pi, size=3)
    return make_konno_coin(
        abs_a * cmath.exp(1j * phase_a),
        abs_b * cmath.exp(1j * phase_b),
        cmath.exp(1j * phase_delta),
    )
