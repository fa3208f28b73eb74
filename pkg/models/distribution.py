"""
Probability distributions over walk positions and their moment summaries.
"""
from dataclasses import dataclass
import math

import numpy as np

from app_config import config
from exceptions import InvalidStateError
from models.base import BaseModel, frozen_array


@dataclass(frozen=True)
class ProbabilityDistribution(BaseModel):
    """
    P_m = P^R_m + P^L_m over a set of integer grid positions.

    `resolution` is the number of grid units per walk step: 1 for walk-core
    output, f (or 2f) for cavity spectra resolved below one walk step.
    Positions are unique and ascending.
    """

    positions: np.ndarray
    p_c1: np.ndarray
    p_c2: np.ndarray
    n: int
    resolution: int = 1

    def __post_init__(self):
        object.__setattr__(self, "positions", frozen_array(self.positions, np.int64))
        object.__setattr__(self, "p_c1", frozen_array(self.p_c1, np.float64))
        object.__setattr__(self, "p_c2", frozen_array(self.p_c2, np.float64))
        if not (self.positions.shape == self.p_c1.shape == self.p_c2.shape):
            raise InvalidStateError("positions and probability columns differ in length")
        if self.positions.size and np.any(np.diff(self.positions) <= 0):
            raise InvalidStateError("positions must be unique and ascending")
        if np.any(self.p_c1 < 0) or np.any(self.p_c2 < 0):
            raise InvalidStateError("probabilities must be non-negative")
        if self.resolution < 1:
            raise InvalidStateError(f"resolution must be ≥ 1, got {self.resolution}")
        total = float(np.sum(self.p))
        if abs(total - 1.0) > config.norm_tolerance:
            raise InvalidStateError(f"distribution sums to {total!r}, expected 1")

    @property
    def p(self) -> np.ndarray:
        return self.p_c1 + self.p_c2

    @property
    def walk_positions(self) -> np.ndarray:
        """Positions in walk-step units."""
        return self.positions / self.resolution

    def probability(self, m: int) -> float:
        hits = np.nonzero(self.positions == m)[0]
        return float(self.p[hits[0]]) if hits.size else 0.0

    def marginal(self, component: int) -> dict[int, float]:
        """Single-port readout: the intensity of one cebit component per position."""
        if component not in (1, 2):
            raise ValueError(f"component must be 1 or 2, got {component}")
        values = self.p_c1 if component == 1 else self.p_c2
        return {int(m): float(v) for m, v in zip(self.positions, values) if v != 0}

    def as_mapping(self) -> dict[int, float]:
        """Populated positions with their total probability."""
        return {int(m): float(v) for m, v in zip(self.positions, self.p) if v != 0}

    def regrid(self, factor: int) -> "ProbabilityDistribution":
        """Same distribution on a grid `factor` times finer."""
        if factor < 1:
            raise ValueError(f"regrid factor must be ≥ 1, got {factor}")
        return ProbabilityDistribution(
            self.positions * factor, self.p_c1, self.p_c2, self.n, self.resolution * factor
        )

    def shifted(self, offset: int) -> "ProbabilityDistribution":
        """Relabel every position m as m + offset (grid units)."""
        return ProbabilityDistribution(self.positions + offset, self.p_c1, self.p_c2, self.n, self.resolution)


@dataclass(frozen=True)
class MomentReport(BaseModel):
    mean: float
    second_moment: float
    variance: float
    std_dev: float

    @classmethod
    def from_moments(cls, mean: float, second_moment: float) -> "MomentReport":
        variance = second_moment - mean * mean
        return cls(mean, second_moment, variance, math.sqrt(max(variance, 0.0)))


@dataclass(frozen=True)
class ConvergenceReport(BaseModel):
    """Measured vs predicted moments with pass flags."""

    measured: MomentReport
    predicted: MomentReport
    second_moment_relative_error: float
    mean_error_on_scale: float
    second_moment_ok: bool
    mean_ok: bool

    @property
    def ok(self) -> bool:
        return self.second_moment_ok and self.mean_ok
