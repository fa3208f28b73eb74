"""
Frequency-indexed two-component light field inside a cavity.
"""
from dataclasses import dataclass
import enum

import numpy as np

from models.base import BaseModel, frozen_array


class CebitKind(str, enum.Enum):
    """Which physical degree of freedom carries the coin."""
    POLARIZATION = "polarization"  # c1 = x, c2 = y
    PATH = "path"  # c1 = ring 1, c2 = ring 2
    HYBRID = "hybrid"  # c1 = clockwise x, c2 = counterclockwise y


@dataclass(frozen=True)
class FieldState(BaseModel):
    """
    Dense field spectrum on the window of grid indices start .. start+len−1.

    One grid unit is 1/subdivisions of a walk step (one walk step is ω̄).
    """

    start: int
    c1: np.ndarray
    c2: np.ndarray
    cebit_kind: CebitKind
    subdivisions: int = 1
    roundtrip_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c1", frozen_array(self.c1, np.complex128))
        object.__setattr__(self, "c2", frozen_array(self.c2, np.complex128))
        if self.c1.shape != self.c2.shape or self.c1.ndim != 1:
            raise ValueError("field components must be 1-D arrays of equal length")

    @property
    def positions(self) -> np.ndarray:
        return self.start + np.arange(self.c1.size)

    @property
    def stop(self) -> int:
        """One past the highest grid index in the window."""
        return self.start + self.c1.size

    def intensity(self) -> float:
        return float(np.sum(np.abs(self.c1) ** 2) + np.sum(np.abs(self.c2) ** 2))

    def amplitude(self, k: int) -> tuple[complex, complex]:
        if self.start <= k < self.stop:
            return complex(self.c1[k - self.start]), complex(self.c2[k - self.start])
        return 0j, 0j

    def populated(self) -> dict[int, tuple[complex, complex]]:
        return {
            int(k): (complex(a), complex(b))
            for k, a, b in zip(self.positions, self.c1, self.c2)
            if a != 0 or b != 0
        }
