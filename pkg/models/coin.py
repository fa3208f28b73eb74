"""
Coin operators and initial coin states.
"""
from dataclasses import dataclass, field

import numpy as np

from models.base import BaseModel


@dataclass(frozen=True)
class CoinOperator(BaseModel):
    """
    2×2 complex matrix acting on the coin (cebit) space, row-major:

        U = (a b)
            (c d)

    Construction does not validate; use coins.validate_coin() or the coin
    factories, which reject non-unitary parameters.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "CoinOperator":
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"coin matrix must be 2×2, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    @property
    def delta(self) -> complex:
        """Determinant Δ = ad − bc."""
        return self.a * self.d - self.b * self.c

    def adjoint(self) -> "CoinOperator":
        return CoinOperator(self.a.conjugate(), self.c.conjugate(), self.b.conjugate(), self.d.conjugate())

    def compose(self, other: "CoinOperator") -> "CoinOperator":
        """Matrix product self · other (other acts first)."""
        return CoinOperator.from_matrix(self.matrix @ other.matrix)

    def scaled(self, phase: complex) -> "CoinOperator":
        return CoinOperator(phase * self.a, phase * self.b, phase * self.c, phase * self.d)


@dataclass(frozen=True)
class InitialCoinState(BaseModel):
    """Coin amplitudes (α, β) at the start position."""

    alpha: complex
    beta: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    @property
    def norm(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class CoinValidation(BaseModel):
    """Result of validate_coin: overall verdict plus residual per constraint."""

    valid: bool
    residuals: dict[str, float] = field(default_factory=dict)
    failed: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid
