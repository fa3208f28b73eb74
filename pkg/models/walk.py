"""
Walk topology, step ordering and the walk state snapshot.
"""
from dataclasses import dataclass
import enum

import numpy as np

from models.base import BaseModel


class TopologyKind(str, enum.Enum):
    """Enumeration of walk topologies."""
    LINE = "line"
    CIRCLE = "circle"


class StepOrdering(str, enum.Enum):
    """Order of shift and coin inside one step."""
    COIN_AFTER_SHIFT = "coin-after-shift"  # ĤV̂, the default
    SHIFT_AFTER_COIN = "shift-after-coin"  # V̂Ĥ


@dataclass(frozen=True)
class WalkTopology(BaseModel):
    kind: TopologyKind = TopologyKind.LINE
    M: int = 0  # circle half-size; 2M+1 sites

    @classmethod
    def line(cls) -> "WalkTopology":
        return cls(TopologyKind.LINE, 0)

    @classmethod
    def circle(cls, M: int) -> "WalkTopology":
        return cls(TopologyKind.CIRCLE, M)

    @property
    def is_circle(self) -> bool:
        return self.kind == TopologyKind.CIRCLE


@dataclass(frozen=True)
class WalkState(BaseModel):
    """
    Immutable snapshot of the walk after n steps.

    Line states only store the parity lattice origin−n, origin−n+2, ..., origin+n
    (n+1 sites); sites of the wrong parity are structurally zero. Circle states
    store all 2M+1 sites −M..M.
    """

    n: int
    topology: WalkTopology
    origin: int
    r: np.ndarray
    l: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        if self.topology.is_circle:
            return np.arange(-self.topology.M, self.topology.M + 1)
        return self.origin - self.n + 2 * np.arange(self.n + 1)

    @property
    def display_offset(self) -> int:
        """Shift mapping circle indices −M..M onto 0..2M (0 for the line)."""
        return self.topology.M if self.topology.is_circle else 0

    def amplitude(self, m: int) -> tuple[complex, complex]:
        """(R_m, L_m); zero for positions that are not stored."""
        positions = self.positions
        hits = np.nonzero(positions == m)[0]
        if hits.size == 0:
            return 0j, 0j
        index = int(hits[0])
        return complex(self.r[index]), complex(self.l[index])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.r) ** 2) + np.sum(np.abs(self.l) ** 2))

    def populated(self) -> dict[int, tuple[complex, complex]]:
        """Map of positions with a nonzero amplitude."""
        return {
            int(m): (complex(r), complex(l))
            for m, r, l in zip(self.positions, self.r, self.l)
            if r != 0 or l != 0
        }
