"""
Cavity designs, coin schedules and the cavity configuration.
"""
from dataclasses import dataclass
import enum
from typing import Optional

from models.base import BaseModel
from models.field import CebitKind
from models.walk import WalkTopology


class CavityDesign(str, enum.Enum):
    """Cavity layouts."""
    RING_POLARIZATION = "ring-polarization"  # ring cavity, EOM + HWP
    LINEAR_POLARIZATION = "linear-polarization"  # Fabry-Perot, EOM + QWP, double pass
    DUAL_RING_PATH = "dual-ring-path"  # two coupled rings, EOM1/EOM2 + BS
    BIDIRECTIONAL_HYBRID = "bidirectional-hybrid"  # bidirectional ring, EOM + QWP1/BS/QWP2

    @property
    def cebit_kind(self) -> CebitKind:
        if self in (CavityDesign.RING_POLARIZATION, CavityDesign.LINEAR_POLARIZATION):
            return CebitKind.POLARIZATION
        if self == CavityDesign.DUAL_RING_PATH:
            return CebitKind.PATH
        return CebitKind.HYBRID

    @property
    def passes(self) -> int:
        """Passes through each intracavity element per roundtrip."""
        return 2 if self == CavityDesign.LINEAR_POLARIZATION else 1


class CoinGating(str, enum.Enum):
    """When the coin element acts."""
    EVERY_F_ROUNDTRIPS = "every-f"  # true quantum walk
    EVERY_ROUNDTRIP = "every-roundtrip"  # optical Galton board


class Direction(str, enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"


@dataclass(frozen=True)
class CavityConfig(BaseModel):
    """
    A cavity design with its roundtrip schedule.

    f roundtrips make one walk step; the coin element acts once every f
    roundtrips (EVERY_F_ROUNDTRIPS) or on every roundtrip (EVERY_ROUNDTRIP).
    `coin_element_delta` swaps the Hadamard element for the EOM producing U_δ.
    """

    design: CavityDesign = CavityDesign.RING_POLARIZATION
    topology: WalkTopology = WalkTopology()
    f: int = 1
    coin_gating: CoinGating = CoinGating.EVERY_F_ROUNDTRIPS
    coin_element_delta: Optional[float] = None

    @property
    def subdivisions(self) -> int:
        """Grid units per walk step: each pass of the EOM shifts by one unit."""
        return self.f * self.design.passes

    def coin_acts_after(self, roundtrip_index: int) -> bool:
        """Whether the coin element is active on the roundtrip with this 0-based index."""
        if self.coin_gating == CoinGating.EVERY_ROUNDTRIP:
            return True
        return (roundtrip_index + 1) % self.f == 0
