"""
Run configuration and run results used by the CLI.
"""
from dataclasses import dataclass, field
import enum
from pathlib import Path
from typing import Optional

from models.base import BaseModel
from models.cavity import CavityDesign, CoinGating
from models.coin import InitialCoinState
from models.distribution import MomentReport, ProbabilityDistribution
from models.walk import StepOrdering


class RunMode(str, enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    GALTON = "galton"
    CAVITY = "cavity"
    CLASSICAL = "classical"


class CoinKind(str, enum.Enum):
    HADAMARD = "hadamard"
    KONNO = "konno"
    DELTA = "delta"


class SweepParameter(str, enum.Enum):
    DELTA = "delta"
    STEPS = "steps"
    F = "f"


@dataclass(frozen=True)
class CoinSpec(BaseModel):
    """hadamard | konno (a, b, Δ) | delta (δ)."""

    kind: CoinKind = CoinKind.HADAMARD
    a: complex = 0j
    b: complex = 0j
    unit: complex = 1 + 0j  # Δ
    angle: float = 0.0  # δ


@dataclass(frozen=True)
class RunConfig(BaseModel):
    mode: RunMode = RunMode.LINE
    steps: int = 0
    coin: CoinSpec = CoinSpec()
    init: InitialCoinState = InitialCoinState(1 + 0j, 0j)
    origin: int = 0
    M: int = 0
    topology: str = "line"  # cavity mode only: line | circle
    design: CavityDesign = CavityDesign.RING_POLARIZATION
    f: int = 1
    gating: CoinGating = CoinGating.EVERY_F_ROUNDTRIPS
    ordering: StepOrdering = StepOrdering.COIN_AFTER_SHIFT
    output: Optional[Path] = None  # None → standard output
    compare_classical: bool = False
    display_offset: bool = False


@dataclass(frozen=True)
class RunResult(BaseModel):
    config: RunConfig
    distribution: ProbabilityDistribution
    moments: MomentReport
    predicted: Optional[MomentReport] = None
    tv_classical: Optional[float] = None
    tv_walk: Optional[float] = None
    notes: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SweepConfig(BaseModel):
    template: RunConfig
    parameter: SweepParameter
    values: tuple[float, ...] = ()
    output_dir: Optional[Path] = None
    aggregate: Optional[Path] = None  # None → standard output


@dataclass(frozen=True)
class SweepRun(BaseModel):
    """Outcome of one sweep point: a result, or the error that stopped it."""

    value: float
    result: Optional[RunResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None
