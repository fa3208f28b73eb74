from .base import BaseModel
from .coin import CoinOperator, InitialCoinState, CoinValidation
from .walk import TopologyKind, StepOrdering, WalkTopology, WalkState
from .distribution import ProbabilityDistribution, MomentReport, ConvergenceReport
from .field import CebitKind, FieldState
from .cavity import CavityDesign, CoinGating, Direction, CavityConfig
from .run import RunMode, CoinKind, SweepParameter, CoinSpec, RunConfig, RunResult, SweepConfig, SweepRun
