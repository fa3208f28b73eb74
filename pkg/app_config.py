import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, str(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class AppConfig:
    """
    Central configuration for the simulator.

    Every tunable comes from an environment variable (a `.env` file is loaded
    on import) and can be overridden per instance through keyword arguments.
    """

    # Cavity designs and coin schedules understood by the CLI
    DESIGNS = [
        "ring-polarization",
        "linear-polarization",
        "dual-ring-path",
        "bidirectional-hybrid",
    ]
    GATINGS = ["every-f", "every-roundtrip"]
    ORDERINGS = ["coin-after-shift", "shift-after-coin"]

    def __init__(
        self,
        coin_tolerance: Optional[float] = None,
        norm_tolerance: Optional[float] = None,
        element_tolerance: Optional[float] = None,
        konno_relative_tolerance: Optional[float] = None,
        spread_tolerance: Optional[float] = None,
        min_konno_a: Optional[float] = None,
        sweep_workers: Optional[int] = None,
        max_steps: Optional[int] = None,
        max_index: Optional[int] = None,
        max_roundtrips_per_step: Optional[int] = None,
        max_grid_size: Optional[int] = None,
        csv_digits: Optional[int] = None,
        log_level: Optional[str] = None,
    ):
        """
        Initialize AppConfig with optional overrides.

        Args:
            coin_tolerance: Tolerance for the coin unitarity constraints
            norm_tolerance: Tolerance for state and distribution normalisation
            element_tolerance: Tolerance for per-element norm preservation
            konno_relative_tolerance: Relative tolerance for asymptotic moment checks
            spread_tolerance: Relative tolerance for std_dev/n checks
            min_konno_a: Smallest |a| for which the drift formula is evaluated
            sweep_workers: Number of concurrent sweep runs
            max_steps: Largest accepted number of walk steps
            max_index: Largest accepted |origin| and circle half-size M
            max_roundtrips_per_step: Largest accepted f
            max_grid_size: Largest amplitude grid (sites × subdivisions) a run may allocate
            csv_digits: Significant digits written to CSV files
            log_level: Root logging level used by the CLI
        """
        self.coin_tolerance = coin_tolerance if coin_tolerance is not None else _env_float("QW_COIN_TOLERANCE", 1e-12)
        self.norm_tolerance = norm_tolerance if norm_tolerance is not None else _env_float("QW_NORM_TOLERANCE", 1e-10)
        self.element_tolerance = (
            element_tolerance if element_tolerance is not None else _env_float("QW_ELEMENT_TOLERANCE", 1e-12)
        )
        self.konno_relative_tolerance = (
            konno_relative_tolerance
            if konno_relative_tolerance is not None
            else _env_float("QW_KONNO_RELATIVE_TOLERANCE", 0.10)
        )
        self.spread_tolerance = spread_tolerance if spread_tolerance is not None else _env_float("QW_SPREAD_TOLERANCE", 0.05)
        self.min_konno_a = min_konno_a if min_konno_a is not None else _env_float("QW_MIN_KONNO_A", 1e-9)
        self.sweep_workers = sweep_workers if sweep_workers is not None else _env_int("QW_SWEEP_WORKERS", 4)
        self.max_steps = max_steps if max_steps is not None else _env_int("QW_MAX_STEPS", 100_000)
        self.max_index = max_index if max_index is not None else _env_int("QW_MAX_INDEX", 1_000_000_000)
        self.max_roundtrips_per_step = (
            max_roundtrips_per_step if max_roundtrips_per_step is not None else _env_int("QW_MAX_F", 1_000)
        )
        self.max_grid_size = max_grid_size if max_grid_size is not None else _env_int("QW_MAX_GRID_SIZE", 20_000_000)
        self.csv_digits = csv_digits if csv_digits is not None else _env_int("QW_CSV_DIGITS", 17)
        self.log_level = (log_level or os.getenv("QW_LOG_LEVEL", "INFO")).upper()

    @property
    def float_format(self) -> str:
        """printf-style format used for every float written to CSV."""
        return f"%.{self.csv_digits}g"


config = AppConfig()
