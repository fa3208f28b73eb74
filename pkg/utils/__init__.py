from .csv_output import write_result
from .run_config import build_run_config, load_manifest
from .runner import execute, run_sweep
