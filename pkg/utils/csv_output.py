"""
CSV and summary output for run results.

Distributions are written as `m,P,P_R,P_L` with LF line endings and full
double precision. Files are written to a temporary sibling and moved into
place so a reader never sees a partial file.
"""

import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, TextIO

import pandas as pd

from app_config import config
from exceptions import OutputError
from models import ProbabilityDistribution, RunResult

logger = logging.getLogger(__name__)

DISTRIBUTION_COLUMNS = ["m", "P", "P_R", "P_L"]
AGGREGATE_COLUMNS = ["parameter", "mean", "std_dev", "predicted_std_dev"]


def distribution_frame(dist: ProbabilityDistribution, offset: int = 0) -> pd.DataFrame:
    """One row per position, m ascending; `offset` relabels m (e.g. 0..2M on a circle)."""
    return pd.DataFrame(
        {
            "m": dist.positions + offset,
            "P": dist.p,
            "P_R": dist.p_c1,
            "P_L": dist.p_c2,
        },
        columns=DISTRIBUTION_COLUMNS,
    )


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=config.float_format, lineterminator="\n")


def write_text_atomic(path: Path, text: str) -> None:
    """Write `text` to `path` through a temporary file in the same directory."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as e:
        raise OutputError(str(path), str(e))
    logger.debug(f"💾 Wrote {path}")


def emit(text: str, path: Optional[Path], stream: Optional[TextIO] = None) -> None:
    """Write to `path` atomically, or to `stream` (standard output) when no path is given."""
    if path is None:
        try:
            (stream or sys.stdout).write(text)
        except OSError as e:
            raise OutputError("<stdout>", str(e))
        return
    write_text_atomic(path, text)


def _number(value: float) -> str:
    return config.float_format % value


def display_offset(result: RunResult) -> int:
    """Grid offset that maps a circle's −M..M onto 0..2M (scaled to the result's grid)."""
    run = result.config
    if not run.display_offset or run.topology != "circle":
        return 0
    return run.M * result.distribution.resolution


def format_summary(result: RunResult) -> str:
    """Human-readable `key = value` block for one run."""
    dist = result.distribution
    lines = [
        f"mode = {result.config.mode.value}",
        f"n = {dist.n}",
        f"resolution = {dist.resolution}",
        f"mean = {_number(result.moments.mean)}",
        f"second_moment = {_number(result.moments.second_moment)}",
        f"variance = {_number(result.moments.variance)}",
        f"std_dev = {_number(result.moments.std_dev)}",
    ]
    if result.predicted is not None:
        lines += [
            f"predicted_mean = {_number(result.predicted.mean)}",
            f"predicted_second_moment = {_number(result.predicted.second_moment)}",
            f"predicted_std_dev = {_number(result.predicted.std_dev)}",
        ]
    if result.tv_classical is not None:
        lines.append(f"tv_classical = {_number(result.tv_classical)}")
    if result.tv_walk is not None:
        lines.append(f"tv_walk = {_number(result.tv_walk)}")
    lines += [f"note = {note}" for note in result.notes]
    return "\n".join(lines) + "\n"


def write_distribution(result: RunResult) -> None:
    """Write only the CSV of one run, to its output path or standard output."""
    frame = distribution_frame(result.distribution, display_offset(result))
    emit(frame_to_csv(frame), result.config.output)


def write_result(result: RunResult, summary_stream: Optional[TextIO] = None) -> None:
    """
    Emit the CSV of one run and its summary block.

    The summary goes to standard output, or to standard error when the CSV
    itself is written to standard output.
    """
    output = result.config.output
    write_distribution(result)
    stream = summary_stream or (sys.stdout if output is not None else sys.stderr)
    stream.write(format_summary(result))


def aggregate_frame(rows: list[dict[str, float]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=AGGREGATE_COLUMNS)
