"""
Run execution: one RunConfig in, one RunResult out, plus concurrent sweeps.
"""

import asyncio
import dataclasses
import logging
import math
from typing import Optional

from analysis import (
    classical_rw_distribution,
    galton_predicted_moments,
    moments,
    predicted_walk_moments,
    total_variation,
)
from app_config import config
from exceptions import ConfigurationError, OutputError, PredictionUndefinedError, QuantumWalkError
from models import (
    CoinGating,
    CoinKind,
    CoinSpec,
    MomentReport,
    ProbabilityDistribution,
    RunConfig,
    RunMode,
    RunResult,
    StepOrdering,
    SweepConfig,
    SweepParameter,
    SweepRun,
    WalkTopology,
)
from optics import initial_field, run_cavity, spectrum
from utils.csv_output import aggregate_frame, emit, frame_to_csv, write_distribution
from utils.run_config import build_coin, cavity_config_for, validate_run_config
from walk import evolve, initial_state, probabilities

logger = logging.getLogger(__name__)


def _topology(run: RunConfig) -> WalkTopology:
    return WalkTopology.circle(run.M) if run.topology == "circle" else WalkTopology.line()


def _walk_distribution(run: RunConfig, ordering: StepOrdering) -> ProbabilityDistribution:
    state = initial_state(_topology(run), run.origin, run.init)
    final = evolve(state, build_coin(run.coin), ordering, run.steps)
    return probabilities(final)


def _cavity_distribution(run: RunConfig) -> ProbabilityDistribution:
    cavity = cavity_config_for(run)
    field = initial_field(cavity, run.origin, run.init)
    return spectrum(run_cavity(field, cavity, run.steps), n=run.steps)


def _run_walk(run: RunConfig, notes: list[str]) -> tuple[ProbabilityDistribution, Optional[MomentReport]]:
    dist = _walk_distribution(run, run.ordering)
    if run.topology == "circle":
        notes.append("asymptotic moments apply to the line only")
        return dist, None
    try:
        predicted = predicted_walk_moments(build_coin(run.coin), run.init, run.steps, run.ordering)
    except PredictionUndefinedError as e:
        notes.append(e.message)
        predicted = None
    return dist, predicted


def _run_galton(run: RunConfig, notes: list[str]) -> tuple[ProbabilityDistribution, Optional[MomentReport], float]:
    dist = _cavity_distribution(run)
    walk_dist = _walk_distribution(run, StepOrdering.COIN_AFTER_SHIFT)
    notes.append(f"coin acts every roundtrip, {run.f} roundtrip(s) per walk step")
    predicted = None
    if run.topology == "circle":
        notes.append("asymptotic moments apply to the line only")
    else:
        try:
            predicted = galton_predicted_moments(run.coin.angle, run.init, run.steps)
        except PredictionUndefinedError as e:
            notes.append(e.message)
        if predicted is not None and math.sin(run.coin.angle) < 0:
            notes.append("sin δ < 0 puts the predicted ⟨x²⟩ above n², beyond the ballistic limit")
    return dist, predicted, total_variation(dist, walk_dist)


def _run_cavity(run: RunConfig, notes: list[str]) -> tuple[ProbabilityDistribution, Optional[MomentReport], float]:
    dist = _cavity_distribution(run)
    walk_dist = _walk_distribution(run, StepOrdering.COIN_AFTER_SHIFT)
    if run.ordering != StepOrdering.COIN_AFTER_SHIFT:
        notes.append("cavities shift before the coin; ORDERING is ignored")
    predicted = None
    if run.topology == "line" and run.gating == CoinGating.EVERY_F_ROUNDTRIPS:
        try:
            predicted = predicted_walk_moments(build_coin(run.coin), run.init, run.steps)
        except PredictionUndefinedError as e:
            notes.append(e.message)
    return dist, predicted, total_variation(dist, walk_dist)


def execute(run: RunConfig) -> RunResult:
    """
    Run one configuration.

    Raises:
        ConfigurationError: for any invalid configuration, including invariant
            violations detected while running
    """
    validate_run_config(run)
    logger.info(f"🚀 Running {run.mode.value}: n={run.steps}, coin={run.coin.kind.value}")
    logger.debug(f"⚙️ Run parameters: {run.to_dict()}")
    notes: list[str] = []
    predicted: Optional[MomentReport] = None
    tv_walk: Optional[float] = None
    try:
        if run.mode == RunMode.CLASSICAL:
            dist = classical_rw_distribution(run.steps)
            predicted = MomentReport.from_moments(0.0, float(run.steps))
        elif run.mode in (RunMode.LINE, RunMode.CIRCLE):
            dist, predicted = _run_walk(run, notes)
        elif run.mode == RunMode.GALTON:
            dist, predicted, tv_walk = _run_galton(run, notes)
        else:
            dist, predicted, tv_walk = _run_cavity(run, notes)

        tv_classical = None
        if run.compare_classical:
            tv_classical = total_variation(dist, classical_rw_distribution(run.steps))
    except (ConfigurationError, OutputError):
        raise
    except QuantumWalkError as e:
        raise ConfigurationError(run.mode.value, e.message)
    except (OverflowError, MemoryError) as e:
        raise ConfigurationError(run.mode.value, f"run too large: {e}")

    result = RunResult(run, dist, moments(dist), predicted, tv_classical, tv_walk, tuple(notes))
    logger.info(f"✅ {run.mode.value} done: std_dev={result.moments.std_dev:.6g}")
    return result


def sweep_run_config(template: RunConfig, parameter: SweepParameter, value: float, index: int, sweep: SweepConfig) -> RunConfig:
    """The template with one parameter replaced."""
    changes: dict = {}
    if parameter == SweepParameter.DELTA:
        changes["coin"] = CoinSpec(CoinKind.DELTA, angle=float(value))
    else:
        if not float(value).is_integer():
            raise ConfigurationError(parameter.value, f"expected an integer, got {value!r}")
        changes["steps" if parameter == SweepParameter.STEPS else "f"] = int(value)
    changes["output"] = sweep.output_dir / f"{parameter.value}_{index:03d}.csv" if sweep.output_dir else None
    return validate_run_config(dataclasses.replace(template, **changes))


def _sweep_point(sweep: SweepConfig, index: int, value: float) -> SweepRun:
    try:
        run = sweep_run_config(sweep.template, sweep.parameter, value, index, sweep)
        result = execute(run)
        if run.output is not None:
            write_distribution(result)
        return SweepRun(value, result)
    except QuantumWalkError as e:
        logger.warning(f"⚠️ Sweep point {sweep.parameter.value}={value!r} failed: {e.message}")
        return SweepRun(value, error=e.message)
    except Exception as e:
        logger.error(f"❌ Sweep point {sweep.parameter.value}={value!r} crashed: {e}", exc_info=True)
        return SweepRun(value, error=f"{type(e).__name__}: {e}")


async def _run_points(sweep: SweepConfig) -> list[SweepRun]:
    semaphore = asyncio.Semaphore(max(1, config.sweep_workers))

    async def one(index: int, value: float) -> SweepRun:
        async with semaphore:
            return await asyncio.to_thread(_sweep_point, sweep, index, value)

    return list(await asyncio.gather(*(one(i, v) for i, v in enumerate(sweep.values))))


def run_sweep(sweep: SweepConfig) -> list[SweepRun]:
    """
    Run every sweep point concurrently and write the aggregate CSV
    (parameter, mean, std_dev, predicted_std_dev), one row per successful
    point in input order. A failing point is logged and skipped.
    """
    logger.info(f"🔄 Sweep over {sweep.parameter.value}: {len(sweep.values)} point(s)")
    runs = asyncio.run(_run_points(sweep)) if sweep.values else []
    rows = [
        {
            "parameter": run.value,
            "mean": run.result.moments.mean,
            "std_dev": run.result.moments.std_dev,
            "predicted_std_dev": run.result.predicted.std_dev if run.result.predicted else None,
        }
        for run in runs
        if run.ok
    ]
    emit(frame_to_csv(aggregate_frame(rows)), sweep.aggregate)
    failed = sum(1 for run in runs if not run.ok)
    logger.info(f"✅ Sweep finished: {len(rows)} ok, {failed} failed")
    return runs
