"""Planning-latency benchmark: timed update+plan steps with one warm-up."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import Fixation, GridSpec
from .inference import update_beliefs
from .model import BeliefState, ObservationFrame, Preferences, SensorModel, empty_frame
from .planner import SelectionPolicy, select_action


def parse_grid_arg(text: str) -> GridSpec:
    """Parse "16x16/5x5" into a GridSpec."""
    try:
        dims, fov = text.strip().split("/")
        k, l = (int(v) for v in dims.lower().split("x"))
        w, h = (int(v) for v in fov.lower().split("x"))
        return GridSpec(k, l, w, h)
    except (ValueError, AttributeError) as exc:
        raise ConfigError(f"bad grid spec {text!r}, expected KxL/WxH like 16x16/5x5: {exc}")


def parse_grids_arg(text: str) -> list[GridSpec]:
    return [parse_grid_arg(part) for part in text.split(",") if part.strip()]


@dataclass(frozen=True)
class BenchReport:
    grid: GridSpec
    reps: int
    samples_us: np.ndarray  # per-rep combined update+plan wall time

    @property
    def min_us(self) -> float:
        return float(self.samples_us.min())

    @property
    def median_us(self) -> float:
        return float(np.percentile(self.samples_us, 50))

    @property
    def p99_us(self) -> float:
        return float(np.percentile(self.samples_us, 99))

    @property
    def max_us(self) -> float:
        return float(self.samples_us.max())

    @property
    def param_counts(self) -> dict:
        """Sizes of the model's tables (beliefs, preferences, sensor)."""
        beliefs = self.grid.k * self.grid.l
        prefs = self.grid.w * self.grid.h
        sensor = 2
        return {
            "beliefs": beliefs,
            "preferences": prefs,
            "sensor": sensor,
            "total": beliefs + prefs + sensor,
        }


def _representative_state(grid: GridSpec, sensor: SensorModel, seed: int):
    """A mid-episode belief and frame so the timed path is the typical one."""
    rng = np.random.default_rng(seed)
    fixation = Fixation(grid.k // 2, grid.l // 2)
    belief = BeliefState(
        q=rng.uniform(0.05, 0.95, size=(grid.k, grid.l)),
        fixation=fixation,
        observed_mask=rng.random((grid.k, grid.l)) < 0.5,
    )
    empty = empty_frame(grid, fixation, t=0)
    evidence = np.where(
        rng.random((grid.w, grid.h)) < 0.3, rng.uniform(0.3, 1.0, (grid.w, grid.h)), 0.0
    )
    frame = ObservationFrame(
        t=0, fixation=fixation, evidence=evidence, visible=empty.visible
    )
    return belief, frame


def run_bench(grid: GridSpec, reps: int, seed: int = 0, warmup: int = 1) -> BenchReport:
    """Time `reps` combined update_beliefs + select_action steps.

    The warm-up iterations run the identical path but are not recorded.
    """
    if reps < 100:
        raise ConfigError(f"reps must be >= 100, got {reps}")
    sensor = SensorModel(p_hit=0.9, p_fa=0.02)
    prefs = Preferences.make("explore", grid)
    selection = SelectionPolicy(kind="argmin")
    belief, frame = _representative_state(grid, sensor, seed)

    samples = np.empty(reps)
    for i in range(warmup + reps):
        t0 = time.perf_counter_ns()
        posterior = update_beliefs(belief, frame, sensor, grid)
        select_action(posterior, sensor, prefs, grid, selection)
        elapsed_us = (time.perf_counter_ns() - t0) / 1000.0
        if i >= warmup:
            samples[i - warmup] = elapsed_us
    return BenchReport(grid=grid, reps=reps, samples_us=samples)


def format_report(report: BenchReport) -> str:
    g = report.grid
    p = report.param_counts
    return (
        f"{g.k}x{g.l}/{g.w}x{g.h}: reps={report.reps} "
        f"min={report.min_us:.1f}us median={report.median_us:.1f}us "
        f"p99={report.p99_us:.1f}us max={report.max_us:.1f}us\n"
        f"  model tables: beliefs={p['beliefs']} preferences={p['preferences']} "
        f"sensor={p['sensor']} total={p['total']} parameters"
    )
