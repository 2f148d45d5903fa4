"""Deterministic world simulator: ground-truth objects, noisy detector, episodes.

Stands in for camera + detector + world. All randomness flows from one seeded
generator, so identical (seed, scenario, steps) give bitwise-identical traces.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .grid import Fixation, GridSpec, check_fixation, visible_blocks
from .ingest import Detection, detections_to_frame
from .scenario import ScenarioConfig
from .session import PlannerConfig, PlannerSession


@dataclass(frozen=True)
class SimObject:
    block: Fixation
    class_name: str = "person"
    move_prob: float = 0.0


@dataclass(frozen=True)
class DetectorSim:
    """Generative detector: per-tile hit/false-alarm draws with confidences."""

    p_hit: float = 1.0
    p_fa: float = 0.0
    confidence_hit: tuple[float, float] = (0.85, 0.99)
    confidence_fa: tuple[float, float] = (0.3, 0.6)
    fa_class: str = "person"

    def __post_init__(self):
        for name, (lo, hi) in (("confidence_hit", self.confidence_hit), ("confidence_fa", self.confidence_fa)):
            if not (0.0 <= lo <= hi <= 1.0):
                raise ValueError(f"{name} interval [{lo}, {hi}] must be ordered within [0, 1]")


@dataclass(frozen=True)
class WorldState:
    """Objects on the grid plus the seeded generator; t counts sim steps."""

    objects: tuple[SimObject, ...]
    rng: np.random.Generator
    t: int = 0

    @classmethod
    def from_seed(cls, objects, seed: int) -> "WorldState":
        return cls(objects=tuple(objects), rng=np.random.default_rng(seed), t=0)


def _tile_bbox(w: int, h: int, grid: GridSpec) -> tuple[float, float, float, float]:
    return (w / grid.w, h / grid.h, 1.0 / grid.w, 1.0 / grid.h)


def step(
    world: WorldState, action: Fixation, det: DetectorSim, grid: GridSpec
) -> tuple[WorldState, list[Detection]]:
    """Jump the camera to `action`, emit detections, then move objects.

    Occupied in-grid tiles fire with probability p_hit, empty ones with p_fa;
    confidences are uniform draws from the respective interval. Objects then
    hop to a uniformly random in-grid 4-neighbour with their move_prob.
    """
    check_fixation(grid, action)
    rng = world.rng
    occupied = {obj.block: obj for obj in world.objects}
    detections: list[Detection] = []
    for cell in visible_blocks(grid, action):
        if cell.block is None:
            continue
        obj = occupied.get(cell.block)
        if obj is not None:
            if rng.random() < det.p_hit:
                lo, hi = det.confidence_hit
                detections.append(
                    Detection(
                        bbox=_tile_bbox(cell.w, cell.h, grid),
                        confidence=float(rng.uniform(lo, hi)),
                        class_name=obj.class_name,
                    )
                )
        elif det.p_fa > 0.0 and rng.random() < det.p_fa:
            lo, hi = det.confidence_fa
            detections.append(
                Detection(
                    bbox=_tile_bbox(cell.w, cell.h, grid),
                    confidence=float(rng.uniform(lo, hi)),
                    class_name=det.fa_class,
                )
            )
    moved = []
    for obj in world.objects:
        if obj.move_prob > 0.0 and rng.random() < obj.move_prob:
            k, l = obj.block.k, obj.block.l
            options = [
                Fixation(nk, nl)
                for nk, nl in ((k - 1, l), (k + 1, l), (k, l - 1), (k, l + 1))
                if grid.contains(nk, nl)
            ]
            obj = replace(obj, block=options[int(rng.integers(len(options)))])
        moved.append(obj)
    return WorldState(objects=tuple(moved), rng=rng, t=world.t + 1), detections


def detector_from_scenario(sc: ScenarioConfig) -> DetectorSim:
    classes = sorted(sc.target_classes())
    fa_class = classes[0] if classes else "person"
    if sc.detector is None:
        return DetectorSim(p_hit=sc.sensor.p_hit, p_fa=sc.sensor.p_fa, fa_class=fa_class)
    return DetectorSim(
        p_hit=sc.detector.p_hit,
        p_fa=sc.detector.p_fa,
        confidence_hit=sc.detector.confidence_hit,
        confidence_fa=sc.detector.confidence_fa,
        fa_class=fa_class,
    )


@dataclass
class EpisodeTrace:
    """Header + one record per step, serialisable as NDJSON."""

    header: dict
    records: list[dict]
    summary: dict

    def to_ndjson(self) -> str:
        lines = [json.dumps(self.header, separators=(",", ":"))]
        lines += [json.dumps(r, separators=(",", ":")) for r in self.records]
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_ndjson())


def _percentiles(samples: list[int]) -> dict:
    if not samples:
        return {"min": 0, "p50": 0, "p99": 0, "max": 0}
    arr = np.asarray(samples)
    return {
        "min": int(arr.min()),
        "p50": float(np.percentile(arr, 50)),
        "p99": float(np.percentile(arr, 99)),
        "max": int(arr.max()),
    }


def run_episode(
    scenario: ScenarioConfig,
    steps: int,
    timing: bool = True,
    snapshots: bool = True,
) -> EpisodeTrace:
    """Closed planner<->simulator loop for `steps` rounds.

    Per round: the world emits detections at the current fixation, the planner
    updates and picks the next fixation, the camera jumps there. latency_us
    covers ingest + update + plan; pass timing=False to zero it for bitwise
    trace comparisons.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    grid = scenario.grid_spec()
    cfg = PlannerConfig.from_scenario(scenario)
    session = PlannerSession(cfg)
    det = detector_from_scenario(scenario)
    world = WorldState.from_seed(
        (SimObject(Fixation(*o.block), o.class_name, o.move_prob) for o in scenario.objects),
        scenario.seed,
    )
    fixation = cfg.start

    records: list[dict] = []
    latencies: list[int] = []
    tracking_errors: list[int] = []
    coverage_steps = None
    steps_to_detect = None

    for i in range(steps):
        world, dets = step(world, fixation, det, grid)
        t0 = time.perf_counter_ns() if timing else 0
        frame = detections_to_frame(dets, fixation, i, cfg.ingest, grid)
        action = session.handle_frame(frame)
        latency_us = (time.perf_counter_ns() - t0) // 1000 if timing else 0

        coverage = session.belief.coverage()
        entropy = session.entropy_total()
        if coverage_steps is None and coverage >= 1.0:
            coverage_steps = i + 1
        if steps_to_detect is None and float(session.belief.q.max()) >= 0.9:
            steps_to_detect = i + 1
        if world.objects:
            tracking_errors.append(min(action.chebyshev(o.block) for o in world.objects))

        record = {
            "t": i,
            "action": [action.k, action.l],
            "evidence_nonzero": int((frame.evidence[frame.visible] > 0).sum()),
            "entropy_total": round(entropy, 9),
            "coverage": round(coverage, 9),
            "latency_us": int(latency_us),
            "fixation": [fixation.k, fixation.l],
        }
        if snapshots:
            record["belief"] = [[round(float(v), 6) for v in row] for row in session.belief.q]
        records.append(record)
        latencies.append(int(latency_us))
        fixation = action

    header = {
        "type": "header",
        "version": 1,
        "grid": {"k": grid.k, "l": grid.l, "w": grid.w, "h": grid.h},
        "steps": steps,
        "seed": scenario.seed,
        "scenario_digest": scenario.digest(),
    }
    summary = {
        "steps": steps,
        "coverage_steps": coverage_steps,
        "steps_to_detect": steps_to_detect,
        "final_coverage": round(session.belief.coverage(), 9),
        "final_entropy": round(session.entropy_total(), 9),
        "mean_tracking_error": (
            round(float(np.mean(tracking_errors)), 6) if tracking_errors else None
        ),
        "latency_us": _percentiles(latencies if timing else []),
    }
    return EpisodeTrace(header=header, records=records, summary=summary)
