"""Stateful planner session: frames in, fixation commands out.

The same session drives the in-process simulator loop, the stdio/TCP wire
servers and the HTTP service, which is what makes serve and replay produce
identical action streams.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import Fixation, GridSpec
from .inference import update_beliefs
from .ingest import Detection, IngestConfig, detections_to_frame
from .maths import bernoulli_entropy
from .model import BeliefState, ObservationFrame, Preferences, SensorModel, advance_prior, init_belief
from .planner import PolicyEvaluation, SelectionPolicy, select_action
from .scenario import ScenarioConfig


@dataclass(frozen=True)
class PlannerConfig:
    grid: GridSpec
    sensor: SensorModel
    prefs: Preferences
    ingest: IngestConfig
    selection_kind: str = "argmin"
    selection_temperature: float = 1.0
    selection_seed: int = 0
    prior: float = 0.5
    leak: float = 0.0
    start: Fixation = Fixation(0, 0)

    @classmethod
    def from_scenario(cls, sc: ScenarioConfig) -> "PlannerConfig":
        return cls(
            grid=sc.grid_spec(),
            sensor=sc.sensor_model(),
            prefs=sc.preferences_for_grid(),
            ingest=sc.ingest_config(),
            selection_kind=sc.selection.kind,
            selection_temperature=sc.selection.temperature,
            selection_seed=sc.selection.seed,
            prior=sc.prior,
            leak=sc.leak,
            start=sc.start_fixation(),
        )


class PlannerSession:
    """One agent loop: carries beliefs forward and plans after every frame."""

    def __init__(self, cfg: PlannerConfig):
        self.cfg = cfg
        self.belief: BeliefState = init_belief(cfg.grid, cfg.prior, cfg.start)
        # Fresh generator per session so identical configs replay identically.
        self.selection = SelectionPolicy(
            kind=cfg.selection_kind,
            temperature=cfg.selection_temperature,
            seed=cfg.selection_seed,
        )
        self.last_action: Fixation = cfg.start
        self.last_evals: list[PolicyEvaluation] | None = None
        self.frames_seen = 0

    def handle_frame(self, frame: ObservationFrame) -> Fixation:
        """Ingest one frame, update beliefs, and return the next fixation."""
        if self.frames_seen > 0:
            self.belief = advance_prior(self.belief, self.cfg.leak)
        # The frame's fixation is the proprioceptive ground truth of where the
        # camera actually pointed; trust it over the previously issued command.
        self.belief = self.belief.with_fixation(frame.fixation)
        self.belief = update_beliefs(self.belief, frame, self.cfg.sensor, self.cfg.grid)
        action, evals = select_action(
            self.belief, self.cfg.sensor, self.cfg.prefs, self.cfg.grid, self.selection
        )
        self.belief = self.belief.with_fixation(action)
        self.last_action = action
        self.last_evals = evals
        self.frames_seen += 1
        return action

    def handle_detections(self, dets: list[Detection], fixation: Fixation, t: int) -> Fixation:
        frame = detections_to_frame(dets, fixation, t, self.cfg.ingest, self.cfg.grid)
        return self.handle_frame(frame)

    def update_only(self, frame: ObservationFrame) -> None:
        """Absorb a frame's evidence without planning (lagging-input mode)."""
        if self.frames_seen > 0:
            self.belief = advance_prior(self.belief, self.cfg.leak)
        self.belief = self.belief.with_fixation(frame.fixation)
        self.belief = update_beliefs(self.belief, frame, self.cfg.sensor, self.cfg.grid)
        self.frames_seen += 1

    def entropy_total(self) -> float:
        return float(bernoulli_entropy(self.belief.q).sum())

    def evaluate_current(self) -> list[PolicyEvaluation]:
        _, evals = select_action(
            self.belief, self.cfg.sensor, self.cfg.prefs, self.cfg.grid,
            SelectionPolicy(kind="argmin"),
        )
        return evals
