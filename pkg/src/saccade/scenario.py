"""Scenario and planner configuration (JSON files, validated with field paths).

One schema serves both the closed-loop simulator and the serving harness; the
serve path simply ignores the world-side fields (objects, detector).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ConfigError
from .grid import Fixation, GridSpec
from .ingest import IngestConfig
from .model import Preferences, SensorModel
from .planner import SelectionPolicy


class GridConfig(BaseModel):
    k: int = Field(ge=1)
    l: int = Field(ge=1)
    w: int = Field(ge=1)
    h: int = Field(ge=1)

    @model_validator(mode="after")
    def _fov_fits(self):
        if self.w > self.k:
            raise ValueError(f"fov width {self.w} exceeds grid width {self.k}")
        if self.h > self.l:
            raise ValueError(f"fov height {self.h} exceeds grid height {self.l}")
        return self


class SensorConfig(BaseModel):
    p_hit: float = Field(default=0.9, gt=0.0, le=1.0)
    p_fa: float = Field(default=0.02, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _informative(self):
        if self.p_hit <= self.p_fa:
            raise ValueError(f"p_hit {self.p_hit} must exceed p_fa {self.p_fa}")
        return self


class PreferencesConfig(BaseModel):
    mode: str = "explore"
    c_value: float = 1.0

    @model_validator(mode="after")
    def _known_mode(self):
        if self.mode not in ("explore", "seek", "track"):
            raise ValueError(f"mode must be explore, seek or track, got {self.mode!r}")
        return self


class SelectionConfig(BaseModel):
    kind: str = "argmin"
    temperature: float = Field(default=1.0, gt=0.0)
    seed: int = 0

    @model_validator(mode="after")
    def _known_kind(self):
        if self.kind not in ("argmin", "softmax"):
            raise ValueError(f"kind must be argmin or softmax, got {self.kind!r}")
        return self


class IngestSettings(BaseModel):
    target_classes: Optional[list[str]] = None  # default: classes of scenario objects
    assignment: str = "center"
    overlap_threshold: float = Field(default=0.2, ge=0.0, le=1.0)
    confidence_floor: float = Field(default=0.25, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _known_assignment(self):
        if self.assignment not in ("center", "overlap"):
            raise ValueError(f"assignment must be center or overlap, got {self.assignment!r}")
        return self


class ObjectConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    block: tuple[int, int]
    class_name: str = Field(default="person", alias="class")
    move_prob: float = Field(default=0.0, ge=0.0, le=1.0)


class DetectorConfig(BaseModel):
    """Generative side of the sensor used by the world simulator."""

    p_hit: float = Field(ge=0.0, le=1.0)
    p_fa: float = Field(ge=0.0, le=1.0)
    confidence_hit: tuple[float, float] = (0.85, 0.99)
    confidence_fa: tuple[float, float] = (0.3, 0.6)

    @model_validator(mode="after")
    def _intervals(self):
        for name, (lo, hi) in (("confidence_hit", self.confidence_hit), ("confidence_fa", self.confidence_fa)):
            if not (0.0 <= lo <= hi <= 1.0):
                raise ValueError(f"{name} interval [{lo}, {hi}] must be ordered within [0, 1]")
        return self


class ScenarioConfig(BaseModel):
    """Everything needed to run an episode or configure a planner session."""

    grid: GridConfig
    start: Optional[tuple[int, int]] = None  # default: grid centre
    prior: float = Field(default=0.5, ge=0.0, le=1.0)
    leak: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = 42
    sensor: SensorConfig = SensorConfig()
    preferences: PreferencesConfig = PreferencesConfig()
    selection: SelectionConfig = SelectionConfig()
    ingest: IngestSettings = IngestSettings()
    objects: list[ObjectConfig] = []
    detector: Optional[DetectorConfig] = None  # default: mirror the sensor

    @model_validator(mode="after")
    def _consistent(self):
        if self.start is None:
            self.start = ((self.grid.k - 1) // 2, (self.grid.l - 1) // 2)
        sk, sl = self.start
        if not (0 <= sk < self.grid.k and 0 <= sl < self.grid.l):
            raise ValueError(f"start {self.start} outside {self.grid.k}x{self.grid.l} grid")
        for i, obj in enumerate(self.objects):
            bk, bl = obj.block
            if not (0 <= bk < self.grid.k and 0 <= bl < self.grid.l):
                raise ValueError(f"objects[{i}].block {obj.block} outside grid")
        return self

    # --- runtime objects ---

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.grid.k, self.grid.l, self.grid.w, self.grid.h)

    def sensor_model(self) -> SensorModel:
        return SensorModel(self.sensor.p_hit, self.sensor.p_fa)

    def preferences_for_grid(self) -> Preferences:
        return Preferences.make(self.preferences.mode, self.grid_spec(), self.preferences.c_value)

    def selection_policy(self) -> SelectionPolicy:
        return SelectionPolicy(
            kind=self.selection.kind,
            temperature=self.selection.temperature,
            seed=self.selection.seed,
        )

    def target_classes(self) -> frozenset[str]:
        if self.ingest.target_classes is not None:
            return frozenset(self.ingest.target_classes)
        if self.objects:
            return frozenset(o.class_name for o in self.objects)
        return frozenset({"person"})

    def ingest_config(self) -> IngestConfig:
        return IngestConfig(
            target_classes=self.target_classes(),
            assignment=self.ingest.assignment,
            overlap_threshold=self.ingest.overlap_threshold,
            confidence_floor=self.ingest.confidence_floor,
        )

    def start_fixation(self) -> Fixation:
        return Fixation(*self.start)

    def digest(self) -> str:
        """Stable content hash, recorded in trace headers."""
        canon = json.dumps(self.model_dump(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def parse_scenario(data: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"scenario file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file {path} is not valid JSON: {exc}")
    return parse_scenario(data)
