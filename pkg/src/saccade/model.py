"""Generative model: Bernoulli presence beliefs, sensor likelihood, preferences.

Observation bins per FOV cell: 0 = no object, 1 = object, 2 = not visible.
Beliefs are per-block probabilities q[k, l] = Q(presence = 1), carried forward
between timesteps as the next prior (optionally leaked toward 0.5 so the model
tolerates slow, unmodelled object motion).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .grid import Fixation, GridSpec, center_cell, check_fixation, fov_origin

OBS_ABSENT, OBS_PRESENT, OBS_NOT_VISIBLE = 0, 1, 2


@dataclass(frozen=True)
class SensorModel:
    """Detection likelihood: P(bin=present | presence, visible).

    p_hit is the detection probability for a present object, p_fa the false
    alarm probability for an empty block. The deterministic model used in the
    oracle tests is the (1.0, 0.0) limit.
    """

    p_hit: float = 0.9
    p_fa: float = 0.02

    def __post_init__(self):
        if not (0.0 < self.p_hit <= 1.0):
            raise ValueError(f"p_hit must be in (0, 1], got {self.p_hit}")
        if not (0.0 <= self.p_fa < 1.0):
            raise ValueError(f"p_fa must be in [0, 1), got {self.p_fa}")
        if self.p_hit <= self.p_fa:
            raise ValueError(f"sensor must be informative: p_hit {self.p_hit} <= p_fa {self.p_fa}")

    def prob_present_obs(self, q):
        """P(bin = present) for a visible block with belief q, elementwise."""
        q = np.asarray(q, dtype=float)
        return q * self.p_hit + (1.0 - q) * self.p_fa


def likelihood(sensor: SensorModel, present: int, visible: bool) -> np.ndarray:
    """Distribution over bins {absent, present, not-visible} given the state."""
    if not visible:
        return np.array([0.0, 0.0, 1.0])
    if present:
        return np.array([1.0 - sensor.p_hit, sensor.p_hit, 0.0])
    return np.array([1.0 - sensor.p_fa, sensor.p_fa, 0.0])


@dataclass(frozen=True)
class BeliefState:
    """Presence beliefs q[k, l], the proprioceptive fixation, and coverage mask."""

    q: np.ndarray            # (K, L) floats in [0, 1]
    fixation: Fixation
    observed_mask: np.ndarray  # (K, L) bools, true once a block was ever seen

    def with_fixation(self, p: Fixation) -> "BeliefState":
        return replace(self, fixation=p)

    def coverage(self) -> float:
        return float(self.observed_mask.mean())


def init_belief(grid: GridSpec, prior: float, start: Fixation) -> BeliefState:
    """Uniform prior belief; prior=0.5 is the maximum-entropy default."""
    if not (0.0 <= prior <= 1.0):
        raise ValueError(f"prior must be in [0, 1], got {prior}")
    check_fixation(grid, start)
    return BeliefState(
        q=np.full((grid.k, grid.l), float(prior)),
        fixation=start,
        observed_mask=np.zeros((grid.k, grid.l), dtype=bool),
    )


def advance_prior(belief: BeliefState, leak: float = 0.0) -> BeliefState:
    """Carry the posterior forward as the next prior.

    leak=0 keeps it unchanged (static world); leak>0 mixes toward 0.5 so
    beliefs about unwatched blocks decay instead of staying certain forever.
    """
    if not (0.0 <= leak <= 1.0):
        raise ValueError(f"leak must be in [0, 1], got {leak}")
    if leak == 0.0:
        return belief
    return replace(belief, q=(1.0 - leak) * belief.q + leak * 0.5)


@dataclass(frozen=True)
class ObservationFrame:
    """Soft evidence for one timestep: per-FOV-cell probability of bin=present.

    evidence[w, h] is only meaningful where visible[w, h]; cells off the grid
    are marked not visible and contribute nothing downstream.
    """

    t: int
    fixation: Fixation
    evidence: np.ndarray   # (W, H) floats
    visible: np.ndarray    # (W, H) bools, false for outside-grid cells
    skipped: int = 0       # malformed detections dropped on ingest


def empty_frame(grid: GridSpec, fixation: Fixation, t: int) -> ObservationFrame:
    """An all-zero-evidence frame ("nothing detected") at the given fixation."""
    check_fixation(grid, fixation)
    if t < 0:
        raise ValueError(f"timestep must be >= 0, got {t}")
    k0, l0 = fov_origin(grid, fixation)
    visible = np.zeros((grid.w, grid.h), dtype=bool)
    for w in range(grid.w):
        for h in range(grid.h):
            visible[w, h] = grid.contains(k0 + w, l0 + h)
    return ObservationFrame(
        t=t, fixation=fixation, evidence=np.zeros((grid.w, grid.h)), visible=visible
    )


class PreferenceMode(str, enum.Enum):
    EXPLORE = "explore"  # no outcome preferences, pure information seeking
    SEEK = "seek"        # prefer detections anywhere in the FOV
    TRACK = "track"      # prefer a detection at the FOV centre


@dataclass(frozen=True)
class Preferences:
    """Log-preference over the bin=present outcome, compiled per FOV cell."""

    mode: PreferenceMode
    c_value: float
    compiled: np.ndarray  # (W, H) log-preference for bin=present

    @classmethod
    def make(cls, mode: PreferenceMode | str, grid: GridSpec, c_value: float = 1.0) -> "Preferences":
        mode = PreferenceMode(mode)
        compiled = np.zeros((grid.w, grid.h))
        if mode is PreferenceMode.SEEK:
            compiled[:, :] = c_value
        elif mode is PreferenceMode.TRACK:
            cw, ch = center_cell(grid)
            compiled[cw, ch] = c_value
        return cls(mode=mode, c_value=c_value, compiled=compiled)
