"""Expected-free-energy policy evaluation and action selection.

Every candidate fixation is scored one step ahead:

    G = -(information gain) - (expected utility)

Information gain is the exact mutual information between each visible block's
presence state and its binary outcome, enumerated per block (the model
factorises, so the FOV total is the per-block sum). Utility is the expected
log-preference mass over outcomes. The next action is the G minimiser.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Fixation, GridSpec, all_fixations, check_fixation, fov_origin
from .maths import bernoulli_kl
from .model import BeliefState, Preferences, SensorModel


@dataclass(frozen=True)
class PolicyEvaluation:
    """One candidate fixation's score: G = -info_gain - utility (nats)."""

    fixation: Fixation
    info_gain: float
    utility: float
    g: float


@dataclass
class SelectionPolicy:
    """How to pick among scored fixations.

    "argmin" is deterministic: lowest G, ties broken by smallest Chebyshev
    move from the current fixation, then row-major order. "softmax" samples
    proportionally to exp(-G / temperature) from a seeded generator.
    """

    kind: str = "argmin"
    temperature: float = 1.0
    seed: int = 0
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("argmin", "softmax"):
            raise ValueError(f"unknown selection kind {self.kind!r}")
        if self.temperature <= 0.0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        self._rng = np.random.default_rng(self.seed)


def info_gain_table(q, sensor: SensorModel) -> np.ndarray:
    """Per-block mutual information I(presence; outcome) in nats, elementwise.

    Enumerates the two outcomes: I = sum_o P(o) KL[q(s|o) || q(s)]. Equals the
    belief entropy H(q) in the deterministic-sensor limit.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p1 = sensor.prob_present_obs(q)
    p0 = 1.0 - p1
    q_given_1 = np.divide(q * sensor.p_hit, p1, out=q.copy(), where=p1 > 0.0)
    q_given_0 = np.divide(q * (1.0 - sensor.p_hit), p0, out=q.copy(), where=p0 > 0.0)
    np.clip(q_given_1, 0.0, 1.0, out=q_given_1)
    np.clip(q_given_0, 0.0, 1.0, out=q_given_0)
    gain = p1 * bernoulli_kl(q_given_1, q) + p0 * bernoulli_kl(q_given_0, q)
    return np.maximum(gain, 0.0)


def block_info_gain(q: float, sensor: SensorModel) -> float:
    """info_gain_table for a single block belief."""
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"belief must be in [0, 1], got {q}")
    return float(info_gain_table(np.array([q]), sensor)[0])


@dataclass(frozen=True)
class _Tables:
    gain: np.ndarray  # (K, L) per-block info gain
    p1: np.ndarray    # (K, L) per-block P(outcome = present)


def _policy_tables(belief: BeliefState, sensor: SensorModel) -> _Tables:
    return _Tables(
        gain=info_gain_table(belief.q, sensor),
        p1=sensor.prob_present_obs(belief.q),
    )


def _evaluate(
    tables: _Tables, p: Fixation, prefs: Preferences, grid: GridSpec
) -> PolicyEvaluation:
    k0, l0 = fov_origin(grid, p)
    ks, ke = max(k0, 0), min(k0 + grid.w, grid.k)
    ls, le = max(l0, 0), min(l0 + grid.h, grid.l)
    info = float(tables.gain[ks:ke, ls:le].sum())
    utility = float(
        (prefs.compiled[ks - k0 : ke - k0, ls - l0 : le - l0] * tables.p1[ks:ke, ls:le]).sum()
    )
    return PolicyEvaluation(fixation=p, info_gain=info, utility=utility, g=-info - utility)


def evaluate_policy(
    belief: BeliefState,
    p: Fixation,
    sensor: SensorModel,
    prefs: Preferences,
    grid: GridSpec,
) -> PolicyEvaluation:
    """Score one candidate fixation; outside-grid FOV cells contribute 0."""
    check_fixation(grid, p)
    return _evaluate(_policy_tables(belief, sensor), p, prefs, grid)


def select_action(
    belief: BeliefState,
    sensor: SensorModel,
    prefs: Preferences,
    grid: GridSpec,
    selection: SelectionPolicy | None = None,
) -> tuple[Fixation, list[PolicyEvaluation]]:
    """Score all K*L fixations and pick the next one.

    Returns the chosen fixation plus the full evaluation list for tracing.
    """
    selection = selection or SelectionPolicy()
    tables = _policy_tables(belief, sensor)
    evals = [_evaluate(tables, p, prefs, grid) for p in all_fixations(grid)]
    if selection.kind == "softmax":
        logits = np.array([-e.g for e in evals]) / selection.temperature
        logits -= logits.max()
        probs = np.exp(logits)
        probs /= probs.sum()
        idx = int(selection._rng.choice(len(evals), p=probs))
        return evals[idx].fixation, evals
    here = belief.fixation
    best = min(evals, key=lambda e: (e.g, e.fixation.chebyshev(here), e.fixation.k, e.fixation.l))
    return best.fixation, evals
