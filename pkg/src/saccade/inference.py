"""Belief updates that minimise variational free energy.

For this factorised model the free-energy minimiser has a closed form: each
visible block's posterior is the prior reweighted by the soft-evidence
likelihood (the geometric mean of the per-bin likelihoods under the observed
outcome distribution). The free energy itself, complexity minus accuracy, is
exposed for diagnostics and equals negative log evidence at the exact
posterior.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from .errors import BeliefContradiction, FrameRejected
from .grid import GridSpec, fov_origin
from .maths import LIKELIHOOD_FLOOR, bernoulli_kl
from .model import BeliefState, ObservationFrame, SensorModel


def _check_frame(belief: BeliefState, obs: ObservationFrame, grid: GridSpec) -> None:
    if obs.fixation != belief.fixation:
        raise FrameRejected(
            f"frame fixation ({obs.fixation.k},{obs.fixation.l}) does not match "
            f"belief fixation ({belief.fixation.k},{belief.fixation.l})"
        )
    if obs.evidence.shape != (grid.w, grid.h) or obs.visible.shape != (grid.w, grid.h):
        raise FrameRejected(
            f"evidence shape {obs.evidence.shape} does not match fov {grid.w}x{grid.h}"
        )
    vals = obs.evidence[obs.visible]
    if vals.size and (np.any(vals < 0.0) or np.any(vals > 1.0) or not np.all(np.isfinite(vals))):
        raise FrameRejected("evidence values outside [0, 1]")


def _soft_factors(sensor: SensorModel, evidence: float) -> tuple[float, float]:
    """Soft-evidence likelihood factors (present, absent), floored away from 0.

    The floor keeps a deterministic sensor fed contradictory evidence from
    producing -inf; prior weights stay exact so certain beliefs stay certain.
    """
    lp1 = evidence * math.log(max(sensor.p_hit, LIKELIHOOD_FLOOR)) + (1.0 - evidence) * math.log(
        max(1.0 - sensor.p_hit, LIKELIHOOD_FLOOR)
    )
    lp0 = evidence * math.log(max(sensor.p_fa, LIKELIHOOD_FLOOR)) + (1.0 - evidence) * math.log(
        max(1.0 - sensor.p_fa, LIKELIHOOD_FLOOR)
    )
    return math.exp(lp1), math.exp(lp0)


def update_beliefs(
    belief: BeliefState, obs: ObservationFrame, sensor: SensorModel, grid: GridSpec
) -> BeliefState:
    """Posterior over every visible block given one frame of soft evidence.

    Equals per-block Bayes rule for hard evidence; for soft evidence it is the
    exact free-energy minimiser under the observed outcome distribution.
    Non-visible blocks are untouched.
    """
    _check_frame(belief, obs, grid)
    q = belief.q.copy()
    mask = belief.observed_mask.copy()
    k0, l0 = fov_origin(grid, obs.fixation)
    for w in range(grid.w):
        for h in range(grid.h):
            if not obs.visible[w, h]:
                continue
            bk, bl = k0 + w, l0 + h
            f1, f0 = _soft_factors(sensor, float(obs.evidence[w, h]))
            w1 = q[bk, bl] * f1
            w0 = (1.0 - q[bk, bl]) * f0
            q[bk, bl] = w1 / (w1 + w0)
            mask[bk, bl] = True
    return BeliefState(q=q, fixation=belief.fixation, observed_mask=mask)


def _weighted(weight: float, log_term: float) -> float:
    """weight * log_term with the 0 * -inf convention resolved to 0."""
    return 0.0 if weight == 0.0 else weight * log_term


def free_energy(
    belief_prior: BeliefState,
    belief_post: BeliefState,
    obs: ObservationFrame,
    sensor: SensorModel,
    grid: GridSpec,
) -> float:
    """Variational free energy of the posterior: complexity minus accuracy, nats.

    Sums KL[q_post || q_prior] - E_q_post[soft log-likelihood] over visible
    blocks; non-visible blocks see a point-mass likelihood and contribute 0.
    Raises BeliefContradiction where the evidence has zero probability under
    the model (a -inf log with nonzero weight).
    """
    _check_frame(belief_prior, obs, grid)
    if belief_post.q.shape != belief_prior.q.shape:
        raise FrameRejected("posterior/prior shapes differ")
    k0, l0 = fov_origin(grid, obs.fixation)
    total = 0.0
    for w in range(grid.w):
        for h in range(grid.h):
            if not obs.visible[w, h]:
                continue
            bk, bl = k0 + w, l0 + h
            qp = float(belief_post.q[bk, bl])
            qr = float(belief_prior.q[bk, bl])
            e = float(obs.evidence[w, h])
            complexity = float(bernoulli_kl(qp, qr))
            # xlogy gives 0 * log(0) = 0, so zero-probability branches drop out
            # and a surviving -inf marks genuinely contradictory evidence.
            ll_present = float(xlogy(e, sensor.p_hit) + xlogy(1.0 - e, 1.0 - sensor.p_hit))
            ll_absent = float(xlogy(e, sensor.p_fa) + xlogy(1.0 - e, 1.0 - sensor.p_fa))
            accuracy = _weighted(qp, ll_present) + _weighted(1.0 - qp, ll_absent)
            block_f = complexity - accuracy
            if not math.isfinite(block_f):
                raise BeliefContradiction(
                    f"evidence {e} at block ({bk},{bl}) impossible under prior {qr} "
                    f"and sensor ({sensor.p_hit},{sensor.p_fa})"
                )
            total += block_f
    return total
