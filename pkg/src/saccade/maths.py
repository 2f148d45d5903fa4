"""Bernoulli distribution helpers (natural-log units throughout)."""

from __future__ import annotations

import numpy as np
from scipy.special import rel_entr, xlogy

# Floor for log-likelihood factors so a deterministic sensor cannot produce -inf
# when fed contradictory evidence. Small enough that clamped posteriors stay
# within 1e-12 of the exact (zero) Bayes posterior.
LIKELIHOOD_FLOOR = 1e-300


def bernoulli_entropy(q):
    """H(q) in nats, elementwise; exact 0.0 at q in {0, 1}."""
    q = np.asarray(q, dtype=float)
    return -(xlogy(q, q) + xlogy(1.0 - q, 1.0 - q))


def bernoulli_kl(p, q):
    """KL[Ber(p) || Ber(q)] in nats, elementwise; +inf where supports mismatch."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return rel_entr(p, q) + rel_entr(1.0 - p, 1.0 - q)


def soft_log_likelihood(prob_present: float, evidence: float) -> float:
    """log of the geometric soft-evidence likelihood p^e * (1-p)^(1-e), floored."""
    p1 = max(prob_present, LIKELIHOOD_FLOOR)
    p0 = max(1.0 - prob_present, LIKELIHOOD_FLOOR)
    return evidence * np.log(p1) + (1.0 - evidence) * np.log(p0)
