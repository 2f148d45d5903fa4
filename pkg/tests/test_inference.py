import numpy as np
import pytest

from oracles import exact_bayes, soft_log_evidence
from conftest import ORACLE_SENSORS

from saccade.errors import BeliefContradiction, FrameRejected
from saccade.grid import Fixation, GridSpec
from saccade.inference import free_energy, update_beliefs
from saccade.model import SensorModel, empty_frame, init_belief


def single_cell_setup(q, p_hit, p_fa, evidence):
    grid = GridSpec(1, 1, 1, 1)
    belief = init_belief(grid, q, Fixation(0, 0))
    frame = empty_frame(grid, Fixation(0, 0), t=0)
    frame.evidence[0, 0] = evidence
    return grid, belief, frame, SensorModel(p_hit, p_fa)


class TestUpdateBeliefs:
    def test_certain_detection_deterministic_sensor(self):
        grid, belief, frame, sensor = single_cell_setup(0.5, 1.0, 0.0, 1.0)
        out = update_beliefs(belief, frame, sensor, grid)
        assert out.q[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert out.observed_mask[0, 0]

    def test_certain_absence_deterministic_sensor(self):
        grid, belief, frame, sensor = single_cell_setup(0.5, 1.0, 0.0, 0.0)
        out = update_beliefs(belief, frame, sensor, grid)
        assert out.q[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_noisy_detection_matches_hand_bayes(self):
        # frozen from the enumeration oracle: 0.9 / (0.9 + 0.05)
        grid, belief, frame, sensor = single_cell_setup(0.5, 0.9, 0.05, 1.0)
        out = update_beliefs(belief, frame, sensor, grid)
        assert out.q[0, 0] == pytest.approx(0.9473684210526316, abs=1e-12)

    def test_bayes_oracle_equivalence_grid(self):
        # exhaustive priors x sensors x hard outcomes, abs tol 1e-12
        priors = [round(0.1 * i, 1) for i in range(11)]
        for p_hit, p_fa in ORACLE_SENSORS:
            for q in priors:
                for o in (0, 1):
                    expected = exact_bayes(q, p_hit, p_fa, o)
                    if expected is None:
                        continue  # zero-probability outcome: no posterior exists
                    grid, belief, frame, sensor = single_cell_setup(q, p_hit, p_fa, float(o))
                    out = update_beliefs(belief, frame, sensor, grid)
                    assert abs(out.q[0, 0] - expected) <= 1e-12, (q, p_hit, p_fa, o)

    def test_normalisation_everywhere(self):
        rng = np.random.default_rng(3)
        grid = GridSpec(5, 5, 3, 3)
        sensor = SensorModel(0.85, 0.1)
        belief = init_belief(grid, 0.5, Fixation(2, 2))
        for t in range(20):
            frame = empty_frame(grid, belief.fixation, t)
            frame.evidence[frame.visible] = rng.uniform(0, 1, int(frame.visible.sum()))
            belief = update_beliefs(belief, frame, sensor, grid)
            assert np.all(belief.q >= 0.0) and np.all(belief.q <= 1.0)

    def test_monotone_evidence_never_decreases_belief(self):
        grid, belief, frame, sensor = single_cell_setup(0.3, 0.9, 0.05, 1.0)
        prev = belief.q[0, 0]
        for _ in range(10):
            belief = update_beliefs(belief, frame, sensor, grid)
            assert belief.q[0, 0] >= prev
            prev = belief.q[0, 0]

    def test_non_visible_blocks_untouched(self, grid9):
        belief = init_belief(grid9, 0.5, Fixation(1, 1))
        frame = empty_frame(grid9, Fixation(1, 1), t=0)
        out = update_beliefs(belief, frame, SensorModel(1.0, 0.0), grid9)
        window = {(k, l) for k in range(3) for l in range(3)}
        for k in range(9):
            for l in range(9):
                if (k, l) not in window:
                    assert out.q[k, l] == 0.5
                    assert not out.observed_mask[k, l]

    def test_fixation_mismatch_rejected(self, grid9):
        belief = init_belief(grid9, 0.5, Fixation(1, 1))
        frame = empty_frame(grid9, Fixation(2, 2), t=0)
        with pytest.raises(FrameRejected):
            update_beliefs(belief, frame, SensorModel(1.0, 0.0), grid9)

    def test_out_of_range_evidence_rejected(self, grid9):
        belief = init_belief(grid9, 0.5, Fixation(4, 4))
        frame = empty_frame(grid9, Fixation(4, 4), t=0)
        frame.evidence[1, 1] = 1.5
        with pytest.raises(FrameRejected):
            update_beliefs(belief, frame, SensorModel(1.0, 0.0), grid9)

    def test_contradictory_stream_stays_in_range(self):
        # deterministic sensor fed alternating certain evidence must not blow up
        grid, belief, frame1, sensor = single_cell_setup(0.5, 1.0, 0.0, 1.0)
        frame0 = empty_frame(grid, Fixation(0, 0), t=1)
        belief = update_beliefs(belief, frame1, sensor, grid)
        belief = update_beliefs(belief, frame0, sensor, grid)
        assert 0.0 <= belief.q[0, 0] <= 1.0


class TestFreeEnergy:
    def test_no_visible_blocks_gives_zero(self):
        grid = GridSpec(3, 3, 3, 3)
        sensor = SensorModel(0.9, 0.05)
        belief = init_belief(grid, 0.5, Fixation(0, 0))
        frame = empty_frame(grid, Fixation(0, 0), t=0)
        frame.visible[:, :] = False
        assert free_energy(belief, belief, frame, sensor, grid) == 0.0

    def test_exact_posterior_equals_negative_log_evidence(self):
        # frozen: -log(0.5*0.9 + 0.5*0.05) = 0.7444404749474958
        grid, prior, frame, sensor = single_cell_setup(0.5, 0.9, 0.05, 1.0)
        post = update_beliefs(prior, frame, sensor, grid)
        f = free_energy(prior, post, frame, sensor, grid)
        assert f == pytest.approx(0.7444404749474958, abs=1e-9)
        assert f == pytest.approx(-soft_log_evidence(0.5, 0.9, 0.05, 1.0), abs=1e-9)

    def test_skipping_the_update_costs_free_energy(self):
        grid, prior, frame, sensor = single_cell_setup(0.5, 0.9, 0.05, 1.0)
        post = update_beliefs(prior, frame, sensor, grid)
        f_exact = free_energy(prior, post, frame, sensor, grid)
        f_lazy = free_energy(prior, prior, frame, sensor, grid)
        assert f_lazy > f_exact

    def test_variational_optimality_random_candidates(self):
        # F at the exact posterior is a lower bound over arbitrary posteriors
        # and equals the summed negative log evidence.
        rng = np.random.default_rng(17)
        grid = GridSpec(3, 3, 3, 3)
        for p_hit, p_fa in [(0.9, 0.05), (0.7, 0.2)]:
            sensor = SensorModel(p_hit, p_fa)
            for _ in range(10):
                prior = init_belief(grid, float(rng.uniform(0.05, 0.95)), Fixation(1, 1))
                frame = empty_frame(grid, Fixation(1, 1), t=0)
                frame.evidence[frame.visible] = rng.uniform(0, 1, int(frame.visible.sum()))
                post = update_beliefs(prior, frame, sensor, grid)
                f_exact = free_energy(prior, post, frame, sensor, grid)
                z = sum(
                    soft_log_evidence(float(prior.q[k, l]), p_hit, p_fa, float(frame.evidence[k, l]))
                    for k in range(3)
                    for l in range(3)
                )
                assert f_exact == pytest.approx(-z, abs=1e-9)
                for _ in range(100):
                    alt_q = np.clip(post.q + rng.normal(0, 0.2, post.q.shape), 1e-9, 1 - 1e-9)
                    f_alt = free_energy(prior, _with_q(post, alt_q), frame, sensor, grid)
                    assert f_alt >= f_exact - 1e-9

    def test_contradiction_raises(self):
        grid, prior, frame, sensor = single_cell_setup(0.0, 1.0, 0.0, 1.0)
        post = init_belief(grid, 0.5, Fixation(0, 0))
        with pytest.raises(BeliefContradiction):
            free_energy(prior, post, frame, sensor, grid)


def _with_q(belief, alt_q):
    from dataclasses import replace

    return replace(belief, q=alt_q)
