"""Active-inference saccade planning for pan/tilt cameras.

Maintains Bernoulli presence beliefs over a discretised grid, updates them
from detector output by free-energy minimisation, and picks the next fixation
by minimising expected free energy (information gain plus preference utility).
"""

from .grid import Fixation, FovCell, GridSpec, all_fixations, center_cell, visible_blocks
from .inference import free_energy, update_beliefs
from .ingest import (
    Detection,
    IngestConfig,
    detections_to_frame,
    encode_action_message,
    encode_frame_message,
    parse_action_message,
    parse_frame_message,
)
from .model import (
    BeliefState,
    ObservationFrame,
    PreferenceMode,
    Preferences,
    SensorModel,
    advance_prior,
    init_belief,
    likelihood,
)
from .planner import (
    PolicyEvaluation,
    SelectionPolicy,
    block_info_gain,
    evaluate_policy,
    select_action,
)
from .scenario import ScenarioConfig, load_scenario, parse_scenario
from .session import PlannerConfig, PlannerSession
from .simulator import DetectorSim, EpisodeTrace, SimObject, WorldState, run_episode, step

__version__ = "0.1.0"
