"""SWIM mobility simulation, contact-trace metrics, and alpha calibration."""

from .calibrate import (CurveFeatures, SweepResult, alpha_sweep, curve_distance, thumb_rule_features,
                        write_sweep_report)
from .contacts import detect_contacts, quantize_to_beacons
from .kernels import BACKEND
from .metrics import (CcdfSeries, ContactCountMatrix, MetricError, PairProbabilityMatrix, contact_count_matrix,
                      contact_duration_ccdf, contacts_by_hour_of_day, contacts_per_hour_per_node,
                      intercontact_ccdf, pair_curve, pair_probability, sorted_pair_curve, write_metric_csvs)
from .scenario import (NodeClass, ScenarioConfig, ScenarioError, World, cambridge_default, generate_world,
                       load_scenario, serialize_scenario)
from .simulate import simulate, simulate_log
from .swim import (HOME, MovementTimeline, NodeState, PresenceInterval, cell_weight, choose_destination,
                   distance_decay, run_mobility, update_seen)
from .traceio import ContactLog, ContactRecord, TraceError, parse_contact_trace, write_contact_trace

__version__ = "0.1.0"
