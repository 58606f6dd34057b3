"""Steering between sequential weak-measurement observers sharing a singlet."""

from .measurement import (
    BlochVector,
    KrausPair,
    MeasurementSet,
    kraus_pair,
    observable,
    platonic_set,
    povm_effects,
)
from .steering import (
    Assemblage,
    ObserverConfig,
    ScenarioResult,
    TwoQubitState,
    assemblage,
    averaged_state,
    conditional_state,
    lhs_bound,
    scenario,
    singlet_state,
    steering_parameter,
)
from .sweep import SweepRow, SweepSpec, find_violation_window, run_fixed_b_sweep, run_symmetric_sweep

__version__ = "0.1.0"
