"""Retraction mechanics for pneumatically everting soft robots.

Predict whether a body inverts or buckles when pulled back, size the
tip-mounted device that makes retraction safe, calibrate the empirical
constants from bench data, and sweep phase diagrams over operating points.
"""

from .calibration import (
    ApertureFit,
    ApertureSample,
    ApertureShape,
    EmptyMeasurementFileError,
    InversionFit,
    MeasurementError,
    TensionSample,
    fit_aperture_constants,
    fit_inversion_force,
    load_measurements,
)
from .device import (
    DeviceForces,
    DeviceSpec,
    RetractionKinematics,
    aperture_inversion_force,
    applied_device_force,
    device_force_for_zero_tension,
    efficiency_for_pressure_ceiling,
    force_balance,
    max_device_force,
    max_zero_tension_pressure,
    predict_with_device,
    retraction_kinematics,
    tail_tension_with_device,
)
from .mechanics import (
    KAPPA_STRAIGHT,
    BehaviorPrediction,
    BodySpec,
    CrossCheckError,
    FailureMode,
    ModelUsed,
    RobotState,
    Verdict,
    axial_buckling_force,
    crushing_force,
    curved_buckling_force,
    curved_transition_length,
    min_buckling_moment_arm,
    min_inversion_pressure,
    moment_arm,
    predict_behavior,
    straight_transition_length,
    tail_tension_to_invert,
    transition_length,
    wall_tension,
)
from .sim import (
    EpisodeLog,
    Scenario,
    StepRecord,
    TerminalEvent,
    TerminalKind,
    emit_episode_csv,
    simulate_growth,
    simulate_retraction,
)
from .sweep import (
    AxisRange,
    PhaseDiagram,
    SweepRequest,
    classify_grid,
    diagrams_agree,
    emit_diagram,
    emit_transition_csv,
    oracle_scan,
)
from .version import __version__

__all__ = [
    "__version__",
    "KAPPA_STRAIGHT",
    "ApertureFit",
    "ApertureSample",
    "ApertureShape",
    "AxisRange",
    "BehaviorPrediction",
    "BodySpec",
    "CrossCheckError",
    "DeviceForces",
    "DeviceSpec",
    "EmptyMeasurementFileError",
    "EpisodeLog",
    "FailureMode",
    "InversionFit",
    "MeasurementError",
    "ModelUsed",
    "PhaseDiagram",
    "RetractionKinematics",
    "RobotState",
    "Scenario",
    "StepRecord",
    "SweepRequest",
    "TensionSample",
    "TerminalEvent",
    "TerminalKind",
    "Verdict",
    "aperture_inversion_force",
    "applied_device_force",
    "axial_buckling_force",
    "classify_grid",
    "crushing_force",
    "curved_buckling_force",
    "curved_transition_length",
    "device_force_for_zero_tension",
    "diagrams_agree",
    "efficiency_for_pressure_ceiling",
    "emit_diagram",
    "emit_episode_csv",
    "emit_transition_csv",
    "fit_aperture_constants",
    "fit_inversion_force",
    "force_balance",
    "load_measurements",
    "max_device_force",
    "max_zero_tension_pressure",
    "min_buckling_moment_arm",
    "min_inversion_pressure",
    "moment_arm",
    "oracle_scan",
    "predict_behavior",
    "predict_with_device",
    "retraction_kinematics",
    "simulate_growth",
    "simulate_retraction",
    "straight_transition_length",
    "tail_tension_to_invert",
    "tail_tension_with_device",
    "transition_length",
    "wall_tension",
]
