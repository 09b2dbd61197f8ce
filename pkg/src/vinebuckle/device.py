"""Tip-mounted retraction device: force balance, actuation limits, kinematics.

The device squeezes the tail between two motor-driven rollers and grounds
the reaction on the robot tip, so the force it applies sees an effective
body length of zero and cannot buckle the body. SI units throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .mechanics import (
    BehaviorPrediction,
    BodySpec,
    FailureMode,
    ModelUsed,
    RobotState,
    Verdict,
    KAPPA_STRAIGHT,
    _classify,
)

_RPM = 2.0 * math.pi / 60.0
_TIP_RING_AREA = math.pi * 0.016**2  # 3.2 cm diameter grounding ring


@dataclass(frozen=True)
class DeviceSpec:
    """Retraction device parameters.

    Defaults describe the two-motor roller implementation: 24.5 N*cm
    continuous torque per motor, 1.2 cm rollers, 33 RPM, a 3.2 cm diameter
    tip grounding ring, and aperture force constants fit at zero pressure.
    The friction cap applies only when both ``static_friction`` and
    ``roller_normal_force`` are given; otherwise torque is assumed binding.
    """

    max_motor_torque: float = 0.245           # N*m, per motor
    roller_radius: float = 0.012              # m
    motor_speed_max: float = 33.0 * _RPM      # rad/s
    static_friction: Optional[float] = None
    roller_normal_force: Optional[float] = None   # N
    tip_ring_area: float = _TIP_RING_AREA         # m^2
    routing_aperture_area: float = _TIP_RING_AREA  # m^2
    aperture_c1: float = 6.1e-4               # N*m^2
    aperture_c2: float = 3.3                  # N

    def __post_init__(self) -> None:
        for name in (
            "max_motor_torque",
            "roller_radius",
            "motor_speed_max",
            "tip_ring_area",
            "routing_aperture_area",
            "aperture_c1",
            "aperture_c2",
        ):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        for name in ("static_friction", "roller_normal_force"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be > 0 when given, got {value}")

    @property
    def min_aperture_area(self) -> float:
        """Smallest aperture the tail slides through, in m^2.

        The roller gap is excluded: the rollers roll along the tail rather
        than letting it slide, so only the tip ring and routing aperture count.
        """
        return min(self.tip_ring_area, self.routing_aperture_area)


@dataclass(frozen=True)
class DeviceForces:
    """Quasistatic forces at the tip while the device assists inversion."""

    device_force: float      # N, applied on the tail
    grounding_force: float   # N, reaction on the tip; equals device_force
    tail_tension: float      # N
    wall_tension: float      # N


def aperture_inversion_force(device: DeviceSpec, area: Optional[float] = None) -> float:
    """Force to invert the body at zero pressure through a sliding aperture.

    F = C1/a + C2, decreasing in aperture area and bounded below by C2.
    Defaults to the device's smallest sliding aperture; this value replaces
    the body's bare inversion force whenever the device is present.
    """
    a = device.min_aperture_area if area is None else area
    if a <= 0:
        raise ValueError(f"aperture area must be > 0, got {a}")
    return device.aperture_c1 / a + device.aperture_c2


def tail_tension_with_device(
    body: BodySpec, device: DeviceSpec, pressure: float, device_force: float
) -> float:
    """Tail tension needed to invert while the device applies ``device_force``.

    T_T = P*A/2 + F_I(device aperture) - F_d/2. May be negative when the
    device over-drives; clamping is a simulation policy, not done here.
    """
    if pressure < 0:
        raise ValueError(f"pressure must be >= 0, got {pressure}")
    if device_force < 0:
        raise ValueError(f"device_force must be >= 0, got {device_force}")
    return (
        0.5 * pressure * body.cross_section_area
        + aperture_inversion_force(device)
        - 0.5 * device_force
    )


def device_force_for_zero_tension(
    body: BodySpec, device: DeviceSpec, pressure: float
) -> float:
    """Device force that inverts the body with zero tail tension: P*A + 2*F_I."""
    if pressure < 0:
        raise ValueError(f"pressure must be >= 0, got {pressure}")
    return pressure * body.cross_section_area + 2.0 * aperture_inversion_force(device)


def max_device_force(device: DeviceSpec) -> float:
    """Largest force the device can apply to the tail.

    min(2*tau_max/r, mu_s*N); the friction cap is ignored when the friction
    pair is unspecified.
    """
    torque_limit = 2.0 * device.max_motor_torque / device.roller_radius
    if device.static_friction is not None and device.roller_normal_force is not None:
        return min(torque_limit, device.static_friction * device.roller_normal_force)
    return torque_limit


def max_zero_tension_pressure(
    body: BodySpec,
    device: DeviceSpec,
    efficiency: float = 1.0,
    inversion_force: Optional[float] = None,
) -> float:
    """Highest pressure at which the device alone can retract the body.

    (efficiency * F_max - 2*F_I) / A, floored at zero. ``inversion_force``
    defaults to the aperture model value; pass ``body.inversion_force`` for
    the device-free bare offset.
    """
    if not 0 < efficiency <= 1:
        raise ValueError(f"efficiency must be in (0, 1], got {efficiency}")
    f_i = aperture_inversion_force(device) if inversion_force is None else inversion_force
    ceiling = (efficiency * max_device_force(device) - 2.0 * f_i) / body.cross_section_area
    return max(ceiling, 0.0)


def efficiency_for_pressure_ceiling(
    body: BodySpec, device: DeviceSpec, max_pressure: float
) -> float:
    """Transmission efficiency implied by a measured zero-tension pressure ceiling.

    Back-solves ``max_zero_tension_pressure`` for efficiency, so field data on
    the highest self-retraction pressure calibrates the drivetrain losses.
    """
    if max_pressure < 0:
        raise ValueError(f"max_pressure must be >= 0, got {max_pressure}")
    needed = device_force_for_zero_tension(body, device, max_pressure)
    return needed / max_device_force(device)


@dataclass(frozen=True)
class RetractionKinematics:
    roller_surface_speed: float   # m/s, tail speed through the rollers
    tip_speed: float              # m/s, tip retraction speed
    base_takeup_speed: float      # m/s, base spool speed keeping slack constant


def retraction_kinematics(device: DeviceSpec, motor_speed: float) -> RetractionKinematics:
    """Speeds at a given motor speed (rad/s).

    The tail feeds through the rollers at omega*r; eversion consumes two
    units of tail per unit of tip travel, so the tip moves at half that and
    the base must take up the full roller surface speed to hold slack.
    """
    if motor_speed < 0:
        raise ValueError(f"motor_speed must be >= 0, got {motor_speed}")
    if motor_speed > device.motor_speed_max:
        raise ValueError(
            f"motor_speed {motor_speed} exceeds motor_speed_max {device.motor_speed_max}"
        )
    surface = motor_speed * device.roller_radius
    return RetractionKinematics(
        roller_surface_speed=surface,
        tip_speed=0.5 * surface,
        base_takeup_speed=surface,
    )


def force_balance(
    body: BodySpec, device: DeviceSpec, pressure: float, device_force: float
) -> DeviceForces:
    """Resolve the tip force balance at a given applied device force."""
    tail = tail_tension_with_device(body, device, pressure, device_force)
    wall = pressure * body.cross_section_area - tail
    return DeviceForces(
        device_force=device_force,
        grounding_force=device_force,
        tail_tension=tail,
        wall_tension=wall,
    )


def predict_with_device(
    body: BodySpec, device: DeviceSpec, state: RobotState, efficiency: float = 1.0
) -> BehaviorPrediction:
    """Predict retraction behavior with the device assisting at the tip.

    If the available device force covers the zero-tension requirement the
    body always inverts: the force path is grounded at the tip, no finite
    buckling limit applies, and the reported limit is infinite. Otherwise
    the device saturates, the residual tail tension P*A/2 + F_I - F_avail/2
    must come from the base, and the ordinary model comparison runs with
    that residual (a model extension beyond the zero-tension regime).
    """
    if not 0 <= efficiency <= 1:
        raise ValueError(f"efficiency must be in [0, 1], got {efficiency}")
    available = efficiency * max_device_force(device)
    needed = device_force_for_zero_tension(body, device, state.pressure)
    if needed <= available:
        extrapolated = state.curvature > 0 and state.curvature * state.length > math.pi
        model = (
            ModelUsed.STRAIGHT
            if state.curvature < KAPPA_STRAIGHT
            else ModelUsed.CURVED
        )
        return BehaviorPrediction(
            verdict=Verdict.INVERT,
            mode=FailureMode.NONE,
            required_tension=0.0,
            limiting_force=math.inf,
            margin=math.inf,
            model_used=model,
            extrapolated=extrapolated,
        )
    residual = tail_tension_with_device(body, device, state.pressure, available)
    return _classify(body, state, residual)


def applied_device_force(
    body: BodySpec, device: DeviceSpec, pressure: float, efficiency: float = 1.0
) -> float:
    """Force the device actually applies: the zero-tension need, capped at available."""
    available = efficiency * max_device_force(device)
    return min(device_force_for_zero_tension(body, device, pressure), available)
