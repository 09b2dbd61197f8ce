"""Quasistatic retraction mechanics of pneumatically everting soft robot bodies.

A body of given length, curvature and internal pressure either inverts
(wall material folds back into the tail at the tip, the desired behavior)
or buckles, depending on which outcome needs the lower tail force. Straight
bodies fail by axial beam buckling or by crushing of the wall; constant
curvature bodies fail by transverse buckling about the base. All quantities
are SI (m, Pa, N) and all functions here are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

# Curvatures below this are treated as exactly straight; the curved closed
# form is numerically meaningless there and the straight model applies.
KAPPA_STRAIGHT = 1e-6

# Closed-form transition residual (N) above which the bisection fallback runs,
# and the max closed-form vs bisection disagreement (m) before we declare a bug.
_RESIDUAL_TOL_N = 1e-9
_TRANSITION_TOL_M = 1e-6


class CrossCheckError(RuntimeError):
    """Closed-form and bisection transition solvers disagree; implementation bug."""


class Verdict(Enum):
    INVERT = "invert"
    BUCKLE = "buckle"


class FailureMode(Enum):
    NONE = "none"
    AXIAL_BUCKLE = "axial_buckle"
    CRUSH = "crush"
    TRANSVERSE_BUCKLE = "transverse_buckle"


class ModelUsed(Enum):
    STRAIGHT = "straight"
    CURVED = "curved"


@dataclass(frozen=True)
class BodySpec:
    """Geometry and material of a soft robot body.

    Defaults describe an 8.5 cm diameter, 74 um LDPE body with a 3.5 N
    tip deformation force. ``inversion_force`` is a body parameter, not a
    universal constant; it depends on material, diameter and thickness.
    """

    radius: float = 0.0425            # m
    wall_thickness: float = 74e-6     # m
    youngs_modulus: float = 300e6     # Pa
    shear_modulus: float = 210e6      # Pa
    inversion_force: float = 3.5      # N, tip deformation force offset

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.wall_thickness <= 0:
            raise ValueError(f"wall_thickness must be > 0, got {self.wall_thickness}")
        if self.youngs_modulus <= 0:
            raise ValueError(f"youngs_modulus must be > 0, got {self.youngs_modulus}")
        if self.shear_modulus <= 0:
            raise ValueError(f"shear_modulus must be > 0, got {self.shear_modulus}")
        if self.inversion_force < 0:
            raise ValueError(f"inversion_force must be >= 0, got {self.inversion_force}")

    @property
    def cross_section_area(self) -> float:
        """Cross-sectional area pi*R^2 in m^2."""
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class RobotState:
    """Operating point: centerline arc length, curvature and gauge pressure."""

    length: float               # m
    pressure: float             # Pa
    curvature: float = 0.0      # 1/m, >= 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"length must be >= 0, got {self.length}")
        if self.pressure < 0:
            raise ValueError(f"pressure must be >= 0, got {self.pressure}")
        if self.curvature < 0:
            raise ValueError(f"curvature must be >= 0, got {self.curvature}")


@dataclass(frozen=True)
class BehaviorPrediction:
    """Outcome of a retraction attempt at one operating point.

    ``margin == limiting_force - required_tension`` and the verdict is
    INVERT exactly when the margin is positive. ``extrapolated`` is set when
    the curved moment arm was evaluated past its validity range (kappa*L > pi)
    or the curved model had no reachable buckling point.
    """

    verdict: Verdict
    mode: FailureMode
    required_tension: float     # N
    limiting_force: float       # N
    margin: float               # N
    model_used: ModelUsed
    extrapolated: bool = False


def tail_tension_to_invert(body: BodySpec, pressure: float) -> float:
    """Tail tension needed to invert the body at the given pressure.

    Affine in pressure with slope equal to half the cross-sectional area,
    offset by the tip deformation force.
    """
    _check_pressure(pressure)
    return 0.5 * pressure * body.cross_section_area + body.inversion_force


def crushing_force(body: BodySpec, pressure: float) -> float:
    """Axial load that collapses the wall by crushing: P*A, length independent."""
    _check_pressure(pressure)
    return pressure * body.cross_section_area


def axial_buckling_force(body: BodySpec, pressure: float, length: float) -> float:
    """Tip load that buckles a straight inflated body of the given length.

    Strictly decreasing in length; tends to P*A + pi*R*G*t as length -> 0.
    Raises ValueError for length <= 0.
    """
    _check_pressure(pressure)
    if length <= 0:
        raise ValueError(f"length must be > 0, got {length}")
    num = _axial_numerator(body, pressure)
    den = _axial_den_const(body) + _axial_den_slope(body, pressure) * length * length
    return num / den


def min_inversion_pressure(body: BodySpec) -> float:
    """Pressure below which inversion is impossible at any length: 2*F_I/A."""
    return 2.0 * body.inversion_force / body.cross_section_area


def moment_arm(body: BodySpec, curvature: float, length: float) -> float:
    """Lateral moment arm of the tail tension about the base of a curved body.

    D = R + (1 - cos(L*kappa)) / kappa, valid for kappa*L in [0, pi].
    Below the straightness threshold this is R exactly. 1 - cos is evaluated
    as 2*sin^2(x/2) to stay accurate near zero curvature.
    """
    if curvature <= 0:
        raise ValueError(f"curvature must be > 0, got {curvature}")
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    if curvature * length > math.pi:
        raise ValueError(
            f"moment arm undefined for kappa*L > pi, got {curvature * length}"
        )
    return _moment_arm_unchecked(body, curvature, length)


def curved_buckling_force(
    body: BodySpec, pressure: float, curvature: float, length: float
) -> float:
    """Tail tension that transversely buckles a curved body: P*A*R / D."""
    _check_pressure(pressure)
    return pressure * body.cross_section_area * body.radius / moment_arm(
        body, curvature, length
    )


def min_buckling_moment_arm(body: BodySpec, pressure: float) -> float:
    """Smallest moment arm at which buckling wins over inversion.

    Equals R at the minimum inversion pressure and approaches 2R at high
    pressure. Requires pressure > 0.
    """
    if pressure <= 0:
        raise ValueError(f"pressure must be > 0, got {pressure}")
    pa = pressure * body.cross_section_area
    return pa * body.radius / (0.5 * pa + body.inversion_force)


def wall_tension(body: BodySpec, pressure: float, device_force: float = 0.0) -> float:
    """Tension carried by the deployed wall during inversion.

    T_W = P*A/2 - F_I + F_d/2. Negative values are meaningful: the wall has
    gone slack and the body is in the crushing regime. With no device force
    the sign flips exactly at the minimum inversion pressure.
    """
    _check_pressure(pressure)
    if device_force < 0:
        raise ValueError(f"device_force must be >= 0, got {device_force}")
    return (
        0.5 * pressure * body.cross_section_area
        - body.inversion_force
        + 0.5 * device_force
    )


def straight_transition_length(body: BodySpec, pressure: float) -> Optional[float]:
    """Critical length of a straight body: invert below, buckle above.

    None when pressure is at or below the minimum inversion pressure (no
    length inverts; crushing binds already at zero length). The closed form
    is cross-checked against bisection on every call.
    """
    _check_pressure(pressure)
    result = _straight_transition_for(body, pressure, tail_tension_to_invert(body, pressure))
    return None if result is None or math.isinf(result) else result


def curved_transition_length(
    body: BodySpec, pressure: float, curvature: float
) -> Optional[float]:
    """Critical arc length of a curved body under the transverse model.

    None when no transition exists: either pressure is below the minimum
    inversion pressure (crush at zero length) or the required moment arm
    exceeds its maximum R + 2/kappa within the valid range (buckling
    unreachable). Cross-checked against bisection on every call.
    """
    _check_pressure(pressure)
    if curvature <= 0:
        raise ValueError(f"curvature must be > 0, got {curvature}")
    result = _curved_transition_for(
        body, pressure, curvature, tail_tension_to_invert(body, pressure)
    )
    return None if result is None or math.isinf(result) else result


def transition_length(
    body: BodySpec, pressure: float, curvature: float = 0.0
) -> Optional[float]:
    """Critical length under whichever model the dispatcher would apply."""
    _check_pressure(pressure)
    if curvature < 0:
        raise ValueError(f"curvature must be >= 0, got {curvature}")
    required = tail_tension_to_invert(body, pressure)
    _, transition, _ = _select_model(body, pressure, curvature, required)
    if transition is None or math.isinf(transition):
        return None
    return transition


def predict_behavior(body: BodySpec, state: RobotState) -> BehaviorPrediction:
    """Predict whether the body inverts or buckles during retraction.

    Bodies below the straightness threshold use the straight model (axial
    buckling and crushing). Curved bodies use the transverse model unless it
    would predict a longer transition length than the straight model, in
    which case the body behaves as straight. Exact ties classify as BUCKLE.
    """
    required = tail_tension_to_invert(body, state.pressure)
    return _classify(body, state, required)


# ---------------------------------------------------------------------------
# internals


def _check_pressure(pressure: float) -> None:
    if pressure < 0:
        raise ValueError(f"pressure must be >= 0, got {pressure}")


def _axial_numerator(body: BodySpec, pressure: float) -> float:
    e, g = body.youngs_modulus, body.shear_modulus
    r, t = body.radius, body.wall_thickness
    pi3 = math.pi**3
    return e * pi3 * r**4 * t * pressure + e * g * pi3 * r**3 * t * t


def _axial_den_const(body: BodySpec) -> float:
    return (
        body.youngs_modulus
        * math.pi**2
        * body.radius**2
        * body.wall_thickness
    )


def _axial_den_slope(body: BodySpec, pressure: float) -> float:
    # coefficient of L^2 in the buckling denominator
    return body.radius * pressure + body.shear_modulus * body.wall_thickness


def _moment_arm_unchecked(body: BodySpec, curvature: float, length: float) -> float:
    if curvature < KAPPA_STRAIGHT:
        return body.radius
    half = 0.5 * length * curvature
    one_minus_cos = 2.0 * math.sin(half) * math.sin(half)
    return body.radius + one_minus_cos / curvature


def _moment_arm_clamped(body: BodySpec, curvature: float, length: float) -> float:
    # Beyond kappa*L = pi the arm is held at its maximum R + 2/kappa so that
    # a triggered buckling verdict persists instead of oscillating.
    if curvature * length > math.pi:
        return body.radius + 2.0 / curvature
    return _moment_arm_unchecked(body, curvature, length)


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise CrossCheckError(
            f"bisection bracket does not straddle a root: f({lo})={f_lo}, f({hi})={f_hi}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _cross_check(
    closed: float, f: Callable[[float], float], lo: float, hi: float
) -> float:
    if abs(f(closed)) <= _RESIDUAL_TOL_N:
        return closed
    root = _bisect(f, lo, hi)
    if abs(root - closed) > _TRANSITION_TOL_M:
        raise CrossCheckError(
            f"closed-form transition {closed} m disagrees with bisection {root} m"
        )
    return closed


def _straight_transition_for(
    body: BodySpec, pressure: float, required: float
) -> Optional[float]:
    """Transition length of the straight model at an arbitrary required tension.

    None: no inverting length exists (crushing binds at zero length).
    inf: no buckling length exists (inverts at every length).
    """
    crush = pressure * body.cross_section_area
    if required >= crush:
        return None
    if required <= 0:
        return math.inf
    num = _axial_numerator(body, pressure)
    l_sq = (num / required - _axial_den_const(body)) / _axial_den_slope(body, pressure)
    closed = math.sqrt(l_sq)

    def f(length: float) -> float:
        den = _axial_den_const(body) + _axial_den_slope(body, pressure) * length * length
        return num / den - required

    hi = max(2.0 * closed, 1.0)
    while f(hi) > 0:
        hi *= 2.0
    return _cross_check(closed, f, 1e-12, hi)


def _curved_transition_for(
    body: BodySpec, pressure: float, curvature: float, required: float
) -> Optional[float]:
    """Transition arc length of the curved model at an arbitrary required tension.

    None: crushing binds already at zero length. At the exact crush boundary
    (required == P*A) the transition is 0. inf: the moment arm cannot reach
    the buckling threshold anywhere in its valid range (or the body is below
    the straightness threshold, where the curved limit is P*A at every length).
    """
    pa = pressure * body.cross_section_area
    if required > pa:
        return None
    if required <= 0:
        return math.inf
    if curvature < KAPPA_STRAIGHT:
        return math.inf
    arm_max = body.radius + 2.0 / curvature
    if pa * body.radius / arm_max > required:
        return math.inf
    d_min = pa * body.radius / required
    cos_arg = 1.0 - curvature * (d_min - body.radius)
    closed = math.acos(max(-1.0, min(1.0, cos_arg))) / curvature

    def f(length: float) -> float:
        return pa * body.radius / _moment_arm_unchecked(body, curvature, length) - required

    return _cross_check(closed, f, 0.0, math.pi / curvature)


def _select_model(
    body: BodySpec, pressure: float, curvature: float, required: float
) -> tuple[ModelUsed, Optional[float], bool]:
    """Pick straight vs curved model; return (model, transition, extrapolated hint).

    A curved body is still modeled as straight when the transverse model has
    no transition or predicts a longer one than the straight model.
    """
    if curvature < KAPPA_STRAIGHT:
        return ModelUsed.STRAIGHT, _straight_transition_for(body, pressure, required), False
    straight = _straight_transition_for(body, pressure, required)
    curved = _curved_transition_for(body, pressure, curvature, required)
    if curved is None:
        return ModelUsed.STRAIGHT, straight, False
    if math.isinf(curved):
        # buckling unreachable within the moment-arm range; fall back, flagged
        return ModelUsed.STRAIGHT, straight, True
    if straight is None:
        return ModelUsed.STRAIGHT, straight, False
    if not math.isinf(straight) and curved > straight:
        return ModelUsed.STRAIGHT, straight, False
    return ModelUsed.CURVED, curved, False


def _classify(body: BodySpec, state: RobotState, required: float) -> BehaviorPrediction:
    pressure, length, curvature = state.pressure, state.length, state.curvature
    model, _, extrapolated = _select_model(body, pressure, curvature, required)
    if curvature > 0 and curvature * length > math.pi:
        extrapolated = True

    if model is ModelUsed.STRAIGHT:
        mode = FailureMode.CRUSH
        limit = crushing_force(body, pressure)
        if length > 0:
            axial = axial_buckling_force(body, pressure, length)
            if axial < limit:
                mode, limit = FailureMode.AXIAL_BUCKLE, axial
    else:
        mode = FailureMode.TRANSVERSE_BUCKLE
        limit = (
            pressure
            * body.cross_section_area
            * body.radius
            / _moment_arm_clamped(body, curvature, length)
        )

    invert = required < limit
    return BehaviorPrediction(
        verdict=Verdict.INVERT if invert else Verdict.BUCKLE,
        mode=FailureMode.NONE if invert else mode,
        required_tension=required,
        limiting_force=limit,
        margin=limit - required,
        model_used=model,
        extrapolated=extrapolated,
    )
