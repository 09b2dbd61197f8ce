"""Quasistatic retraction and growth episodes.

Each step is an independent static verdict at the current tip position; no
dynamic state carries over beyond position, elapsed time and tail slack.
Buckling is terminal: the post-buckling shape is outside the model, so the
episode ends at the first buckle verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import units
from .device import (
    DeviceSpec,
    applied_device_force,
    predict_with_device,
    retraction_kinematics,
)
from .mechanics import BehaviorPrediction, BodySpec, RobotState, Verdict, predict_behavior


class TerminalKind(Enum):
    FULLY_RETRACTED = "fully_retracted"
    BUCKLED = "buckled"
    STALLED = "stalled"


@dataclass(frozen=True)
class TerminalEvent:
    kind: TerminalKind
    length: Optional[float] = None  # m, set for BUCKLED


@dataclass(frozen=True)
class Scenario:
    """One episode: body, operating schedule and optional device.

    Pressure is either a constant (``pressure``) or piecewise linear in tip
    position (``pressure_points`` as (tip m, Pa) breakpoints; evaluation
    outside their span is an error). ``target_length`` is only used by
    growth episodes. ``motor_speed`` defaults to the device maximum.
    """

    body: BodySpec
    initial_length: float                 # m
    pressure: Optional[float] = None      # Pa
    pressure_points: Optional[tuple[tuple[float, float], ...]] = None
    curvature: float = 0.0                # 1/m
    device: Optional[DeviceSpec] = None
    efficiency: float = 1.0
    step: float = 0.01                    # m, finer than any transition feature
    motor_speed: Optional[float] = None   # rad/s
    base_takeup: bool = True
    target_length: Optional[float] = None  # m, growth episodes

    def __post_init__(self) -> None:
        if self.initial_length < 0:
            raise ValueError(f"initial_length must be >= 0, got {self.initial_length}")
        if self.step <= 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if self.curvature < 0:
            raise ValueError(f"curvature must be >= 0, got {self.curvature}")
        if not 0 <= self.efficiency <= 1:
            raise ValueError(f"efficiency must be in [0, 1], got {self.efficiency}")
        if (self.pressure is None) == (self.pressure_points is None):
            raise ValueError("give exactly one of pressure or pressure_points")
        if self.pressure is not None and self.pressure < 0:
            raise ValueError(f"pressure must be >= 0, got {self.pressure}")
        if self.pressure_points is not None:
            points = self.pressure_points
            if len(points) < 2:
                raise ValueError("pressure_points needs at least two breakpoints")
            positions = [p for p, _ in points]
            if any(b <= a for a, b in zip(positions, positions[1:])):
                raise ValueError("pressure_points positions must be strictly increasing")
            if any(p < 0 for _, p in points):
                raise ValueError("pressure_points pressures must be >= 0")
        if self.target_length is not None and self.target_length < 0:
            raise ValueError(f"target_length must be >= 0, got {self.target_length}")
        if self.motor_speed is not None and self.motor_speed < 0:
            raise ValueError(f"motor_speed must be >= 0, got {self.motor_speed}")

    def pressure_at(self, tip: float) -> float:
        if self.pressure is not None:
            return self.pressure
        points = self.pressure_points
        assert points is not None
        if tip < points[0][0] or tip > points[-1][0]:
            raise ValueError(
                f"pressure schedule covers tip positions "
                f"[{points[0][0]}, {points[-1][0]}] m, asked for {tip}"
            )
        for (x0, p0), (x1, p1) in zip(points, points[1:]):
            if tip <= x1:
                return p0 + (p1 - p0) * (tip - x0) / (x1 - x0)
        return points[-1][1]


@dataclass(frozen=True)
class StepRecord:
    index: int
    tip_position: float        # m
    pressure: float            # Pa
    required_tension: float    # N
    device_force: float        # N, 0 without a device
    verdict: Verdict
    time: float                # s; nan without device kinematics
    slack: float               # m of loose tail, 0 when base take-up runs


@dataclass(frozen=True)
class EpisodeLog:
    steps: tuple[StepRecord, ...]
    terminal: TerminalEvent
    base_takeup_speed: float = 0.0   # m/s, matched base spool speed


def simulate_retraction(scenario: Scenario) -> EpisodeLog:
    """Step the tip from initial_length toward zero, stopping at first buckle.

    With a device, elapsed time follows the roller kinematics and slack
    accumulates at twice the retracted length unless base take-up runs.
    A device commanded at zero motor speed stalls the episode.
    """
    tip_speed, takeup_speed = _speeds(scenario)
    records: list[StepRecord] = []
    k = 0
    while True:
        tip = scenario.initial_length - k * scenario.step
        if tip <= 0.0:
            return EpisodeLog(
                steps=tuple(records),
                terminal=TerminalEvent(TerminalKind.FULLY_RETRACTED),
                base_takeup_speed=takeup_speed,
            )
        record = _evaluate(scenario, k, tip, tip_speed)
        records.append(record)
        if record.verdict is Verdict.BUCKLE:
            return EpisodeLog(
                steps=tuple(records),
                terminal=TerminalEvent(TerminalKind.BUCKLED, length=tip),
                base_takeup_speed=takeup_speed,
            )
        if scenario.device is not None and tip_speed == 0.0:
            return EpisodeLog(
                steps=tuple(records),
                terminal=TerminalEvent(TerminalKind.STALLED),
                base_takeup_speed=takeup_speed,
            )
        k += 1


def simulate_growth(scenario: Scenario) -> EpisodeLog:
    """Grow from initial_length to target_length, logging the retraction
    verdict that would hold at each length (the retractability envelope).

    Growth itself is unconditionally stable here; the terminal event reports
    the envelope: BUCKLED at the first length that could no longer retract,
    FULLY_RETRACTED when every grown length stays retractable.
    """
    if scenario.target_length is None:
        raise ValueError("growth scenario needs target_length")
    target = scenario.target_length
    tip_speed, takeup_speed = _speeds(scenario)
    records: list[StepRecord] = []
    first_buckle: Optional[float] = None
    k = 1
    while True:
        tip = scenario.initial_length + k * scenario.step
        last = tip >= target
        if last:
            tip = target
        if tip <= scenario.initial_length:
            break
        record = _evaluate(scenario, k - 1, tip, tip_speed, grown_from=scenario.initial_length)
        records.append(record)
        if first_buckle is None and record.verdict is Verdict.BUCKLE:
            first_buckle = tip
        if last:
            break
        k += 1
    if first_buckle is not None:
        terminal = TerminalEvent(TerminalKind.BUCKLED, length=first_buckle)
    else:
        terminal = TerminalEvent(TerminalKind.FULLY_RETRACTED)
    return EpisodeLog(steps=tuple(records), terminal=terminal, base_takeup_speed=takeup_speed)


def emit_episode_csv(log: EpisodeLog) -> bytes:
    lines = ["step,tip_cm,pressure_kpa,required_n,device_n,verdict,time_s"]
    for record in log.steps:
        lines.append(
            ",".join(
                (
                    str(record.index),
                    repr(units.m_to_cm(record.tip_position)),
                    repr(units.pa_to_kpa(record.pressure)),
                    repr(record.required_tension),
                    repr(record.device_force),
                    record.verdict.value,
                    repr(record.time),
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# internals


def _speeds(scenario: Scenario) -> tuple[float, float]:
    if scenario.device is None:
        return math.nan, 0.0
    speed = (
        scenario.device.motor_speed_max
        if scenario.motor_speed is None
        else scenario.motor_speed
    )
    kin = retraction_kinematics(scenario.device, speed)
    return kin.tip_speed, kin.base_takeup_speed


def _evaluate(
    scenario: Scenario,
    index: int,
    tip: float,
    tip_speed: float,
    grown_from: Optional[float] = None,
) -> StepRecord:
    pressure = scenario.pressure_at(tip)
    state = RobotState(length=tip, pressure=pressure, curvature=scenario.curvature)
    if scenario.device is not None:
        prediction: BehaviorPrediction = predict_with_device(
            scenario.body, scenario.device, state, scenario.efficiency
        )
        force = applied_device_force(
            scenario.body, scenario.device, pressure, scenario.efficiency
        )
    else:
        prediction = predict_behavior(scenario.body, state)
        force = 0.0
    if grown_from is None:
        travelled = scenario.initial_length - tip
    else:
        travelled = tip - grown_from
    if scenario.device is not None and not math.isnan(tip_speed):
        elapsed = travelled / tip_speed if tip_speed > 0 else 0.0
    else:
        elapsed = math.nan
    slack = (
        2.0 * travelled
        if scenario.device is not None and not scenario.base_takeup and grown_from is None
        else 0.0
    )
    return StepRecord(
        index=index,
        tip_position=tip,
        pressure=pressure,
        required_tension=prediction.required_tension,
        device_force=force,
        verdict=prediction.verdict,
        time=elapsed,
        slack=slack,
    )
