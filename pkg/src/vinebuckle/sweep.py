"""Phase diagrams over (pressure, length) at fixed curvature.

``classify_grid`` runs the predictor over a grid of cell centers and traces
the invert/buckle transition curve from the closed-form solvers.
``oracle_scan`` classifies the same grid by direct force comparison with a
bisection-based dispatch, sharing no transition algebra with the closed
forms; the two must agree cell for cell. Diagrams serialize to CSV and to a
deterministic standalone SVG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import units
from .device import (
    DeviceSpec,
    device_force_for_zero_tension,
    max_device_force,
    predict_with_device,
    tail_tension_with_device,
)
from .mechanics import (
    KAPPA_STRAIGHT,
    BehaviorPrediction,
    BodySpec,
    FailureMode,
    ModelUsed,
    RobotState,
    Verdict,
    _select_model,
    axial_buckling_force,
    crushing_force,
    moment_arm,
    predict_behavior,
    tail_tension_to_invert,
    transition_length,
)
from .version import __version__


@dataclass(frozen=True)
class AxisRange:
    """Half-open sweep axis: ``steps`` cells between lo and hi, SI units."""

    lo: float
    hi: float
    steps: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"axis range needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 1:
            raise ValueError(f"axis range needs steps >= 1, got {self.steps}")

    def centers(self) -> list[float]:
        width = (self.hi - self.lo) / self.steps
        return [self.lo + (i + 0.5) * width for i in range(self.steps)]


@dataclass(frozen=True)
class SweepRequest:
    body: BodySpec
    curvature: float
    pressure_range: AxisRange   # Pa
    length_range: AxisRange     # m
    device: Optional[DeviceSpec] = None
    efficiency: float = 1.0

    def __post_init__(self) -> None:
        if self.curvature < 0:
            raise ValueError(f"curvature must be >= 0, got {self.curvature}")
        if not 0 <= self.efficiency <= 1:
            raise ValueError(f"efficiency must be in [0, 1], got {self.efficiency}")


@dataclass
class PhaseDiagram:
    """Grid of predictions plus the transition curve, row-major in pressure."""

    pressures: list[float]                      # Pa, cell centers
    lengths: list[float]                        # m, cell centers
    grid: list[list[BehaviorPrediction]]        # grid[i][j] at (pressures[i], lengths[j])
    transition_curve: list[tuple[float, float]]  # (Pa, m), pressures with a transition
    metadata: dict = field(default_factory=dict)


def classify_grid(request: SweepRequest) -> PhaseDiagram:
    """Classify every cell center and trace the modeled transition curve."""
    pressures = request.pressure_range.centers()
    lengths = request.length_range.centers()
    grid = []
    for pressure in pressures:
        row = []
        for length in lengths:
            state = RobotState(length=length, pressure=pressure, curvature=request.curvature)
            if request.device is not None:
                row.append(
                    predict_with_device(request.body, request.device, state, request.efficiency)
                )
            else:
                row.append(predict_behavior(request.body, state))
        grid.append(row)

    curve = []
    for pressure in pressures:
        critical = _transition_at(request, pressure)
        if critical is not None and math.isfinite(critical):
            curve.append((pressure, critical))

    return PhaseDiagram(
        pressures=pressures,
        lengths=lengths,
        grid=grid,
        transition_curve=curve,
        metadata=_metadata(request),
    )


def oracle_scan(request: SweepRequest) -> PhaseDiagram:
    """Classify the grid by direct force comparison with bisection dispatch.

    Shares the force formulas with the predictor but none of the closed-form
    transition algebra; used to cross-check ``classify_grid``. The returned
    diagram carries verdict-bearing predictions and an empty transition curve.
    """
    pressures = request.pressure_range.centers()
    lengths = request.length_range.centers()
    grid = []
    for pressure in pressures:
        row = []
        for length in lengths:
            row.append(_oracle_cell(request, pressure, length))
        grid.append(row)
    meta = _metadata(request)
    meta["oracle"] = True
    return PhaseDiagram(
        pressures=pressures,
        lengths=lengths,
        grid=grid,
        transition_curve=[],
        metadata=meta,
    )


def diagrams_agree(a: PhaseDiagram, b: PhaseDiagram) -> bool:
    """True when two diagrams carry identical verdicts cell for cell."""
    if len(a.grid) != len(b.grid):
        return False
    for row_a, row_b in zip(a.grid, b.grid):
        if len(row_a) != len(row_b):
            return False
        for cell_a, cell_b in zip(row_a, row_b):
            if cell_a.verdict is not cell_b.verdict:
                return False
    return True


def emit_diagram(diagram: PhaseDiagram, format: str) -> bytes:
    """Serialize a diagram; ``format`` is "csv" or "svg". Deterministic bytes."""
    if format == "csv":
        return _emit_csv(diagram)
    if format == "svg":
        return _emit_svg(diagram)
    raise ValueError(f"unknown format {format!r}, expected csv or svg")


def emit_transition_csv(diagram: PhaseDiagram) -> bytes:
    lines = ["pressure_kpa,critical_length_cm"]
    for pressure, length in diagram.transition_curve:
        lines.append(f"{units.pa_to_kpa(pressure)!r},{units.m_to_cm(length)!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# internals


def _metadata(request: SweepRequest) -> dict:
    return {
        "kappa_per_m": request.curvature,
        "pressure_kpa": [
            units.pa_to_kpa(request.pressure_range.lo),
            units.pa_to_kpa(request.pressure_range.hi),
            request.pressure_range.steps,
        ],
        "length_cm": [
            units.m_to_cm(request.length_range.lo),
            units.m_to_cm(request.length_range.hi),
            request.length_range.steps,
        ],
        "device": request.device is not None,
        "efficiency": request.efficiency,
        "model_version": __version__,
    }


def _transition_at(request: SweepRequest, pressure: float) -> Optional[float]:
    if request.device is None:
        return transition_length(request.body, pressure, request.curvature)
    available = request.efficiency * max_device_force(request.device)
    needed = device_force_for_zero_tension(request.body, request.device, pressure)
    if needed <= available:
        return None  # inverts at every length; no transition to draw
    residual = tail_tension_with_device(request.body, request.device, pressure, available)
    _, transition, _ = _select_model(request.body, pressure, request.curvature, residual)
    if transition is None or math.isinf(transition):
        return None
    return transition


def _oracle_cell(request: SweepRequest, pressure: float, length: float) -> BehaviorPrediction:
    body, curvature = request.body, request.curvature
    if request.device is not None:
        available = request.efficiency * max_device_force(request.device)
        needed = device_force_for_zero_tension(body, request.device, pressure)
        if needed <= available:
            return _oracle_prediction(Verdict.INVERT, 0.0, math.inf, ModelUsed.STRAIGHT)
        required = tail_tension_with_device(body, request.device, pressure, available)
    else:
        required = tail_tension_to_invert(body, pressure)

    model = _oracle_dispatch(body, pressure, curvature, required)
    if model is ModelUsed.STRAIGHT:
        limit = crushing_force(body, pressure)
        if length > 0:
            limit = min(limit, axial_buckling_force(body, pressure, length))
    else:
        limit = pressure * body.cross_section_area * body.radius / _arm_clamped(
            body, curvature, length
        )
    verdict = Verdict.INVERT if required < limit else Verdict.BUCKLE
    return _oracle_prediction(verdict, required, limit, model)


def _oracle_prediction(
    verdict: Verdict, required: float, limit: float, model: ModelUsed
) -> BehaviorPrediction:
    return BehaviorPrediction(
        verdict=verdict,
        mode=FailureMode.NONE,
        required_tension=required,
        limiting_force=limit,
        margin=limit - required,
        model_used=model,
        extrapolated=False,
    )


def _arm_clamped(body: BodySpec, curvature: float, length: float) -> float:
    if curvature * length > math.pi:
        return body.radius + 2.0 / curvature
    return moment_arm(body, curvature, length)


def _oracle_dispatch(
    body: BodySpec, pressure: float, curvature: float, required: float
) -> ModelUsed:
    if curvature < KAPPA_STRAIGHT:
        return ModelUsed.STRAIGHT
    straight = _straight_transition_bisect(body, pressure, required)
    curved = _curved_transition_bisect(body, pressure, curvature, required)
    if curved is None or math.isinf(curved) or straight is None:
        return ModelUsed.STRAIGHT
    if not math.isinf(straight) and curved > straight:
        return ModelUsed.STRAIGHT
    return ModelUsed.CURVED


def _straight_transition_bisect(
    body: BodySpec, pressure: float, required: float
) -> Optional[float]:
    """Straight transition by bisection on the force balance. No algebra shared
    with the closed form. None: crush at zero length. inf: inverts everywhere."""
    if required >= crushing_force(body, pressure):
        return None
    if required <= 0:
        return math.inf

    def gap(length: float) -> float:
        return axial_buckling_force(body, pressure, length) - required

    hi = 1.0
    while gap(hi) > 0:
        hi *= 2.0
    return _bisect_root(gap, 1e-12, hi)


def _curved_transition_bisect(
    body: BodySpec, pressure: float, curvature: float, required: float
) -> Optional[float]:
    """Curved transition by bisection on the moment balance over [0, pi/kappa]."""
    pa = pressure * body.cross_section_area
    if required > pa:
        return None
    if required <= 0:
        return math.inf
    if curvature < KAPPA_STRAIGHT:
        return math.inf
    if pa * body.radius / (body.radius + 2.0 / curvature) > required:
        return math.inf

    def gap(length: float) -> float:
        return pa * body.radius / moment_arm(body, curvature, length) - required

    return _bisect_root(gap, 0.0, math.pi / curvature)


def _bisect_root(f: Callable[[float], float], lo: float, hi: float) -> float:
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f_lo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            f_lo = f(lo)
    return 0.5 * (lo + hi)


def _fmt_force(value: float) -> str:
    return "inf" if math.isinf(value) else repr(value)


def _emit_csv(diagram: PhaseDiagram) -> bytes:
    lines = [
        "pressure_kpa,length_cm,verdict,mode,required_n,limit_n,margin_n,model,extrapolated"
    ]
    for i, pressure in enumerate(diagram.pressures):
        for j, length in enumerate(diagram.lengths):
            cell = diagram.grid[i][j]
            lines.append(
                ",".join(
                    (
                        repr(units.pa_to_kpa(pressure)),
                        repr(units.m_to_cm(length)),
                        cell.verdict.value,
                        cell.mode.value,
                        _fmt_force(cell.required_tension),
                        _fmt_force(cell.limiting_force),
                        _fmt_force(cell.margin),
                        cell.model_used.value,
                        "true" if cell.extrapolated else "false",
                    )
                )
            )
    return ("\n".join(lines) + "\n").encode("utf-8")


_SVG_W, _SVG_H = 720.0, 540.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 72.0, 24.0, 24.0, 58.0


def _emit_svg(diagram: PhaseDiagram) -> bytes:
    meta = diagram.metadata
    p_lo, p_hi = meta["pressure_kpa"][0], meta["pressure_kpa"][1]
    l_lo, l_hi = meta["length_cm"][0], meta["length_cm"][1]

    def sx(p_kpa: float) -> float:
        frac = (p_kpa - p_lo) / (p_hi - p_lo)
        return _MARGIN_L + frac * (_SVG_W - _MARGIN_L - _MARGIN_R)

    def sy(l_cm: float) -> float:
        frac = (l_cm - l_lo) / (l_hi - l_lo)
        return _SVG_H - _MARGIN_B - frac * (_SVG_H - _MARGIN_T - _MARGIN_B)

    def f(value: float) -> str:
        return f"{value:.2f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W:g}" '
        f'height="{_SVG_H:g}" viewBox="0 0 {_SVG_W:g} {_SVG_H:g}">',
        f'<rect x="0" y="0" width="{_SVG_W:g}" height="{_SVG_H:g}" fill="white"/>',
    ]

    # axes with 6 ticks per side
    x0, y0 = _MARGIN_L, _SVG_H - _MARGIN_B
    x1, y1 = _SVG_W - _MARGIN_R, _MARGIN_T
    parts.append(
        f'<line x1="{f(x0)}" y1="{f(y0)}" x2="{f(x1)}" y2="{f(y0)}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{f(x0)}" y1="{f(y0)}" x2="{f(x0)}" y2="{f(y1)}" stroke="black"/>'
    )
    for k in range(6):
        p_tick = p_lo + k * (p_hi - p_lo) / 5.0
        x = sx(p_tick)
        parts.append(
            f'<line x1="{f(x)}" y1="{f(y0)}" x2="{f(x)}" y2="{f(y0 + 5)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{f(x)}" y="{f(y0 + 20)}" font-size="12" text-anchor="middle" '
            f'font-family="sans-serif">{p_tick:.4g}</text>'
        )
        l_tick = l_lo + k * (l_hi - l_lo) / 5.0
        y = sy(l_tick)
        parts.append(
            f'<line x1="{f(x0 - 5)}" y1="{f(y)}" x2="{f(x0)}" y2="{f(y)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{f(x0 - 9)}" y="{f(y + 4)}" font-size="12" text-anchor="end" '
            f'font-family="sans-serif">{l_tick:.4g}</text>'
        )
    parts.append(
        f'<text x="{f((x0 + x1) / 2)}" y="{f(_SVG_H - 14)}" font-size="14" '
        f'text-anchor="middle" font-family="sans-serif">pressure (kPa)</text>'
    )
    parts.append(
        f'<text x="16" y="{f((y0 + y1) / 2)}" font-size="14" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {f((y0 + y1) / 2)})">'
        "length (cm)</text>"
    )

    # grid markers: circles invert, crosses buckle
    for i, pressure in enumerate(diagram.pressures):
        for j, length in enumerate(diagram.lengths):
            x = sx(units.pa_to_kpa(pressure))
            y = sy(units.m_to_cm(length))
            if diagram.grid[i][j].verdict is Verdict.INVERT:
                parts.append(
                    f'<circle cx="{f(x)}" cy="{f(y)}" r="3" fill="none" '
                    'stroke="#1a9641" stroke-width="1.2" class="invert"/>'
                )
            else:
                parts.append(
                    f'<path d="M {f(x - 3)} {f(y - 3)} L {f(x + 3)} {f(y + 3)} '
                    f'M {f(x - 3)} {f(y + 3)} L {f(x + 3)} {f(y - 3)}" '
                    'stroke="#d7191c" stroke-width="1.2" class="buckle"/>'
                )

    # modeled transition as a dotted polyline, clipped to the plotted range
    visible = [
        (p, l)
        for p, l in diagram.transition_curve
        if l_lo <= units.m_to_cm(l) <= l_hi
    ]
    if visible:
        points = " ".join(
            f"{f(sx(units.pa_to_kpa(p)))},{f(sy(units.m_to_cm(l)))}" for p, l in visible
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="black" '
            'stroke-width="1.5" stroke-dasharray="2 4" class="transition"/>'
        )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
