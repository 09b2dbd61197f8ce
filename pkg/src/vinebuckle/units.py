"""Boundary unit conversions. The library is SI inside (m, Pa, N, rad/s);
the CLI and file formats speak bench units (kPa, cm, N*cm, RPM)."""

from __future__ import annotations

import math


def kpa_to_pa(x: float) -> float:
    return x * 1000.0


def pa_to_kpa(x: float) -> float:
    return x / 1000.0


def cm_to_m(x: float) -> float:
    return x / 100.0


def m_to_cm(x: float) -> float:
    return x * 100.0


def um_to_m(x: float) -> float:
    return x / 1e6


def m_to_um(x: float) -> float:
    return x * 1e6


def mpa_to_pa(x: float) -> float:
    return x * 1e6


def pa_to_mpa(x: float) -> float:
    return x / 1e6


def cm2_to_m2(x: float) -> float:
    return x / 1e4


def m2_to_cm2(x: float) -> float:
    return x * 1e4


def ncm_to_nm(x: float) -> float:
    return x / 100.0


def nm_to_ncm(x: float) -> float:
    return x * 100.0


def ncm2_to_nm2(x: float) -> float:
    return x / 1e4


def nm2_to_ncm2(x: float) -> float:
    return x * 1e4


def rpm_to_rad_s(x: float) -> float:
    return x * math.pi / 30.0


def rad_s_to_rpm(x: float) -> float:
    return x * 30.0 / math.pi
