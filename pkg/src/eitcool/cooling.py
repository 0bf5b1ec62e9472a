"""Lamb-Dicke geometry, cooling coefficients A+/-, and phonon rate equation.

The phonon number of a mode obeys d<n>/dt = -(A- - A+) <n> + A+ with

    A+/- = eta^2 cos^2(phi) W(delta_pi -/+ omega),

where W is the cooling-beam scattering spectrum sampled at detunings shifted
by one vibrational quantum.  W is always taken from the full Bloch-equation
solve, so the same code path serves the three-level and both four-level
configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import CA40_MASS, HBAR
from .spectrum import EITConfig, coupling_for_target_shift, scattering_rate


@dataclass(frozen=True)
class TrapMode:
    """One harmonic motional mode of the trapped ion."""

    omega: float  # rad/s
    axis: tuple
    mass: float = CA40_MASS
    label: str = ""

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("mode frequency must be positive")
        a = np.asarray(self.axis, float)
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError("mode axis must be a unit vector")

    @property
    def ground_state_size(self) -> float:
        return math.sqrt(HBAR / (2 * self.mass * self.omega))


@dataclass(frozen=True)
class CoolingGeometry:
    """Per-mode cooling geometry derived from the beam wavevectors."""

    omega: float
    eta: float  # |k_g - k_r| * a0
    cos_phi: float
    delta_k: tuple = (0.0, 0.0, 0.0)
    label: str = ""

    @property
    def coolable(self) -> bool:
        return self.eta > 0 and self.cos_phi != 0


def lamb_dicke(mode: TrapMode, k_g, k_r) -> CoolingGeometry:
    """Lamb-Dicke parameter and projection angle for one mode.

    ``k_g`` and ``k_r`` are the cooling and coupling wavevectors (1/m).
    Copropagating equal-wavelength beams give eta = 0 (flagged uncoolable).
    """
    dk = np.asarray(k_g, float) - np.asarray(k_r, float)
    dk_norm = float(np.linalg.norm(dk))
    if dk_norm == 0:
        return CoolingGeometry(omega=mode.omega, eta=0.0, cos_phi=0.0, label=mode.label)
    eta = dk_norm * mode.ground_state_size
    cos_phi = float(dk @ np.asarray(mode.axis, float)) / dk_norm
    return CoolingGeometry(
        omega=mode.omega, eta=eta, cos_phi=cos_phi, delta_k=tuple(dk), label=mode.label
    )


def geometry_from_angle(mode: TrapMode, delta_k_mag: float, phi: float) -> CoolingGeometry:
    """Geometry from |delta k| and the angle phi between delta k and the mode axis."""
    return CoolingGeometry(
        omega=mode.omega,
        eta=delta_k_mag * mode.ground_state_size,
        cos_phi=math.cos(phi),
        label=mode.label,
    )


def cooling_coefficients(config: EITConfig, geometry: CoolingGeometry):
    """(A+, A-) in 1/s for one mode at the configured cooling detuning."""
    prefactor = geometry.eta**2 * geometry.cos_phi**2
    if prefactor == 0:
        return 0.0, 0.0
    w_plus = scattering_rate(config, config.delta_pi - geometry.omega).w
    w_minus = scattering_rate(config, config.delta_pi + geometry.omega).w
    return prefactor * w_plus, prefactor * w_minus


def evolve_n(a_plus: float, a_minus: float, n0: float, t: float) -> float:
    """Closed-form solution of the phonon rate equation at time t."""
    if a_plus < 0 or a_minus < 0:
        raise ValueError("rate coefficients must be nonnegative")
    rate = a_minus - a_plus
    if rate == 0:
        return n0 + a_plus * t
    n_ss = a_plus / rate
    return n_ss + (n0 - n_ss) * math.exp(-rate * t)


@dataclass(frozen=True)
class CoolingReport:
    """Cooling figures of merit for one mode."""

    label: str
    omega: float
    a_plus: float
    a_minus: float

    @property
    def rate(self) -> float:
        return self.a_minus - self.a_plus

    @property
    def cooled(self) -> bool:
        return self.rate > 0

    @property
    def n_ss(self) -> float:
        if not self.cooled:
            return math.inf
        return self.a_plus / self.rate

    @property
    def time_constant(self) -> float:
        if not self.cooled:
            return math.inf
        return 1.0 / self.rate

    def lamb_dicke_check(self, eta: float) -> float:
        """eta * sqrt(n_ss); values >= 0.1 are outside the deep Lamb-Dicke regime."""
        return eta * math.sqrt(self.n_ss) if self.cooled else math.inf


@dataclass(frozen=True)
class SweepPoint:
    value: float
    a_plus: float
    a_minus: float
    n_ss: float
    cooled: bool
    error: str = ""


def _n_ss(a_plus: float, a_minus: float):
    if a_minus > a_plus:
        return a_plus / (a_minus - a_plus), True
    return math.inf, False


def steady_state_n_sweep(
    config: EITConfig,
    omegas=None,
    deltas=None,
    geometry: CoolingGeometry | None = None,
) -> list:
    """Steady-state phonon number versus mode frequency or AC Stark shift.

    Exactly one of ``omegas`` (sweep the mode frequency at fixed lasers) or
    ``deltas`` (sweep the AC Stark shift by adjusting the coupling Rabi
    frequency, at the fixed mode in ``geometry``) must be given.  The
    geometric prefactor cancels in n_ss, so ``geometry`` is optional for
    omega sweeps (unit prefactor is then reported in A+/-).

    Per-point solver failures are recorded in the row and the sweep continues.
    """
    if (omegas is None) == (deltas is None):
        raise ValueError("specify exactly one of omegas or deltas")
    rows = []
    if omegas is not None:
        for omega in omegas:
            omega = float(omega)
            if omega <= 0:
                raise ValueError("sweep frequencies must be positive")
            geo = (
                replace(geometry, omega=omega)
                if geometry is not None
                else CoolingGeometry(omega=omega, eta=1.0, cos_phi=1.0)
            )
            rows.append(_sweep_point(config, geo, omega))
    else:
        if geometry is None:
            raise ValueError("a mode geometry is required to sweep the AC Stark shift")
        for delta in deltas:
            delta = float(delta)
            if delta <= 0:
                raise ValueError("sweep shifts must be positive")
            omega_sigma = coupling_for_target_shift(delta, config.delta_sigma)
            cfg = replace(config, omega_sigma=omega_sigma)
            rows.append(_sweep_point(cfg, geometry, delta))
    return rows


def _sweep_point(config: EITConfig, geometry: CoolingGeometry, value: float) -> SweepPoint:
    try:
        a_plus, a_minus = cooling_coefficients(config, geometry)
    except Exception as exc:  # per-point failure: record and continue
        return SweepPoint(value, math.nan, math.nan, math.nan, False, error=str(exc))
    n_ss, cooled = _n_ss(a_plus, a_minus)
    return SweepPoint(value, a_plus, a_minus, n_ss, cooled)


def multimode_report(config: EITConfig, geometries) -> list:
    """Per-mode cooling report under one shared laser configuration."""
    reports = []
    for geo in geometries:
        a_plus, a_minus = cooling_coefficients(config, geo)
        reports.append(
            CoolingReport(label=geo.label, omega=geo.omega, a_plus=a_plus, a_minus=a_minus)
        )
    return reports
