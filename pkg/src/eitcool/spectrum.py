"""Cooling-laser scattering spectrum W(delta_pi) and Fano features.

Detuning conventions used throughout this module match the usual dressed-atom
description: ``delta_sigma`` is the coupling-laser detuning from the
|S,-> -> |P,+> transition and ``delta_pi`` the cooling-laser detuning from
|S,+> -> |P,+>, both including Zeeman shifts.  The two-photon (dark) resonance
then sits at delta_pi = delta_sigma for every field strength.

W is the per-beam absorbed-photon rate, the sum over couplings driven by the
beam of Im(Omega_eff * rho[lower, upper]).  This equals Gamma times the upper
population when a single beam scatters, and the per-beam rates always sum to
Gamma * P_total in steady state (photon-rate balance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import minimize_scalar

from .atom import (
    Beam,
    LevelScheme,
    MagneticField,
    circular_polarization,
    linear_polarization_in_plane,
    zeeman_splitting,
)
from .liouville import (
    BeamSet,
    DrivenSystem,
    Liouvillian,
    build_liouvillian,
    build_system,
    periodic_harmonics,
    static_approximation,
    steady_state,
)

_SQRT13 = math.sqrt(1.0 / 3.0)
_SQRT23 = math.sqrt(2.0 / 3.0)


class DegenerateFeatureError(RuntimeError):
    """The spectrum has no EIT structure (e.g. coupling laser off)."""


class BracketError(ValueError):
    """The scan range does not bracket the requested feature."""


def ac_stark_shift(omega_sigma: float, delta_sigma: float) -> float:
    """Light shift of the dressed |P,+> level, exact two-level expression."""
    return 0.5 * (math.hypot(omega_sigma, delta_sigma) - abs(delta_sigma))


def ac_stark_shift_approx(omega_sigma: float, delta_sigma: float) -> float:
    """Far-detuned approximation Omega^2 / (4 Delta)."""
    if delta_sigma == 0:
        raise ValueError("approximate branch undefined at delta_sigma = 0")
    return omega_sigma**2 / (4 * delta_sigma)


def coupling_for_target_shift(omega_mode: float, delta_sigma: float) -> float:
    """Coupling Rabi frequency that makes the AC Stark shift equal omega_mode.

    Exact inversion of the shift formula: Omega = 2 sqrt(w (w + |Delta|)).
    """
    if omega_mode <= 0 or delta_sigma <= 0:
        raise ValueError("omega_mode and delta_sigma must be positive")
    return 2.0 * math.sqrt(omega_mode * (omega_mode + abs(delta_sigma)))


def coupling_for_target_shift_approx(omega_mode: float, delta_sigma: float) -> float:
    """The 2 sqrt(w Delta) approximation to the inversion above."""
    return 2.0 * math.sqrt(omega_mode * delta_sigma)


def dressed_state(omega_sigma: float, delta_sigma: float):
    """Coefficients of the bright dressed state on (|S,->, |P,+>)."""
    if omega_sigma == 0 and delta_sigma == 0:
        raise ValueError("dressed state undefined at zero coupling and detuning")
    delta = ac_stark_shift(omega_sigma, delta_sigma)
    norm = math.sqrt(4 * delta**2 + omega_sigma**2)
    if norm == 0:
        return (1.0, 0.0)
    return (omega_sigma / norm, 2 * delta / norm)


@dataclass(frozen=True)
class SpectrumSample:
    detuning_pi: float
    w: float  # cooling-beam scattering rate, photons/s
    rho_p_total: float


@dataclass(frozen=True)
class FanoFeatures:
    dark_point: float
    bright_peak: float

    @property
    def stark_shift(self) -> float:
        return self.bright_peak - self.dark_point


@dataclass(frozen=True)
class EITConfig:
    """Laser/field configuration for one cooling spectrum.

    ``omega_sigma`` and ``omega_pi`` are effective transition Rabi frequencies
    (sigma+ on S- -> P+, pi on S+ -> P+), the quantities entering the dressed
    state formulas; bare beam Rabi frequencies are recovered internally by
    dividing out polarization projection and CG factors.
    """

    omega_sigma: float
    omega_pi: float
    delta_sigma: float
    delta_pi: float
    variant: str = "three_level"
    b_gauss: float = 4.4
    beam_angle: float = math.radians(125.0)  # between cooling and coupling k
    wavelength: float = 397e-9
    scheme: LevelScheme = dc_field(default_factory=LevelScheme)
    solver: str = "auto"  # auto | harmonic | static_approx | propagate

    @property
    def field(self) -> MagneticField:
        return MagneticField(magnitude=self.b_gauss)

    def k_vectors(self):
        """(k_cooling, k_coupling) in 1/m; coupling propagates along B."""
        k = 2 * math.pi / self.wavelength
        k_r = np.array([0.0, 0.0, k])
        k_g = k * np.array([math.sin(self.beam_angle), 0.0, math.cos(self.beam_angle)])
        return k_g, k_r

    def beams(self, delta_pi: float | None = None) -> BeamSet:
        """Construct the physical beam pair for this configuration."""
        if delta_pi is None:
            delta_pi = self.delta_pi
        delta_s, delta_p = zeeman_splitting(self.scheme, self.field)
        # transition-referenced -> zero-field-referenced detunings
        nu_c = self.delta_sigma + 0.5 * (delta_p + delta_s)
        nu_g = delta_pi + 0.5 * (delta_p - delta_s)

        coupling = Beam(
            label="coupling",
            rabi=self.omega_sigma / _SQRT23,
            detuning=nu_c,
            k_hat=(0.0, 0.0, 1.0),
            wavelength=self.wavelength,
            polarization=tuple(circular_polarization(+1, (1, 0, 0), (0, 1, 0))),
            transverse_axis=(1.0, 0.0, 0.0),
        )

        if self.variant == "four_level_geometry":
            k_hat = (math.sin(self.beam_angle), 0.0, math.cos(self.beam_angle))
            pol = linear_polarization_in_plane(k_hat, (0, 0, 1))
            amp_pi = abs(math.sin(self.beam_angle))
        else:
            # idealized pi light perpendicular to B
            k_hat = (1.0, 0.0, 0.0)
            pol = np.array([0.0, 0.0, 1.0])
            amp_pi = 1.0
        cooling = Beam(
            label="cooling",
            rabi=self.omega_pi / (amp_pi * _SQRT13),
            detuning=nu_g,
            k_hat=k_hat,
            wavelength=self.wavelength,
            polarization=tuple(pol),
        )
        return BeamSet(coupling=coupling, cooling=cooling)

    def system(self, delta_pi: float | None = None) -> DrivenSystem:
        return build_system(self.scheme, self.field, self.beams(delta_pi), self.variant)


def beam_scattering_rates(system: DrivenSystem, harmonics: dict) -> dict:
    """Absorbed-photon rate per beam from the (harmonic) steady state.

    ``harmonics`` maps Fourier index k to rho_k; a static solution is passed
    as {0: rho}.  Static couplings read rho_0, the beat-modulated coupling
    reads rho_{+1}.
    """
    rates: dict = {}
    for c in system.couplings:
        k = 1 if c.oscillates else 0
        rho = harmonics.get(k)
        rate = 0.0 if rho is None else float(np.imag(c.rabi_eff * rho[c.lower, c.upper]))
        rates[c.beam] = rates.get(c.beam, 0.0) + rate
    return rates


def _solve(config: EITConfig, system: DrivenSystem):
    """Return {k: rho_k} for the configured solver."""
    liouv = build_liouvillian(system)
    if not liouv.periodic:
        return {0: steady_state(liouv)}
    solver = config.solver
    if solver in ("auto", "harmonic"):
        return periodic_harmonics(liouv)
    if solver == "static_approx":
        folded = static_approximation(liouv)
        rho = steady_state(folded)
        # every coupling reads rho_0 in this mode
        return {0: rho, 1: rho}
    if solver == "propagate":
        from .liouville import periodic_steady_state

        rho = periodic_steady_state(liouv, relax_time=20.0 / system.gamma)
        return {0: rho, 1: rho}
    raise ValueError(f"unknown solver {solver!r}")


def scattering_rate(config: EITConfig, delta_pi: float | None = None) -> SpectrumSample:
    """Steady-state cooling-beam scattering rate at the given detuning."""
    if delta_pi is None:
        delta_pi = config.delta_pi
    system = config.system(delta_pi)
    harmonics = _solve(config, system)
    rates = beam_scattering_rates(system, harmonics)
    rho0 = harmonics[0]
    p_total = float(sum(rho0[i, i].real for i in system.excited_indices()))
    return SpectrumSample(
        detuning_pi=delta_pi,
        w=rates.get("cooling", 0.0),
        rho_p_total=p_total,
    )


def scan_spectrum(config: EITConfig, detunings) -> list:
    """W(delta_pi) over an ordered list of cooling detunings."""
    return [scattering_rate(config, float(d)) for d in sorted(detunings)]


def fano_features(
    config: EITConfig,
    scan_lo: float,
    scan_hi: float,
    points: int = 400,
) -> FanoFeatures:
    """Locate the dark point (min W) and bright peak (max W) of the spectrum.

    Grid scan followed by golden-section refinement of each extremum to a
    resolution of 1e-4 times the closed-form AC Stark shift.
    """
    if config.omega_sigma == 0:
        raise DegenerateFeatureError("no coupling laser: spectrum has no EIT features")
    delta = ac_stark_shift(config.omega_sigma, config.delta_sigma)
    if not (scan_lo < config.delta_sigma < scan_hi):
        raise BracketError("scan range does not bracket the dark point")
    if not (scan_lo < config.delta_sigma + delta < scan_hi):
        raise BracketError("scan range does not bracket the bright peak")
    grid = np.linspace(scan_lo, scan_hi, points)
    w = np.array([scattering_rate(config, float(d)).w for d in grid])

    def refine(idx, sign):
        if idx == 0 or idx == len(grid) - 1:
            raise BracketError("feature extremum sits at the scan boundary")
        try:
            res = minimize_scalar(
                lambda d: sign * scattering_rate(config, float(d)).w,
                bracket=(grid[idx - 1], grid[idx], grid[idx + 1]),
                method="golden",
                options={"xtol": 1e-4 * delta / max(abs(grid[idx]), 1.0)},
            )
        except ValueError:
            # flat extremum at numerical noise level: the grid point is as
            # good as any refinement
            return float(grid[idx])
        return float(res.x)

    dark = refine(int(np.argmin(w)), +1)
    bright = refine(int(np.argmax(w)), -1)
    return FanoFeatures(dark_point=dark, bright_peak=bright)
