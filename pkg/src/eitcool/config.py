"""Run configuration: flat dotted-key text format, schema, validation.

Unit conventions (the single most error-prone decision, so it lives here and
nowhere else): keys ending in ``_hz`` are ordinary frequencies in Hz and are
converted to angular frequencies (rad/s) on access; keys ending in ``_deg``
are degrees, converted to radians; ``_s`` seconds; ``_nm`` nanometers.
"""

from __future__ import annotations

import difflib
import hashlib
import math
from dataclasses import dataclass, field

from .atom import LevelScheme
from .constants import ATOMIC_MASS
from .spectrum import EITConfig

TASKS = ("spectrum", "sweep-omega", "sweep-delta", "dynamics", "multimode", "thermometry")
VARIANT_CHOICES = ("three_level", "four_level_ideal", "four_level_geometry", "all")
FIG2_VARIANTS = ("three_level", "four_level_ideal", "four_level_geometry")


class ConfigError(ValueError):
    """Configuration file failed to parse or validate."""


def angular(ordinary_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return 2.0 * math.pi * ordinary_hz


# key -> (type, default); REQUIRED entries have no default
_REQUIRED = object()
_SCHEMA = {
    "task": (str, _REQUIRED),
    "variant": (str, "four_level_geometry"),
    "output": (str, None),
    "ion.mass_amu": (float, 39.962590866),
    "ion.wavelength_nm": (float, 397.0),
    "ion.linewidth_hz": (float, 20e6),
    "field.gauss": (float, 4.4),
    "beams.coupling.rabi_hz": (float, 21.4e6),
    "beams.coupling.detuning_hz": (float, 70e6),
    "beams.cooling.rabi_hz": (float, 3e6),
    "beams.cooling.detuning_hz": (float, 70e6),
    "geometry.beam_angle_deg": (float, 125.0),
    "trap.omega_x_hz": (float, _REQUIRED),
    "trap.omega_y_hz": (float, _REQUIRED),
    "trap.omega_z_hz": (float, _REQUIRED),
    "trap.phi_x_deg": (float, 66.0),
    "trap.phi_y_deg": (float, 71.0),
    "trap.phi_z_deg": (float, 31.0),
    "mode": (str, "y"),
    "sweep.start_hz": (float, _REQUIRED),
    "sweep.stop_hz": (float, _REQUIRED),
    "sweep.points": (int, 57),
    "dynamics.n0": (float, 16.0),
    "dynamics.t_max_s": (float, 7.9e-3),
    "dynamics.points": (int, 80),
    "multimode.modes": (str, "y,z"),
    "thermometry.n_bar": (float, 16.0),
    "thermometry.eta_probe": (float, 0.03),
    "thermometry.rabi_hz": (float, 100e3),
    "thermometry.sideband": (str, "blue"),
    "thermometry.t_max_s": (float, 2e-3),
    "thermometry.points": (int, 120),
}

# keys that must be present (no fallback) per task
_TASK_REQUIRES = {
    "spectrum": ("sweep.start_hz", "sweep.stop_hz"),
    "sweep-omega": ("sweep.start_hz", "sweep.stop_hz"),
    "sweep-delta": ("sweep.start_hz", "sweep.stop_hz", "trap.omega_y_hz",
                    "trap.omega_x_hz", "trap.omega_z_hz"),
    "dynamics": ("trap.omega_x_hz", "trap.omega_y_hz", "trap.omega_z_hz"),
    "multimode": ("trap.omega_x_hz", "trap.omega_y_hz", "trap.omega_z_hz"),
    "thermometry": (),
}


def _parse_value(raw: str, lineno: int):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if not key or not raw:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(raw, lineno)
    return values


@dataclass(frozen=True)
class RunConfig:
    """Fully-resolved run configuration with provenance."""

    values: dict
    applied_defaults: tuple
    sha256: str
    source: str = ""

    def __getitem__(self, key):
        return self.values[key]

    # --- derived physics objects -------------------------------------------

    @property
    def task(self) -> str:
        return self.values["task"]

    @property
    def output_name(self) -> str:
        return self.values["output"] or f"{self.task}.csv"

    def scheme(self) -> LevelScheme:
        return LevelScheme(gamma=angular(self.values["ion.linewidth_hz"]))

    def eit_config(self, variant: str | None = None,
                   omega_sigma: float | None = None) -> EITConfig:
        v = variant or self.values["variant"]
        return EITConfig(
            omega_sigma=(omega_sigma if omega_sigma is not None
                         else angular(self.values["beams.coupling.rabi_hz"])),
            omega_pi=angular(self.values["beams.cooling.rabi_hz"]),
            delta_sigma=angular(self.values["beams.coupling.detuning_hz"]),
            delta_pi=angular(self.values["beams.cooling.detuning_hz"]),
            variant=v,
            b_gauss=self.values["field.gauss"],
            beam_angle=math.radians(self.values["geometry.beam_angle_deg"]),
            wavelength=self.values["ion.wavelength_nm"] * 1e-9,
            scheme=self.scheme(),
        )

    def ion_mass(self) -> float:
        return self.values["ion.mass_amu"] * ATOMIC_MASS

    def trap_omega(self, label: str) -> float:
        return angular(self.values[f"trap.omega_{label}_hz"])

    def trap_phi(self, label: str) -> float:
        return math.radians(self.values[f"trap.phi_{label}_deg"])

    def delta_k_magnitude(self) -> float:
        k = 2.0 * math.pi / (self.values["ion.wavelength_nm"] * 1e-9)
        return 2.0 * k * math.sin(math.radians(self.values["geometry.beam_angle_deg"]) / 2.0)


def resolve(values: dict) -> RunConfig:
    """Validate raw key/value pairs against the schema and apply defaults."""
    for key in values:
        if key not in _SCHEMA:
            close = difflib.get_close_matches(key, _SCHEMA.keys(), n=1)
            hint = f"; nearest valid key: {close[0]!r}" if close else ""
            raise ConfigError(f"unknown key {key!r}{hint}")
    if "task" not in values:
        raise ConfigError("missing required key 'task'")
    task = values["task"]
    if task not in TASKS:
        raise ConfigError(f"task must be one of {TASKS}, got {task!r}")
    for key in _TASK_REQUIRES[task]:
        if key not in values and _SCHEMA[key][1] is _REQUIRED:
            raise ConfigError(f"task {task!r} requires key {key!r}")
    resolved = {}
    applied = []
    for key, (typ, default) in _SCHEMA.items():
        if key in values:
            val = values[key]
            if typ is float and isinstance(val, int):
                val = float(val)
            if not isinstance(val, typ):
                raise ConfigError(
                    f"key {key!r}: expected {typ.__name__}, got {val!r}"
                )
            resolved[key] = val
        elif default is _REQUIRED:
            if key in _TASK_REQUIRES[task]:
                raise ConfigError(f"task {task!r} requires key {key!r}")
            resolved[key] = None
        else:
            resolved[key] = default
            applied.append(key)
    variant = resolved["variant"]
    if variant not in VARIANT_CHOICES:
        raise ConfigError(f"variant must be one of {VARIANT_CHOICES}, got {variant!r}")
    if variant == "all" and task not in ("sweep-omega", "spectrum"):
        raise ConfigError("variant 'all' is only meaningful for sweep-omega/spectrum tasks")
    if resolved["thermometry.sideband"] not in ("red", "blue"):
        raise ConfigError("thermometry.sideband must be 'red' or 'blue'")
    if resolved["mode"] not in ("x", "y", "z"):
        raise ConfigError("mode must be one of x, y, z")
    for key in ("sweep.points", "dynamics.points", "thermometry.points"):
        if resolved[key] is not None and resolved[key] < 2:
            raise ConfigError(f"{key} must be >= 2")
    for key, val in resolved.items():
        if key.endswith("_hz") and val is not None and val <= 0:
            raise ConfigError(f"{key} must be positive")
        if key.endswith("_deg") and val is not None and not (0.0 <= val <= 180.0):
            raise ConfigError(f"{key} must lie in [0, 180] degrees")
    digest = hashlib.sha256(
        "\n".join(f"{k}={resolved[k]!r}" for k in sorted(resolved)).encode()
    ).hexdigest()
    return RunConfig(values=resolved, applied_defaults=tuple(applied), sha256=digest)


def load_config(path) -> RunConfig:
    """Load, parse and validate a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    values = parse_config_text(text)
    cfg = resolve(values)
    return RunConfig(
        values=cfg.values,
        applied_defaults=cfg.applied_defaults,
        sha256=cfg.sha256,
        source=str(path),
    )
