"""Task orchestration and deterministic CSV/report emission."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import FIG2_VARIANTS, RunConfig, angular
from .constants import CONSTANTS_VERSION
from .cooling import (
    TrapMode,
    cooling_coefficients,
    evolve_n,
    geometry_from_angle,
    multimode_report,
    steady_state_n_sweep,
)
from .thermometry import (
    ThermalState,
    fit_thermal,
    sideband_flops,
    sideband_ratio_n,
    time_averaged_excitation,
)

_AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _mode_geometry(config: RunConfig, label: str):
    mode = TrapMode(
        omega=config.trap_omega(label),
        axis=_AXES[label],
        mass=config.ion_mass(),
        label=label,
    )
    return geometry_from_angle(mode, config.delta_k_magnitude(), config.trap_phi(label))


def _run_spectrum(config: RunConfig, threads: int):
    detunings = np.linspace(
        angular(config["sweep.start_hz"]),
        angular(config["sweep.stop_hz"]),
        config["sweep.points"],
    )
    variants = (
        FIG2_VARIANTS if config["variant"] == "all" else (config["variant"],)
    )
    header = ["variant", "delta_pi_hz", "W_per_s", "rho_P_total"]
    rows = []
    for variant in variants:
        eit = config.eit_config(variant=variant)
        from .spectrum import scattering_rate

        samples = _map(lambda d: scattering_rate(eit, float(d)), detunings, threads)
        for sample in samples:
            rows.append(
                [variant, sample.detuning_pi / (2 * math.pi), sample.w, sample.rho_p_total]
            )
    return header, rows, {}


def _run_sweep_omega(config: RunConfig, threads: int):
    omegas = np.linspace(
        angular(config["sweep.start_hz"]),
        angular(config["sweep.stop_hz"]),
        config["sweep.points"],
    )
    variants = (
        FIG2_VARIANTS if config["variant"] == "all" else (config["variant"],)
    )
    header = ["variant", "omega_hz", "n_ss"]
    rows = []
    for variant in variants:
        eit = config.eit_config(variant=variant)
        points = _map(
            lambda w: steady_state_n_sweep(eit, omegas=[w])[0], omegas, threads
        )
        for pt in points:
            rows.append([variant, pt.value / (2 * math.pi), pt.n_ss])
    return header, rows, {}


def _run_sweep_delta(config: RunConfig, threads: int):
    deltas = np.linspace(
        angular(config["sweep.start_hz"]),
        angular(config["sweep.stop_hz"]),
        config["sweep.points"],
    )
    geometry = _mode_geometry(config, config["mode"])
    eit = config.eit_config()
    points = _map(
        lambda d: steady_state_n_sweep(eit, deltas=[d], geometry=geometry)[0],
        deltas,
        threads,
    )
    header = ["delta_hz", "n_ss"]
    rows = [[pt.value / (2 * math.pi), pt.n_ss] for pt in points]
    failed = [pt for pt in points if pt.error]
    meta = {"failed_points": str(len(failed))} if failed else {}
    return header, rows, meta


def _run_dynamics(config: RunConfig, threads: int):
    geometry = _mode_geometry(config, config["mode"])
    eit = config.eit_config()
    a_plus, a_minus = cooling_coefficients(eit, geometry)
    times = np.linspace(0.0, config["dynamics.t_max_s"], config["dynamics.points"])
    header = ["t_s", "n_bar"]
    rows = [[float(t), evolve_n(a_plus, a_minus, config["dynamics.n0"], float(t))]
            for t in times]
    meta = {
        "a_plus_per_s": _fmt(a_plus),
        "a_minus_per_s": _fmt(a_minus),
        "time_constant_s": _fmt(1.0 / (a_minus - a_plus)) if a_minus > a_plus else "inf",
    }
    return header, rows, meta


def _run_multimode(config: RunConfig, threads: int):
    labels = [m.strip() for m in config["multimode.modes"].split(",") if m.strip()]
    geometries = [_mode_geometry(config, label) for label in labels]
    eit = config.eit_config()
    reports = multimode_report(eit, geometries)
    header = [
        "mode", "omega_hz", "a_plus_per_s", "a_minus_per_s", "rate_per_s",
        "n_ss", "time_constant_s", "eta_sqrt_nss", "cooled",
    ]
    rows = []
    for geo, rep in zip(geometries, reports):
        rows.append([
            rep.label,
            rep.omega / (2 * math.pi),
            rep.a_plus,
            rep.a_minus,
            rep.rate,
            rep.n_ss,
            rep.time_constant,
            rep.lamb_dicke_check(geo.eta),
            rep.cooled,
        ])
    return header, rows, {}


def _run_thermometry(config: RunConfig, threads: int):
    state = ThermalState.from_n_bar(config["thermometry.n_bar"])
    eta = config["thermometry.eta_probe"]
    omega0 = angular(config["thermometry.rabi_hz"])
    times = np.linspace(0.0, config["thermometry.t_max_s"], config["thermometry.points"])
    record = sideband_flops(state, eta, omega0, config["thermometry.sideband"], times)
    fit = fit_thermal(record, eta, omega0)
    meta = {
        "fit_n_bar": _fmt(fit.n_bar),
        "fit_residual": _fmt(fit.residual),
    }
    p_red = time_averaged_excitation(state, "red")
    p_blue = time_averaged_excitation(state, "blue")
    if p_red < p_blue:
        meta["ratio_n_bar"] = _fmt(sideband_ratio_n(p_red, p_blue))
    header = ["t_s", "excitation"]
    rows = [[float(t), float(p)] for t, p in zip(record.times, record.excitation)]
    return header, rows, meta


_TASK_RUNNERS = {
    "spectrum": _run_spectrum,
    "sweep-omega": _run_sweep_omega,
    "sweep-delta": _run_sweep_delta,
    "dynamics": _run_dynamics,
    "multimode": _run_multimode,
    "thermometry": _run_thermometry,
}


def run(config: RunConfig, out_dir, threads: int = 1, verbose: bool = False) -> Path:
    """Execute the configured task; write <output>.csv and a .meta sidecar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header, rows, extra_meta = _TASK_RUNNERS[config.task](config, threads)

    csv_path = out_dir / config.output_name
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(f"# eitcool {config.task}\n")
        fh.write(f"# config_sha256 = {config.sha256}\n")
        fh.write(f"# constants = {CONSTANTS_VERSION}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")

    meta_path = csv_path.with_suffix(csv_path.suffix + ".meta")
    with open(meta_path, "w", encoding="utf-8") as fh:
        fh.write(f"config_sha256 = {config.sha256}\n")
        fh.write(f"constants = {CONSTANTS_VERSION}\n")
        for key in sorted(config.values):
            marker = "  # default" if key in config.applied_defaults else ""
            fh.write(f"{key} = {config.values[key]!r}{marker}\n")
        for key in sorted(extra_meta):
            fh.write(f"result.{key} = {extra_meta[key]}\n")

    if verbose:
        print(f"wrote {csv_path} ({len(rows)} rows) and {meta_path}")
    return csv_path
