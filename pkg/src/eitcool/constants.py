"""Frozen physical constants (CODATA 2018 values).

All numbers used by the simulator live here so that golden CSV outputs are
bit-stable across runs and machines.
"""

HBAR = 1.054571817e-34  # J s
H_PLANCK = 6.62607015e-34  # J s
K_B = 1.380649e-23  # J/K
MU_B = 9.2740100783e-24  # J/T
ATOMIC_MASS = 1.66053906660e-27  # kg
GAUSS_TO_TESLA = 1e-4

# 40Ca+ specifics
CA40_MASS_AMU = 39.962590866
CA40_MASS = CA40_MASS_AMU * ATOMIC_MASS  # kg

CONSTANTS_VERSION = "codata2018-v1"


def constants_table() -> dict:
    """Return the frozen constant table as an ordered name -> value dict."""
    return {
        "hbar_J_s": HBAR,
        "h_J_s": H_PLANCK,
        "k_B_J_per_K": K_B,
        "mu_B_J_per_T": MU_B,
        "atomic_mass_kg": ATOMIC_MASS,
        "ca40_mass_kg": CA40_MASS,
        "gauss_to_tesla": GAUSS_TO_TESLA,
        "version": CONSTANTS_VERSION,
    }
