import math

import numpy as np
import pytest

from eitcool import EITConfig

TP = 2 * math.pi

FIG2 = dict(
    omega_sigma=TP * 21.4e6,
    omega_pi=TP * 3e6,
    delta_sigma=TP * 70e6,
    delta_pi=TP * 70e6,
)


def fig2_config(variant: str, **overrides) -> EITConfig:
    params = {**FIG2, **overrides}
    return EITConfig(variant=variant, **params)


def random_static_config(rng: np.random.Generator, min_gap: float = 0.1) -> EITConfig:
    """Random non-degenerate static configuration with spectral gap >= min_gap * Gamma.

    Rejection-samples until the slowest nonzero Liouvillian mode decays faster
    than min_gap * Gamma, so a 200/Gamma propagation settles well below 1e-7.
    """
    from eitcool.liouville import build_liouvillian

    gamma = TP * 20e6
    while True:
        variant = rng.choice(["three_level", "four_level_ideal"])
        dsig = rng.uniform(0.2, 1.5) * gamma * rng.choice([-1, 1])
        dpi = dsig + rng.uniform(0.1, 1.0) * gamma * rng.choice([-1, 1])
        cfg = EITConfig(
            variant=str(variant),
            omega_sigma=rng.uniform(0.3, 1.2) * gamma,
            omega_pi=rng.uniform(0.3, 1.2) * gamma,
            delta_sigma=dsig,
            delta_pi=dpi,
        )
        liouv = build_liouvillian(cfg.system())
        eigs = np.linalg.eigvals(liouv.l0 / gamma)
        gap = -np.sort(eigs.real)[-2]
        if gap >= min_gap:
            return cfg


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260824)
