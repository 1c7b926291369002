"""Shared random draws for the test suite."""

from __future__ import annotations

import numpy as np

from gaussevo.algebra import MasterEqCoefficients
from gaussevo.evolution import GaussianParams
from gaussevo.propagator import near_critical, omega_of
from gaussevo.stationary import existence, stationary_params


def draw_physical(rng: np.random.Generator, gamma=(0.5, 2.0), stable: bool = True) -> MasterEqCoefficients:
    """Physically valid coefficients away from the critical point and gamma = +-omega.

    ``stable`` additionally requires a well-behaved stationary state, which
    rules out finite-time blow-up of mu.
    """
    while True:
        g = rng.uniform(*gamma)
        t0 = rng.uniform(0.5, 3.0)
        t1 = rng.uniform(-0.9, 0.9) * t0
        t2 = rng.uniform(-2.0, 2.0)
        e0 = rng.uniform(-3.0, -0.1)
        e1 = rng.uniform(e0, -e0)
        e2 = rng.uniform(-2.0, 2.0)
        c = MasterEqCoefficients.from_values(g, t0, t1, t2, e0, e1, e2).validate("physical")
        w2 = omega_of(c).omega_sq
        if not (existence(c)[0] and not near_critical(c) and abs(g * g - w2) > 0.05):
            continue
        if not stable or stationary_params(c).well_behaved_verdict == "true":
            return c


def draw_init(rng: np.random.Generator) -> GaussianParams:
    return GaussianParams(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2.0))


def rel_err(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))
