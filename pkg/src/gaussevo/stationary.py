"""Stationary states: the vector Gamma, existence, and positivity conditions.

Every condition is evaluated twice, once through Gamma and once through the
componentwise polynomial inequality, and the two verdicts are compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import MasterEqCoefficients, dot
from .errors import DomainViolation, SingularGamma
from .propagator import gamma_vector_raw, omega_of

BOUNDARY_TOL = 1e-9

Reason = Literal["ok", "gamma_nonpositive", "overdamped_omega_ge_gamma"]
Verdict = Literal["true", "false", "boundary"]


def gamma_vector(c: MasterEqCoefficients) -> np.ndarray:
    """Gamma = (-gamma^2 eta + (th.eta) th + gamma th^eta) / (gamma (gamma^2 - omega^2))."""
    g = c.gamma
    w2 = omega_of(c).omega_sq
    if g == 0:
        raise SingularGamma("Gamma undefined at gamma = 0")
    if abs(g * g - w2) <= 1e-10 * max(g * g, abs(w2)):
        raise SingularGamma("Gamma undefined at gamma**2 = omega**2")
    return gamma_vector_raw(c)


def existence(c: MasterEqCoefficients) -> tuple[bool, Reason]:
    """Stationary states exist iff gamma > 0 and, when overdamped, omega < gamma."""
    if not c.gamma > 0:
        return False, "gamma_nonpositive"
    w2 = omega_of(c).omega_sq
    if w2 > 0 and np.sqrt(w2) >= c.gamma:
        return False, "overdamped_omega_ge_gamma"
    return True, "ok"


def _verdict(margin: float, tol: float = BOUNDARY_TOL) -> Verdict:
    if abs(margin) <= tol:
        return "boundary"
    return "true" if margin > 0 else "false"


def well_behaved_componentwise(c: MasterEqCoefficients) -> float:
    """gamma (gamma^2 - omega^2)(Gamma0 - Gamma1), expanded in the coefficients."""
    g = c.gamma
    t0, t1, t2 = c.theta_arr
    e0, e1, e2 = c.eta_arr
    return g * (-e0 + e1) * (g - t2) + (t0 - t1) * (-t0 * e0 + t1 * e1) - e2 * (t0 - t1) * (g - t2)


def positivity_componentwise(c: MasterEqCoefficients) -> float:
    """(th.eta)^2 - gamma^2 eta.eta - gamma^2 (gamma^2 - th.th); >= 0 for positive states."""
    g = c.gamma
    th, eta = c.theta_arr, c.eta_arr
    return dot(th, eta) ** 2 - g * g * dot(eta, eta) - g * g * (g * g - dot(th, th))


def factorized_polynomial(c: MasterEqCoefficients) -> float:
    """eta2 (th2^2 - gamma^2) + eta0 (-th0 th2 + gamma th1) + eta1 (th1 th2 - gamma th0)."""
    g = c.gamma
    t0, t1, t2 = c.theta_arr
    e0, e1, e2 = c.eta_arr
    return e2 * (t2 * t2 - g * g) + e0 * (-t0 * t2 + g * t1) + e1 * (t1 * t2 - g * t0)


def factorized_residual(c: MasterEqCoefficients) -> float:
    """|factorized polynomial| divided by the cube of the coefficient scale."""
    return abs(factorized_polynomial(c)) / c.scale() ** 3


def dekker_vs_generic(c: MasterEqCoefficients) -> tuple[bool, bool]:
    """(-eta.eta >= gamma^2, (th.eta)^2/gamma^2 + th.th - eta.eta >= gamma^2)."""
    g = c.gamma
    if not g > 0:
        raise DomainViolation("dekker_vs_generic needs gamma > 0")
    th, eta = c.theta_arr, c.eta_arr
    dekker = -dot(eta, eta) >= g * g
    generic = dot(th, eta) ** 2 / (g * g) + dot(th, th) - dot(eta, eta) >= g * g
    return bool(dekker), bool(generic)


@dataclass(frozen=True)
class StationaryReport:
    """Stationary-state summary.

    ``gamma_vec`` is None when Gamma is undefined. The stationary parameters
    are None unless the state exists; they are reported even when the state
    is not well behaved, in which case mu_st < 0. ``well_behaved`` and ``positive`` are
    booleans that count the boundary as satisfied; the companion
    ``*_verdict`` fields distinguish ``"boundary"`` (within 1e-9 of equality).
    """

    gamma_vec: np.ndarray | None
    exists: bool
    reason: Reason
    mu_st: float | None
    kappa_st: float | None
    nu_st: float | None
    well_behaved: bool | None
    well_behaved_verdict: Verdict | None
    positive: bool | None
    positive_verdict: Verdict | None
    positivity_margin: float | None
    factorized_residual: float
    gibbs: bool | None
    componentwise_agrees: bool | None


def stationary_params(c: MasterEqCoefficients) -> StationaryReport:
    """Full stationary report; failures are carried as reasons, never raised."""
    exists, reason = existence(c)
    fres = factorized_residual(c)
    try:
        gam = gamma_vector(c)
    except SingularGamma:
        return StationaryReport(None, exists, reason, None, None, None, None, None, None, None, None, fres, None, None)
    g = c.gamma
    w2 = omega_of(c).omega_sq
    diff = gam[0] - gam[1]
    margin = float(-dot(gam, gam) - 1)
    wb_v, pos_v = _verdict(diff), _verdict(margin)

    agrees = None
    if exists:
        # both componentwise forms carry the positive factor gamma (gamma^2 - omega^2)
        pref = g * (g * g - w2)
        wb_c = _verdict(well_behaved_componentwise(c) / pref)
        pos_c = _verdict(positivity_componentwise(c) / (g * pref))
        agrees = _consistent(wb_v, wb_c) and _consistent(pos_v, pos_c)

    mu_st = kappa_st = nu_st = None
    if exists and diff != 0:
        mu_st = 1 / (2 * diff)
        kappa_st = -gam[2] / diff
        nu_st = margin / (2 * diff)
    gibbs = None
    if exists:
        gibbs = bool(abs(gam[1]) <= 1e-9 * abs(gam[0]) and abs(gam[2]) <= 1e-9 * abs(gam[0]))
    return StationaryReport(
        gamma_vec=gam,
        exists=exists,
        reason=reason,
        mu_st=mu_st,
        kappa_st=kappa_st,
        nu_st=nu_st,
        well_behaved=wb_v != "false",
        well_behaved_verdict=wb_v,
        positive=pos_v != "false",
        positive_verdict=pos_v,
        positivity_margin=margin,
        factorized_residual=fres,
        gibbs=gibbs,
        componentwise_agrees=agrees,
    )


def _consistent(a: Verdict, b: Verdict) -> bool:
    return a == b or "boundary" in (a, b)
