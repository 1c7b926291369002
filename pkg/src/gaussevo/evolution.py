"""Gaussian parameters (mu, kappa, nu) along the evolution, and observables.

The density matrix in centre/relative coordinates is

    rho(Q, r) = sqrt(2 mu/pi) exp(-2 mu Q^2 - i kappa Q r - (mu + nu) r^2/2),

normalized so that its diagonal r = 0 integrates to one. Three independent
routes produce (mu, kappa, nu)(t): the closed form, Runge-Kutta integration
of the rate equations, and the 4x4 matrix pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import MasterEqCoefficients, PhiContext, dot, phi, wedge
from .errors import (
    BlowUp,
    ImaginaryResidue,
    NonNormalizable,
    NumericError,
    SingularD22,
    SingularDenominator,
)
from .generators import GeneratorName, assemble_K, blocks, generator_matrix
from .propagator import (
    cosh_minus_one_over,
    g_of_t,
    matrix_exp,
    near_critical,
    omega_of,
    projector_pm,
    sinh_over_omega,
    theta_hat,
)


@dataclass(frozen=True)
class GaussianParams:
    """Gaussian state parameters; fields may be scalars or equal-shape arrays."""

    mu: float
    kappa: float
    nu: float

    @classmethod
    def from_b0(cls, b0: float, kappa0: float = 1.0) -> "GaussianParams":
        """Initial state with 4 mu0 = 1/b0 and mu0 + nu0 = b0."""
        mu0 = 1.0 / (4.0 * b0)
        return cls(mu0, kappa0, b0 - mu0)

    @property
    def s(self):
        """mu + nu, the coefficient of r^2/2."""
        return self.mu + self.nu

    @property
    def is_positive(self):
        return self.nu >= 0


@dataclass(frozen=True)
class SecondMoments:
    xx: float
    pp: float
    xp_sym: float

    @property
    def uncertainty_product(self) -> float:
        return self.xx * self.pp - self.xp_sym**2


def _require_mu(init: GaussianParams) -> None:
    if not init.mu > 0:
        raise ValueError(f"initial mu must be positive, got {init.mu}")


def _realify(z, what: str):
    z = np.asarray(z)
    bound = 1e-8 * (1 + np.abs(z.real))
    if np.any(np.abs(z.imag) > bound):
        raise ImaginaryResidue(f"{what}: imaginary part {np.max(np.abs(z.imag)):.3g} exceeds tolerance")
    return z.real


def _closed_form_printed(c: MasterEqCoefficients, init: GaussianParams, t: np.ndarray):
    om = omega_of(c).omega
    th = theta_hat(c)
    ctx = PhiContext.from_initial(init.mu, init.kappa, init.nu)
    k0, d2 = ctx.kappa0, ctx.delta0_sq
    mu0 = init.mu
    phi_th = phi(th, ctx)
    b_p = th[2] + k0 * (th[0] - th[1])
    c_p = (th[0] - th[1]) * phi_th
    b_c = -0.5 * (th[0] + th[1]) + 0.5 * d2 * (th[0] - th[1])
    c_c = th[2] * phi_th
    g = g_of_t(c, t)
    ep, em, eg = np.exp(om * t), np.exp(-om * t), np.exp(c.gamma * t)
    d_terms = (
        2 * mu0 * eg * (g[0] - g[1]),
        -c_p + 0 * t,
        ep / 2 * (1 + c_p - b_p),
        em / 2 * (1 + c_p + b_p),
    )
    kap = -2 * mu0 * eg * g[2] + c_c + ep / 2 * (k0 - c_c - b_c) + em / 2 * (k0 - c_c + b_c)
    nup = (
        (init.mu + init.nu) * np.exp(-c.gamma * t)
        - mu0 * eg * (dot(g, g) + 1)
        + dot(th, g) * phi_th
        + ep / 2 * phi(projector_pm(-1, g, th), ctx)
        + em / 2 * phi(projector_pm(1, g, th), ctx)
    )
    return d_terms, mu0 * eg, kap, nup


def _closed_form_regular(c: MasterEqCoefficients, init: GaussianParams, t: np.ndarray):
    """Same quantities written with entire functions of omega**2."""
    om = omega_of(c).omega
    th = c.theta_arr
    ctx = PhiContext.from_initial(init.mu, init.kappa, init.nu)
    k0, d2 = ctx.kappa0, ctx.delta0_sq
    mu0 = init.mu
    phi_th = phi(th, ctx)
    b_p = th[2] + k0 * (th[0] - th[1])
    c_p = (th[0] - th[1]) * phi_th
    b_c = -0.5 * (th[0] + th[1]) + 0.5 * d2 * (th[0] - th[1])
    ch, sh, cm = np.cosh(om * t), sinh_over_omega(om, t), cosh_minus_one_over(om, t)
    g = g_of_t(c, t)
    eg = np.exp(c.gamma * t)
    d_terms = (2 * mu0 * eg * (g[0] - g[1]), ch, c_p * cm, -b_p * sh)
    kap = -2 * mu0 * eg * g[2] + k0 * ch - th[2] * phi_th * cm - b_c * sh
    nup = (
        (init.mu + init.nu) * np.exp(-c.gamma * t)
        - mu0 * eg * (dot(g, g) + 1)
        + ch * phi(g, ctx)
        - cm * dot(th, g) * phi_th
        + sh * phi(wedge(th, g), ctx)
    )
    return d_terms, mu0 * eg, kap, nup


def closed_form_arrays(
    c: MasterEqCoefficients, init: GaussianParams, t, form: str = "auto"
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized closed form; returns real arrays (mu, kappa, nu) shaped like ``t``.

    ``form`` selects ``"printed"`` (theta/omega expressions), ``"regular"``
    (entire functions of omega**2) or ``"auto"`` (printed unless near the
    critical point).
    """
    _require_mu(init)
    t = np.asarray(t, dtype=float)
    if form == "auto":
        form = "regular" if near_critical(c) else "printed"
    core = {"printed": _closed_form_printed, "regular": _closed_form_regular}[form]
    d_terms, mup, kap, nup = core(c, init, t)
    d = sum(d_terms)
    lead = np.max(np.abs(np.broadcast_arrays(*d_terms)), axis=0)
    if np.any(np.abs(d) < 1e-12 * lead):
        raise SingularDenominator("D(t) vanished")
    mu = _realify(mup / d, "mu")
    kappa = _realify(kap / d, "kappa")
    nu = _realify(nup / d, "nu")
    return mu, kappa, nu


def evolve_closed_form(c: MasterEqCoefficients, init: GaussianParams, t: float) -> GaussianParams:
    """(mu, kappa, nu) at time ``t`` from the closed-form solution."""
    mu, kappa, nu = closed_form_arrays(c, init, float(t))
    return GaussianParams(float(mu), float(kappa), float(nu))


def rates(c: MasterEqCoefficients, mu: float, kappa: float, s: float) -> tuple[float, float, float]:
    """Right-hand sides for (mu, kappa, s = mu + nu)."""
    g = c.gamma
    t0, t1, t2 = c.theta_arr
    e0, e1, e2 = c.eta_arr
    dmu = (g + t2) * mu + (t0 - t1) * mu * kappa + 2 * (e0 - e1) * mu * mu
    dkappa = (
        0.5 * (t0 + t1)
        + t2 * kappa
        - 0.5 * (t0 - t1) * (4 * mu * s - kappa * kappa)
        + 2 * e2 * mu
        + 2 * (e0 - e1) * mu * kappa
    )
    ds = (
        -0.5 * (e0 + e1)
        - (g - t2) * s
        + (t0 - t1) * s * kappa
        - e2 * kappa
        - 0.5 * (e0 - e1) * kappa * kappa
    )
    return dmu, dkappa, ds


def _rk4_grid(c: MasterEqCoefficients, y0: tuple[float, float, float], times, dt: float) -> np.ndarray:
    # rates() inlined on plain floats; this loop dominates ODE cost
    coeffs = (c.gamma, *(float(x) for x in c.theta_arr), *(float(x) for x in c.eta_arr))
    g, t0, t1, t2, e0, e1, e2 = coeffs
    a, b = t0 - t1, e0 - e1
    p, q = 0.5 * (t0 + t1), 0.5 * (e0 + e1)

    def f(mu, k, s):
        return (
            (g + t2) * mu + a * mu * k + 2 * b * mu * mu,
            p + t2 * k - 0.5 * a * (4 * mu * s - k * k) + 2 * e2 * mu + 2 * b * mu * k,
            -q - (g - t2) * s + a * s * k - e2 * k - 0.5 * b * k * k,
        )

    mu, k, s = y0
    out = np.empty((len(times), 3))
    now = 0.0
    for i, target in enumerate(times):
        n = max(1, math.ceil((target - now) / dt - 1e-9)) if target > now else 0
        h = (target - now) / n if n else 0.0
        for j in range(n):
            a1, b1, c1 = f(mu, k, s)
            a2, b2, c2 = f(mu + 0.5 * h * a1, k + 0.5 * h * b1, s + 0.5 * h * c1)
            a3, b3, c3 = f(mu + 0.5 * h * a2, k + 0.5 * h * b2, s + 0.5 * h * c2)
            a4, b4, c4 = f(mu + h * a3, k + h * b3, s + h * c3)
            mu += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
            k += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
            s += h / 6 * (c1 + 2 * c2 + 2 * c3 + c4)
            if not 1e-12 < mu < 1e12:
                raise BlowUp(f"mu = {mu:.3g} left (1e-12, 1e12) near t = {now + (j + 1) * h:.4g}")
        now = target
        out[i] = mu, k, s
    return out


def ode_trajectory(
    c: MasterEqCoefficients,
    init: GaussianParams,
    times,
    dt: float = 0.01,
    rtol: float = 1e-9,
    dt_floor: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Classical RK4 on (mu, kappa, mu + nu) with step halving.

    The step is halved until two successive runs agree to ``rtol`` relative to
    ``max(|value|, 1)`` at every requested time, or ``dt`` drops below
    ``dt_floor``. Returns (mu, kappa, nu) arrays.
    """
    _require_mu(init)
    if dt <= 0:
        raise ValueError("dt must be positive")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("times must be non-negative and increasing")
    y0 = (init.mu, init.kappa, init.mu + init.nu)
    prev = _rk4_grid(c, y0, times, dt)
    while dt / 2 >= dt_floor:
        dt /= 2
        cur = _rk4_grid(c, y0, times, dt)
        scale = np.maximum(np.abs(cur), 1.0)
        done = np.all(np.abs(cur - prev) <= rtol * scale)
        prev = cur
        if done:
            break
    mu, k, s = prev.T
    return mu, k, s - mu


def evolve_ode(c: MasterEqCoefficients, init: GaussianParams, t: float, dt: float = 0.01) -> GaussianParams:
    """(mu, kappa, nu) at time ``t`` by Runge-Kutta integration of the rate equations."""
    mu, k, nu = ode_trajectory(c, init, [float(t)], dt)
    return GaussianParams(float(mu[0]), float(k[0]), float(nu[0]))


def initial_density_matrix(init: GaussianParams) -> np.ndarray:
    """[[I, -R0], [0, I]] = (1 - 4 mu0 J(Q^2/2))(1 - kappa0 J(iQr))(1 - (mu0 + nu0) J(r^2/2))."""
    eye = np.eye(4, dtype=complex)
    return (
        (eye - 4 * init.mu * generator_matrix(GeneratorName.Q2))
        @ (eye - init.kappa * generator_matrix(GeneratorName.IQR))
        @ (eye - (init.mu + init.nu) * generator_matrix(GeneratorName.R2))
    )


def evolve_matrix_pipeline(c: MasterEqCoefficients, init: GaussianParams, t: float) -> GaussianParams:
    """Propagate the 4x4 image of the density matrix and read (mu, kappa, nu) off R = -D12 D22^-1."""
    _require_mu(init)
    t = float(t)
    D = matrix_exp(-t * assemble_K(c).matrix) @ initial_density_matrix(init)
    _, d12, _, d22 = blocks(D)
    det = np.linalg.det(d22)
    if abs(det) < 1e-12:
        raise SingularD22(f"det D22 = {det:.3g}")
    R = -d12 @ np.linalg.inv(d22)
    mu = _realify(R[0, 0] / 4, "mu")
    kappa = _realify(R[0, 1] / 1j, "kappa")
    nu = _realify(R[1, 1], "mu+nu") - mu
    mu_norm = _realify(init.mu * np.exp(c.gamma * t) / det, "normalization")
    if abs(mu_norm - mu) > 1e-9 * max(abs(mu), 1e-300):
        raise NumericError(f"normalization mismatch: {mu_norm} vs {mu}")
    return GaussianParams(float(mu), float(kappa), float(nu))


def density_at(p: GaussianParams, Q, r):
    """rho(Q, r) in centre/relative coordinates."""
    if not p.mu > 0:
        raise ValueError("mu must be positive")
    Q, r = np.asarray(Q), np.asarray(r)
    return np.sqrt(2 * p.mu / np.pi) * np.exp(-2 * p.mu * Q**2 - 1j * p.kappa * Q * r - p.s * r**2 / 2)


def wigner_at(p: GaussianParams, Q, P):
    """Wigner function (1/2pi) int rho(Q, r) e^{-iPr} dr in closed form."""
    s = p.s
    if not s > 0:
        raise NonNormalizable(f"mu + nu = {s} <= 0")
    if not p.mu > 0:
        raise ValueError("mu must be positive")
    Q, P = np.asarray(Q), np.asarray(P)
    a = (4 * p.mu * s + p.kappa**2) / (2 * s)
    return np.sqrt(p.mu / s) / np.pi * np.exp(-a * Q**2 - p.kappa / s * Q * P - P**2 / (2 * s))


def wigner_factors(p: GaussianParams):
    """Marginal factors f(Q), g(P) with W = f g when kappa = 0."""
    s = p.s

    def f(Q):
        return np.sqrt(2 * p.mu / np.pi) * np.exp(-2 * p.mu * np.asarray(Q) ** 2)

    def g(P):
        return np.exp(-np.asarray(P) ** 2 / (2 * s)) / np.sqrt(2 * np.pi * s)

    return f, g


def second_moments(p: GaussianParams) -> SecondMoments:
    """<x^2> = 1/(4mu), <p^2> = mu + nu + kappa^2/(4mu), sym <xp> = -kappa/(4mu)."""
    if not p.mu > 0:
        raise ValueError("mu must be positive")
    return SecondMoments(1 / (4 * p.mu), p.mu + p.nu + p.kappa**2 / (4 * p.mu), -p.kappa / (4 * p.mu))


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    mu: np.ndarray
    kappa: np.ndarray
    nu: np.ndarray


def trajectory(c: MasterEqCoefficients, init: GaussianParams, times) -> Trajectory:
    """Closed-form trajectory on a time grid."""
    times = np.asarray(times, dtype=float)
    mu, kappa, nu = closed_form_arrays(c, init, times)
    return Trajectory(times, mu, kappa, nu)


def scan_horizon(c: MasterEqCoefficients) -> float:
    """T = max(20, 10/gamma) for gamma > 0, else 20."""
    return max(20.0, 10.0 / c.gamma) if c.gamma > 0 else 20.0


def min_nu_scan(
    c: MasterEqCoefficients, init: GaussianParams, T: float | None = None, samples: int = 2000
) -> tuple[float, float]:
    """Minimum of nu(t) on [0, T]: uniform grid, then golden-section refinement.

    Returns ``(t_min, nu_min)``.
    """
    T = scan_horizon(c) if T is None else T
    grid = np.linspace(0.0, T, samples)
    _, _, nu = closed_form_arrays(c, init, grid)
    i = int(np.argmin(nu))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, samples - 1)]

    def f(x: float) -> float:
        return float(closed_form_arrays(c, init, x)[2])

    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > 1e-10 * max(1.0, T):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    candidates = [(float(nu[i]), float(grid[i])), (f1, x1), (f2, x2)]
    nu_min, t_min = min(candidates)
    return t_min, nu_min


def _startup_self_test() -> None:
    """D(0) telescopes to 1; anything else means a transcription error."""
    c = MasterEqCoefficients.from_values(0.7, 2.0, 0.4, -0.3, -1.5, -0.4, 0.6)
    init = GaussianParams(0.6, 0.3, 0.2)
    for core in (_closed_form_printed, _closed_form_regular):
        d = sum(core(c, init, np.asarray(0.0))[0])
        if abs(d - 1) > 1e-12:
            raise RuntimeError(f"closed-form self-test failed: D(0) = {d}")


_startup_self_test()
