"""Time-evolution operator exp(-tK) in the 4x4 representation.

Three routes are provided: the closed form, the ordered BCH product, and a
brute-force matrix exponential (with a biorthogonal eigen-route as a second
oracle). The BCH coefficients h, m0, m+-, g are available in closed form and
accept scalar or array ``t``.

Numerics
--------
Removable singularities are handled as follows.

* ``sinh(x t/2)/x`` switches to its three-term Taylor series when
  ``|x| < 1e-7 max(gamma, |omega|, 1)``; this covers x = gamma +- omega and
  gamma = 0.
* g(t) is evaluated in projector form,
  ``g = -[E(gamma)(th.eta)th + E(gamma-omega) P+(eta)/2 + E(gamma+omega) P-(eta)/2]``
  with ``E(x) = (1 - exp(-x t))/x``, which is finite at gamma = +-omega.
* Near the critical point (``|omega| <= 1e-2 max|theta_i|``) the unit vector
  theta/omega blows up. There every quantity is rewritten through the entire
  functions cosh(omega x), sinh(omega x)/omega and (cosh(omega x) - 1)/omega**2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, special

from .algebra import MasterEqCoefficients, MinkVec3, dot, wedge
from .errors import (
    MatrixExpOverflow,
    NonUnitTheta,
    PoleInM0,
    SingularDenominator,
)
from .generators import GeneratorName, assemble_K, generator_matrix, h_matrix, k0_matrix

SERIES_REL = 1e-7
CRITICAL_BAND = 1e-2

Regime = Literal["underdamped", "critically_damped", "overdamped"]


@dataclass(frozen=True)
class OmegaValue:
    """omega**2 = -theta0**2 + theta1**2 + theta2**2 and its principal root."""

    omega_sq: float
    omega: complex
    regime: Regime


def omega_of(c: MasterEqCoefficients, tol: float = 1e-12) -> OmegaValue:
    """Principal root: real >= 0 for omega**2 >= 0, else +i sqrt(-omega**2)."""
    th = c.theta_arr
    w2 = float(dot(th, th))
    scale = th[0] ** 2 if th[0] != 0 else float(np.max(th**2))
    if abs(w2) <= tol * scale:
        regime: Regime = "critically_damped"
    elif w2 < 0:
        regime = "underdamped"
    else:
        regime = "overdamped"
    omega = complex(np.sqrt(w2)) if w2 >= 0 else 1j * np.sqrt(-w2)
    return OmegaValue(w2, omega, regime)


def near_critical(c: MasterEqCoefficients) -> bool:
    """True when theta/omega is too large for the projector formulas."""
    th = c.theta_arr
    scale = float(np.max(np.abs(th)))
    return abs(omega_of(c).omega) <= CRITICAL_BAND * scale


def theta_hat(c: MasterEqCoefficients) -> np.ndarray:
    """theta/omega as a complex array; unit under the Minkowski dot."""
    om = omega_of(c).omega
    if om == 0:
        raise SingularDenominator("theta_hat undefined at omega = 0")
    return c.theta_arr / om


def shc(x: complex, t, scale: float = 1.0):
    """sinh(x t/2)/x with the Taylor series t/2 + x^2 t^3/48 + x^4 t^5/3840 near x = 0."""
    t = np.asarray(t, dtype=float)
    if abs(x) < SERIES_REL * max(scale, 1.0):
        x2 = x * x
        return t / 2 + x2 * t**3 / 48 + x2 * x2 * t**5 / 3840
    return np.sinh(x * t / 2) / x


def _pole_scale(c: MasterEqCoefficients) -> float:
    return max(abs(c.gamma), abs(omega_of(c).omega), 1.0)


def expm1_over(x: complex, t, scale: float = 1.0):
    """E(x, t) = (1 - exp(-x t))/x, finite at x = 0."""
    return 2.0 * np.exp(-x * np.asarray(t) / 2) * shc(x, t, scale)


def sinh_over_omega(omega: complex, x):
    """sinh(omega x)/omega, series for |omega x| < 1e-3 (entire in omega**2)."""
    x = np.asarray(x, dtype=float)
    y = omega * x
    w2 = omega * omega
    series = x * (1 + w2 * x**2 / 6 * (1 + w2 * x**2 / 20 * (1 + w2 * x**2 / 42)))
    if omega == 0:
        return series + 0j
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sinh(y) / omega
    return np.where(np.abs(y) < 1e-3, series, direct)


def cosh_minus_one_over(omega: complex, x):
    """(cosh(omega x) - 1)/omega**2 = 2 (sinh(omega x/2)/omega)**2."""
    return 2.0 * sinh_over_omega(omega, np.asarray(x) / 2) ** 2


def projector_pm(sign: int, v, theta_hat, tol: float = 1e-10):
    """Light-like projector P(+-)(v) = v - th (th.v) -+ th ^ v for a unit th."""
    th = np.asarray(theta_hat)
    norm = dot(th, th)
    if abs(norm - 1) > tol:
        raise NonUnitTheta(f"theta_hat . theta_hat = {norm}, expected 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    va = np.asarray(v)
    thb = th.reshape((3,) + (1,) * (va.ndim - 1))
    out = va - thb * dot(thb, va) - sign * np.asarray(wedge(thb, va))
    if isinstance(v, MinkVec3) and out.shape == (3,):
        return MinkVec3.from_array(out)
    return out


def _laplace_moments(gamma: float, w2: complex, t):
    """Integrals over [0, t] of e^{-gamma s} times 1, S(s), C(s).

    S(s) = sinh(omega s)/omega and C(s) = (cosh(omega s) - 1)/omega**2. Used
    only near omega = 0, where they are summed as a power series in omega**2
    through regularized incomplete gamma functions.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if gamma > 0 and abs(w2) <= 0.25 * gamma**2:
        x = gamma * t
        i0 = special.gammainc(1, x) / gamma
        i1 = np.zeros_like(t, dtype=complex)
        i2 = np.zeros_like(t, dtype=complex)
        r = w2 / gamma**2
        for k in range(40):
            term1 = r**k * special.gammainc(2 * k + 2, x) / gamma**2
            term2 = r**k * special.gammainc(2 * k + 3, x) / gamma**3
            i1 += term1
            i2 += term2
            if np.max(np.abs(term1)) < 1e-18 * np.max(np.abs(i1)) and k > 1:
                break
        return i0, i1, i2
    om = np.sqrt(complex(w2))

    def quad(f, upper):
        re = integrate.quad(lambda s: np.real(f(s)), 0, upper, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        im = integrate.quad(lambda s: np.imag(f(s)), 0, upper, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        return re + 1j * im

    i0 = expm1_over(gamma, t)
    i1 = np.array([quad(lambda s: np.exp(-gamma * s) * sinh_over_omega(om, s), u) for u in t])
    i2 = np.array([quad(lambda s: np.exp(-gamma * s) * cosh_minus_one_over(om, s), u) for u in t])
    return i0, i1, i2


def g_projector(c: MasterEqCoefficients, t) -> np.ndarray:
    """g(t) via light-like projectors; shape (3,) + shape(t)."""
    t = np.asarray(t, dtype=float)
    om = omega_of(c).omega
    th = theta_hat(c)
    eta = c.eta_arr
    sc = _pole_scale(c)
    p_plus = projector_pm(1, eta, th)
    p_minus = projector_pm(-1, eta, th)
    ex = (...,) + (None,) * t.ndim
    e0 = expm1_over(c.gamma, t, sc)
    em = expm1_over(c.gamma - om, t, sc)
    ep = expm1_over(c.gamma + om, t, sc)
    return -(
        (dot(th, eta) * th)[ex] * e0
        + 0.5 * p_plus[ex] * em
        + 0.5 * p_minus[ex] * ep
    )


def g_regular(c: MasterEqCoefficients, t) -> np.ndarray:
    """g(t) = -[I0 eta - I1 theta^eta + I2 theta^(theta^eta)], entire in omega**2."""
    t = np.asarray(t, dtype=float)
    i0, i1, i2 = _laplace_moments(c.gamma, omega_of(c).omega_sq, t.ravel())
    th, eta = c.theta_arr, c.eta_arr
    te = np.asarray(wedge(th, eta))
    tte = np.asarray(wedge(th, te))
    out = -(eta[:, None] * i0 - te[:, None] * i1 + tte[:, None] * i2)
    return out.reshape((3,) + t.shape)


def gamma_vector_raw(c: MasterEqCoefficients) -> np.ndarray:
    """Gamma = (-gamma^2 eta + (th.eta) th + gamma th^eta) / (gamma (gamma^2 - omega^2)), unchecked."""
    th, eta, g = c.theta_arr, c.eta_arr, c.gamma
    w2 = dot(th, th)
    return (-(g**2) * eta + dot(th, eta) * th + g * np.asarray(wedge(th, eta))) / (g * (g * g - w2))


def g_literal(c: MasterEqCoefficients, t) -> np.ndarray:
    """g(t) = Gamma + e^{-gt}/g (th.eta) th + e^{-(g-w)t}/(2(g-w)) P+ + e^{-(g+w)t}/(2(g+w)) P-.

    Direct transcription with poles at gamma = 0, +-omega; kept as a
    cross-check for :func:`g_projector`.
    """
    t = np.asarray(t, dtype=float)
    om = omega_of(c).omega
    g = c.gamma
    if g == 0 or g * g == om * om:
        raise SingularDenominator("literal g(t) has a pole at gamma = 0 or gamma = +-omega")
    th = theta_hat(c)
    eta = c.eta_arr
    ex = (...,) + (None,) * t.ndim
    gam = gamma_vector_raw(c)
    return (
        gam[ex]
        + ((dot(th, eta) * th) / g)[ex] * np.exp(-g * t)
        + (projector_pm(1, eta, th) / (2 * (g - om)))[ex] * np.exp(-(g - om) * t)
        + (projector_pm(-1, eta, th) / (2 * (g + om)))[ex] * np.exp(-(g + om) * t)
    )


def g_of_t(c: MasterEqCoefficients, t) -> np.ndarray:
    """g(t), picking the projector or the near-critical form."""
    if near_critical(c):
        return g_regular(c, t)
    return g_projector(c, t)


@dataclass(frozen=True)
class BCHCoefficients:
    """Coefficients of the ordered product for exp(-tK).

    ``sqrt_m0`` records the branch 1/(cosh(omega t/2) + i th0 sinh(omega t/2)/omega)
    so that ln sqrt(m0) never needs a complex logarithm. ``g`` has shape
    ``(3,) + shape(t)``.
    """

    h: np.ndarray
    m0: np.ndarray
    m_plus: np.ndarray
    m_minus: np.ndarray
    g: np.ndarray
    t: np.ndarray
    sqrt_m0: np.ndarray


def bch_coefficients(c: MasterEqCoefficients, t) -> BCHCoefficients:
    """Closed-form h, m0, m+-, g at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    om = omega_of(c).omega
    t0, t1, t2 = c.theta_arr
    s_half = sinh_over_omega(om, t / 2)
    denom = np.cosh(om * t / 2) + 1j * t0 * s_half
    if np.any(np.abs(denom) < 1e-14):
        raise PoleInM0("cosh(omega t/2) + i th0 sinh(omega t/2) vanished")
    sqrt_m0 = 1.0 / denom
    g = g_of_t(c, t)
    if not np.all(np.isfinite(g)):
        raise SingularDenominator("g(t) is not finite")
    return BCHCoefficients(
        h=-c.gamma * t,
        m0=sqrt_m0**2,
        m_plus=-(1j * t1 + t2) * s_half * sqrt_m0,
        m_minus=-(1j * t1 - t2) * s_half * sqrt_m0,
        g=g,
        t=t,
        sqrt_m0=sqrt_m0,
    )


_I4 = np.eye(4, dtype=complex)


def _mat(name: str) -> np.ndarray:
    return generator_matrix(GeneratorName(name))


def propagator_from_bch(b: BCHCoefficients) -> np.ndarray:
    """Multiply the seven factors of the ordered product (scalar ``t`` only)."""
    if np.ndim(b.t) != 0:
        raise ValueError("propagator_from_bch needs scalar t")
    m0 = -1j * _mat("L0")
    mp = -1j * _mat("M1") + _mat("M2")
    mm = -1j * _mat("M1") - _mat("M2")
    g0, g1, g2 = (complex(x) for x in b.g)
    h = float(b.h)
    s = complex(b.sqrt_m0)
    ch_l, sh_l = (s + 1 / s) / 2, (s - 1 / s) / 2
    factors = [
        _I4 + g2 * _mat("L2+"),
        _I4 + g1 * _mat("L1+"),
        _I4 + g0 * _mat("O+"),
        np.exp(-h / 2) * (np.cosh(h / 2) * _I4 + 2 * np.sinh(h / 2) * _mat("O0")),
        _I4 + complex(b.m_plus) * mp,
        ch_l * _I4 + 2 * sh_l * m0,
        _I4 + complex(b.m_minus) * mm,
    ]
    out = _I4
    for f in factors:
        out = out @ f
    return out


def sigma_vector(c: MasterEqCoefficients, t: float) -> np.ndarray:
    """Sigma(t) multiplying (O+, L1+, L2+) in the closed-form propagator."""
    g = c.gamma
    if near_critical(c):
        om = omega_of(c).omega
        gv = g_of_t(c, t)
        return -np.exp(g * t / 2) * (
            np.cosh(om * t / 2) * gv + sinh_over_omega(om, t / 2) * np.asarray(wedge(c.theta_arr, gv))
        )
    if g == 0:
        raise SingularDenominator("Sigma has a 1/gamma term at gamma = 0")
    om = omega_of(c).omega
    th = theta_hat(c)
    eta = c.eta_arr
    sc = _pole_scale(c)
    sm, sp = shc(g - om, t, sc), shc(g + om, t, sc)
    return (sm + sp) * eta - (sm - sp) * (dot(c.theta_arr, eta) / g * th + np.asarray(wedge(th, eta)))


def propagator_closed_form(c: MasterEqCoefficients, t: float) -> np.ndarray:
    """exp(-tK) = e^{gt/2}[ch ch I + 2 S shc H - 2 S ch K0 - 2 ch sh O0 - Sigma.(O+, L1+, L2+)].

    Here ch/sh are hyperbolic functions of omega t/2 and gamma t/2,
    S = sinh(omega t/2)/omega and shc = sinh(gamma t/2)/gamma.
    """
    t = float(t)
    g = c.gamma
    om = omega_of(c).omega
    ch_w = np.cosh(om * t / 2)
    s_w = sinh_over_omega(om, t / 2)
    ch_g, sh_g = np.cosh(g * t / 2), np.sinh(g * t / 2)
    shc_g = shc(g, t, _pole_scale(c))
    sig = sigma_vector(c, t)
    inner = (
        ch_w * ch_g * _I4
        + 2 * s_w * shc_g * h_matrix(c)
        - 2 * s_w * ch_g * k0_matrix(c)
        - 2 * ch_w * sh_g * _mat("O0")
        - sig[0] * _mat("O+")
        - sig[1] * _mat("L1+")
        - sig[2] * _mat("L2+")
    )
    return np.exp(g * t / 2) * inner


def propagator_eigen_route(c: MasterEqCoefficients, t: float) -> np.ndarray:
    """exp(-tK) from the biorthogonal diagonalization of the 2x2 recursion matrix.

    Powers of the anticommutator map A(X) = {K', X}/2 acting on I and H close
    on span{I, H}; the 2x2 matrix [[a2, b2], [1, a2]] with a2 = (w2 + g2)/4 and
    b = omega gamma/2 is diagonalized by V = [[b, b], [1, -1]]/sqrt2 and
    U = [[1/b, 1/b], [1, -1]]/sqrt2.
    """
    g = c.gamma
    om = omega_of(c).omega
    beta = om * g / 2
    if beta == 0 or g * g == om * om:
        raise SingularDenominator("eigen-route needs omega gamma != 0 and gamma != +-omega")
    kp = assemble_K(c).matrix
    hm = h_matrix(c)
    a_h = 0.5 * (kp @ hm + hm @ kp)
    v = np.array([[beta, beta], [1, -1]]) / np.sqrt(2)
    u = np.array([[1 / beta, 1 / beta], [1, -1]]) / np.sqrt(2)
    root = np.array([(g + om) / 2, (g - om) / 2])
    e1 = np.array([1.0, 0.0])
    even = v @ np.diag(np.cosh(root * t)) @ u.T @ e1
    odd = v @ np.diag(np.sinh(root * t) / root) @ u.T @ e1
    e_kp = even[0] * _I4 + even[1] * hm - (odd[0] * kp + odd[1] * a_h)
    return np.exp(g * t / 2) * e_kp


def matrix_exp(M: np.ndarray, terms: int = 20) -> np.ndarray:
    """Matrix exponential by scaling and squaring a truncated Taylor series."""
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise MatrixExpOverflow("non-finite input matrix")
    norm = float(np.max(np.sum(np.abs(M), axis=0))) if M.size else 0.0
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    A = M / 2.0**s
    eye = np.eye(M.shape[0], dtype=complex)
    out = eye.copy()
    for k in range(terms, 0, -1):
        out = eye + (A @ out) / k
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            out = out @ out
    if not np.all(np.isfinite(out)):
        raise MatrixExpOverflow(f"overflow in exp of a matrix with 1-norm {norm:.3g}")
    return out


def propagator_expm(c: MasterEqCoefficients, t: float) -> np.ndarray:
    """Brute force exp(-tK) = e^{gamma t/2} expm(-t K')."""
    ak = assemble_K(c)
    return ak.prefactor(t) * matrix_exp(-t * ak.matrix)
