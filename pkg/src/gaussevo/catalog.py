"""Named classes of master equations, the classifier, Gibbs and CP tests.

Class parameters
----------------
Every class takes ``gamma``, ``omega0`` (or ``theta0 = 2 omega0``) and the
temperature-like ``b`` that fixes ``eta0 = -2 gamma b``. Additional
parameters:

==================  =======================  ==========================================
class               extra parameters         fixed relations
==================  =======================  ==========================================
KL                  none                     theta1 = theta2 = eta1 = eta2 = 0
CL                  theta1                   eta1 = eta0, theta2 = -gamma, eta2 = 0
ConjugateCL         theta1                   eta1 = -eta0, theta2 = gamma, eta2 = 0
GeneralizedCL       theta2 (|theta2|<=gamma) theta1 = 0, eta1 = -eta0 theta2/gamma
HPZ                 theta1, eta2             eta1 = eta0, theta2 = -gamma
ConjugateHPZ        theta1, eta2             eta1 = -eta0, theta2 = gamma
GeneralizedKL1      theta1                   theta2 = 0, eta1 = eta0 theta1/theta0
GeneralizedKL2      theta1                   eta1 = 0, theta2 = gamma theta1/theta0
GenericFactorized   theta1, theta2, eta1     eta2 solves the factorized condition
Generic             theta1, theta2, eta1,    none
                    eta2
==================  =======================  ==========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .algebra import MasterEqCoefficients
from .errors import DomainViolation, UnsupportedRealization
from .stationary import factorized_residual, gamma_vector


class EquationClass(Enum):
    KL = "KL"
    CL = "CL"
    ConjugateCL = "ConjugateCL"
    GeneralizedCL = "GeneralizedCL"
    HPZ = "HPZ"
    ConjugateHPZ = "ConjugateHPZ"
    GeneralizedKL1 = "GeneralizedKL1"
    GeneralizedKL2 = "GeneralizedKL2"
    GenericFactorized = "GenericFactorized"
    Generic = "Generic"


_EXTRA = {
    EquationClass.KL: (),
    EquationClass.CL: ("theta1",),
    EquationClass.ConjugateCL: ("theta1",),
    EquationClass.GeneralizedCL: ("theta2",),
    EquationClass.HPZ: ("theta1", "eta2"),
    EquationClass.ConjugateHPZ: ("theta1", "eta2"),
    EquationClass.GeneralizedKL1: ("theta1",),
    EquationClass.GeneralizedKL2: ("theta1",),
    EquationClass.GenericFactorized: ("theta1", "theta2", "eta1"),
    EquationClass.Generic: ("theta1", "theta2", "eta1", "eta2"),
}


def class_parameters(cls: EquationClass) -> tuple[str, ...]:
    """Names accepted by :func:`canonical` for ``cls`` besides gamma/omega0/theta0/b."""
    return _EXTRA[EquationClass(cls)]


def canonical(cls: EquationClass | str, params: Mapping[str, float], strict: bool = True) -> MasterEqCoefficients:
    """Build the coefficients of a class from its named parameters.

    ``strict=False`` admits |theta1| >= theta0, which threshold scans need at
    bracket ends lying on or beyond the physical domain.
    """
    cls = EquationClass(cls)
    p = dict(params)
    allowed = {"gamma", "omega0", "theta0", "b", *_EXTRA[cls]}
    unknown = set(p) - allowed
    if unknown:
        raise DomainViolation(f"{cls.value}: unknown parameter(s) {sorted(unknown)}")
    if "omega0" in p and "theta0" in p:
        raise DomainViolation("give either omega0 or theta0, not both")
    missing = {"gamma", "b", *_EXTRA[cls]} - set(p)
    if "omega0" not in p and "theta0" not in p:
        missing.add("omega0")
    if missing:
        raise DomainViolation(f"{cls.value}: missing parameter(s) {sorted(missing)}")

    g = float(p["gamma"])
    t0 = float(p["theta0"]) if "theta0" in p else 2.0 * float(p["omega0"])
    b = float(p["b"])
    if not g > 0:
        raise DomainViolation("gamma must be positive")
    if not t0 > 0:
        raise DomainViolation("theta0 must be positive")
    if not b > 0:
        raise DomainViolation("b must be positive")
    t1 = float(p.get("theta1", 0.0))
    if strict and not abs(t1) < t0:
        raise DomainViolation("|theta1| < theta0 required")
    e0 = -2.0 * g * b

    if cls is EquationClass.KL:
        vals = (0.0, 0.0, 0.0, 0.0)
    elif cls is EquationClass.CL:
        vals = (t1, -g, e0, 0.0)
    elif cls is EquationClass.ConjugateCL:
        vals = (t1, g, -e0, 0.0)
    elif cls is EquationClass.GeneralizedCL:
        t2 = float(p["theta2"])
        if not abs(t2) <= g:
            raise DomainViolation("GeneralizedCL needs |theta2| <= gamma")
        vals = (0.0, t2, -e0 * t2 / g, 0.0)
    elif cls is EquationClass.HPZ:
        vals = (t1, -g, e0, float(p["eta2"]))
    elif cls is EquationClass.ConjugateHPZ:
        vals = (t1, g, -e0, float(p["eta2"]))
    elif cls is EquationClass.GeneralizedKL1:
        vals = (t1, 0.0, e0 * t1 / t0, 0.0)
    elif cls is EquationClass.GeneralizedKL2:
        vals = (t1, g * t1 / t0, 0.0, 0.0)
    elif cls is EquationClass.GenericFactorized:
        t2, e1 = float(p["theta2"]), float(p["eta1"])
        den = t2 * t2 - g * g
        if den == 0:
            raise DomainViolation("GenericFactorized needs theta2**2 != gamma**2")
        e2 = -(e0 * (-t0 * t2 + g * t1) + e1 * (t1 * t2 - g * t0)) / den
        vals = (t1, t2, e1, e2)
    else:
        vals = (t1, float(p["theta2"]), float(p["eta1"]), float(p["eta2"]))
    t1, t2, e1, e2 = vals
    return MasterEqCoefficients.from_values(g, t0, t1, t2, e0, e1, e2)


def _close(a: float, b: float, tol: float, scale: float) -> bool:
    return abs(a - b) <= tol * scale


def classify(c: MasterEqCoefficients, tol: float = 1e-9) -> EquationClass:
    """Most specific class first: KL, GeneralizedCL, CL, ConjugateCL, GeneralizedKL1,
    GeneralizedKL2, HPZ, ConjugateHPZ, GenericFactorized, Generic.

    Equalities are tested to ``tol`` relative to the largest coefficient.
    """
    if not (c.gamma > 0 and c.theta_arr[0] > 0):
        raise DomainViolation("classify needs gamma > 0 and theta0 > 0")
    g = c.gamma
    t0, t1, t2 = c.theta_arr
    e0, e1, e2 = c.eta_arr
    sc = c.scale()

    def z(x: float) -> bool:
        return _close(x, 0.0, tol, sc)

    def eq(a: float, b: float) -> bool:
        return _close(a, b, tol, sc)

    def eq2(a: float, b: float) -> bool:
        return _close(a, b, tol, sc * sc)

    if z(t1) and z(t2) and z(e1) and z(e2):
        return EquationClass.KL
    if z(e2):
        if z(t1) and eq2(g * e1, -e0 * t2) and abs(t2) <= g * (1 + tol):
            return EquationClass.GeneralizedCL
        if eq(e1, e0) and eq(t2, -g):
            return EquationClass.CL
        if eq(e1, -e0) and eq(t2, g):
            return EquationClass.ConjugateCL
        if z(t2) and eq2(t0 * e1, e0 * t1):
            return EquationClass.GeneralizedKL1
        if z(e1) and eq2(t0 * t2, g * t1):
            return EquationClass.GeneralizedKL2
    if eq(e1, e0) and eq(t2, -g):
        return EquationClass.HPZ
    if eq(e1, -e0) and eq(t2, g):
        return EquationClass.ConjugateHPZ
    if factorized_residual(c) <= tol:
        return EquationClass.GenericFactorized
    return EquationClass.Generic


def conjugate(c: MasterEqCoefficients) -> MasterEqCoefficients:
    """Image under (Q, P) -> (P, -Q): theta1, theta2, eta1, eta2 change sign."""
    g, t0, t1, t2, e0, e1, e2 = c.as_tuple()
    return MasterEqCoefficients.from_values(g, t0, -t1, -t2, e0, -e1, -e2)


def thermal_b(omega0: float, kT: float, printed_form: bool = False) -> float:
    """b = 1/2 + 1/(exp(omega0/kT) - 1), so that b -> kT/omega0 at high temperature.

    ``printed_form=True`` uses the exponent omega0/(2kT) instead.
    """
    if not (omega0 > 0 and kT > 0):
        raise DomainViolation("omega0 and kT must be positive")
    x = omega0 / (2 * kT) if printed_form else omega0 / kT
    return 0.5 + 1.0 / math.expm1(x) if x < 700 else 0.5


def gibbs_stationary(c: MasterEqCoefficients, tol: float = 1e-9) -> bool:
    """True iff Gamma1 and Gamma2 vanish relative to Gamma0.

    For such sets Gamma0 = -eta0/gamma must hold; a violation raises
    ``AssertionError`` since it would indicate a transcription error.
    """
    gam = gamma_vector(c)
    ok = abs(gam[1]) <= tol * abs(gam[0]) and abs(gam[2]) <= tol * abs(gam[0])
    if ok:
        expected = -c.eta_arr[0] / c.gamma
        if abs(gam[0] - expected) > 1e-8 * max(abs(expected), 1.0):
            raise AssertionError(f"Gibbs set with Gamma0 = {gam[0]} != -eta0/gamma = {expected}")
    return bool(ok)


@dataclass(frozen=True)
class CPWitness:
    """Real two-operator realization with c > 0 and slopes s1, s2."""

    c: float
    s1: float
    s2: float
    reconstructed: tuple[float, float, float, float]


def reconstruct(c: float, s1: float, s2: float) -> tuple[float, float, float, float]:
    """(gamma, eta0, eta1, eta2) generated by the witness."""
    c2 = c * c
    return (
        -2 * c2 * (2 - s1 * s1 - s2 * s2),
        -2 * c2 * (2 + s1 * s1 + s2 * s2),
        -4 * c2 * (s1 + s2),
        0.0,
    )


def cp_decompose(c: MasterEqCoefficients) -> CPWitness | None:
    """Witness of complete positivity, or None if the real realization does not exist.

    Requires eta2 = 0. A witness exists iff eta0 < 0, |eta0| > gamma and
    gamma^2 <= eta0^2 - eta1^2.
    """
    g = c.gamma
    e0, e1, e2 = c.eta_arr
    if e2 != 0:
        raise UnsupportedRealization("the two-operator real realization needs eta2 = 0")
    if not g > 0:
        raise DomainViolation("cp_decompose needs gamma > 0")
    a = abs(e0)
    disc = e0 * e0 - e1 * e1 - g * g
    if not (e0 < 0 and a > g and disc >= 0):
        return None
    root = math.sqrt(disc)
    cc = math.sqrt((a - g) / 8)
    s1 = (-e1 + root) / (a - g)
    s2 = (-e1 - root) / (a - g)
    rebuilt = reconstruct(cc, s1, s2)
    target = (g, e0, e1, 0.0)
    scale = max(abs(x) for x in target)
    if any(abs(x - y) > 1e-10 * scale for x, y in zip(rebuilt, target)):
        raise AssertionError(f"CP reconstruction mismatch: {rebuilt} vs {target}")
    return CPWitness(cc, s1, s2, rebuilt)


def cp_boundary_margin(c: MasterEqCoefficients) -> float:
    """min(|eta0| - gamma, eta0^2 - eta1^2 - gamma^2); positive inside the CP region."""
    g = c.gamma
    e0, e1, _ = c.eta_arr
    return float(min(abs(e0) - g, e0 * e0 - e1 * e1 - g * g))
