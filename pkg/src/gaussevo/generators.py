"""4x4 matrix representations of the quadratic generators.

A generator J acts linearly on the column (Q, r, dQ, dr) of canonical
operators; its matrix satisfies beta J = (beta J)^T so that exp(s J) is
symplectic. Matrices are plain dense ``complex`` numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import MasterEqCoefficients

_Z = np.zeros((2, 2))
_I = np.eye(2)
_S1 = np.array([[0.0, 1.0], [1.0, 0.0]])
_S3 = np.diag([1.0, -1.0])
_SP = np.array([[0.0, 1.0], [0.0, 0.0]])
_SM = _SP.T
_SU = np.diag([1.0, 0.0])
_SD = np.diag([0.0, 1.0])

BETA = np.block([[_Z, _I], [-_I, _Z]]).astype(complex)


def _b(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]]).astype(complex)


class GeneratorName(Enum):
    L0 = "L0"
    M1 = "M1"
    M2 = "M2"
    O0 = "O0"
    O_PLUS = "O+"
    L1_PLUS = "L1+"
    L2_PLUS = "L2+"
    O_MINUS = "O-"
    L1_MINUS = "L1-"
    L2_MINUS = "L2-"
    Q2 = "J(Q^2/2)"
    IQR = "J(iQr)"
    R2 = "J(r^2/2)"
    DQ2 = "J(dQ^2/2)"
    IDQDR = "J(i dQ dr)"
    DR2 = "J(dr^2/2)"
    IQDR = "J(iQ dr)"
    IRDQ = "J(ir dQ)"
    QDQ = "J(Q dQ+1/2)"
    RDR = "J(r dr+1/2)"


# L0, M1 and M2 hold the matrices of i*L0, i*M1 and i*M2, which is the
# combination entering K0 = theta0 iL0 + theta1 iM1 + theta2 iM2.
_MATRICES = {
    GeneratorName.L0: 0.5j * _b(_Z, _S1, _S1, _Z),
    GeneratorName.M1: 0.5j * _b(_Z, _S1, -_S1, _Z),
    GeneratorName.M2: 0.5 * _b(-_I, _Z, _Z, _I),
    GeneratorName.O0: 0.5 * _b(-_S3, _Z, _Z, _S3),
    GeneratorName.O_PLUS: -0.5 * _b(_Z, _SD, _SU, _Z),
    GeneratorName.L1_PLUS: 0.5 * _b(_Z, -_SD, _SU, _Z),
    GeneratorName.L2_PLUS: 0.5j * _b(-_SM, _Z, _Z, _SP),
    GeneratorName.O_MINUS: 2.0 * _b(_Z, _SU, _SD, _Z),
    GeneratorName.L1_MINUS: 2.0 * _b(_Z, _SU, -_SD, _Z),
    GeneratorName.L2_MINUS: 2.0j * _b(_SP, _Z, _Z, -_SM),
    GeneratorName.Q2: _b(_Z, _SU, _Z, _Z),
    GeneratorName.IQR: 1j * _b(_Z, _S1, _Z, _Z),
    GeneratorName.R2: _b(_Z, _SD, _Z, _Z),
    GeneratorName.DQ2: _b(_Z, _Z, -_SU, _Z),
    GeneratorName.IDQDR: 1j * _b(_Z, _Z, -_S1, _Z),
    GeneratorName.DR2: _b(_Z, _Z, -_SD, _Z),
    GeneratorName.IQDR: 1j * _b(_SP, _Z, _Z, -_SM),
    GeneratorName.IRDQ: 1j * _b(_SM, _Z, _Z, -_SP),
    GeneratorName.QDQ: _b(_SU, _Z, _Z, -_SU),
    GeneratorName.RDR: _b(_SD, _Z, _Z, -_SD),
}


def generator_matrix(name: GeneratorName | str) -> np.ndarray:
    """Return a fresh copy of the 4x4 matrix for ``name`` (tag or its value)."""
    return _MATRICES[GeneratorName(name)].copy()


def blocks(S: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a 4x4 matrix into its 2x2 quadrants (S11, S12, S21, S22)."""
    return S[:2, :2], S[:2, 2:], S[2:, :2], S[2:, 2:]


def m_matrices() -> dict[str, np.ndarray]:
    """M0, M1, M2 and the nilpotent combinations M+ = M1 + iM2, M- = M1 - iM2."""
    m0 = -1j * _MATRICES[GeneratorName.L0]
    m1 = -1j * _MATRICES[GeneratorName.M1]
    m2 = -1j * _MATRICES[GeneratorName.M2]
    return {"M0": m0, "M1": m1, "M2": m2, "M+": m1 + 1j * m2, "M-": m1 - 1j * m2}


def k0_matrix(c: MasterEqCoefficients) -> np.ndarray:
    """Unitary part theta0 iL0 + theta1 iM1 + theta2 iM2."""
    t0, t1, t2 = c.theta_arr
    return (
        t0 * _MATRICES[GeneratorName.L0]
        + t1 * _MATRICES[GeneratorName.M1]
        + t2 * _MATRICES[GeneratorName.M2]
    )


def k1_matrix(c: MasterEqCoefficients) -> np.ndarray:
    """Dissipative part gamma O0 + eta0 O+ + eta1 L1+ + eta2 L2+ (without -gamma/2)."""
    e0, e1, e2 = c.eta_arr
    return (
        c.gamma * _MATRICES[GeneratorName.O0]
        + e0 * _MATRICES[GeneratorName.O_PLUS]
        + e1 * _MATRICES[GeneratorName.L1_PLUS]
        + e2 * _MATRICES[GeneratorName.L2_PLUS]
    )


@dataclass(frozen=True)
class AssembledK:
    """Matrix of K' together with the scalar part the 4D representation cannot hold.

    The abstract generator is K = K' + shift, so exp(-tK) is represented by
    exp(-t*shift) * expm(-t*matrix); with the shift included this prefactor
    is exp(gamma t / 2).
    """

    matrix: np.ndarray
    include_identity_shift: bool
    shift: float

    def prefactor(self, t):
        return np.exp(-np.asarray(t) * self.shift)


def assemble_K(c: MasterEqCoefficients, include_identity_shift: bool = True) -> AssembledK:
    """Assemble the 4x4 matrix of K' and record the -gamma/2 identity shift."""
    shift = -0.5 * c.gamma if include_identity_shift else 0.0
    return AssembledK(k0_matrix(c) + k1_matrix(c), include_identity_shift, shift)


def h_matrix(c: MasterEqCoefficients) -> np.ndarray:
    """Anticommutator H = {K0, K1'} of the unitary and dissipative parts."""
    k0, k1 = k0_matrix(c), k1_matrix(c)
    return k0 @ k1 + k1 @ k0


def symplectic_check(S: np.ndarray) -> float:
    """Max-norm of S^T beta S - beta."""
    S = np.asarray(S)
    return float(np.max(np.abs(S.T @ BETA @ S - BETA)))


def generator_residual(J: np.ndarray) -> float:
    """Max-norm of beta J - (beta J)^T; zero for every element of the algebra."""
    bj = BETA @ np.asarray(J)
    return float(np.max(np.abs(bj - bj.T)))
