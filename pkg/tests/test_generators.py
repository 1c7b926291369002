import itertools

import numpy as np
import pytest

from gaussevo.algebra import MasterEqCoefficients, dot
from gaussevo.generators import (
    BETA,
    GeneratorName,
    assemble_K,
    generator_matrix,
    generator_residual,
    h_matrix,
    k0_matrix,
    k1_matrix,
    m_matrices,
    symplectic_check,
)
from gaussevo.propagator import matrix_exp

ALL = [generator_matrix(n) for n in GeneratorName]


@pytest.mark.parametrize("name", list(GeneratorName))
def test_each_generator_in_algebra(name):
    assert generator_residual(generator_matrix(name)) == 0.0


def test_lookup_by_value_and_copy():
    a = generator_matrix("O+")
    a[0, 0] = 99
    assert generator_matrix(GeneratorName.O_PLUS)[0, 0] != 99


def test_commutators_close():
    # [A, B] of two algebra elements stays in the algebra
    for a, b in itertools.combinations(ALL, 2):
        assert generator_residual(a @ b - b @ a) < 1e-14


def test_generators_span_sp4():
    flat = np.array([m.ravel() for m in ALL])
    assert np.linalg.matrix_rank(flat) == 10


def test_m_identities():
    m = m_matrices()
    # M+ and M- are nilpotent
    assert np.allclose(m["M+"] @ m["M+"], 0)
    assert np.allclose(m["M-"] @ m["M-"], 0)
    assert np.allclose(m["M1"] + 1j * m["M2"], m["M+"])
    # the three M's form sl(2): squares are multiples of the identity
    for k in ("M0", "M1", "M2"):
        sq = m[k] @ m[k]
        assert np.allclose(sq, sq[0, 0] * np.eye(4))


def test_assemble_and_h():
    c = MasterEqCoefficients.from_values(0.7, 2.0, 0.4, -0.3, -1.5, -0.4, 0.6)
    ak = assemble_K(c)
    assert np.allclose(ak.matrix, k0_matrix(c) + k1_matrix(c))
    assert ak.shift == -0.35 and ak.prefactor(2.0) == pytest.approx(np.exp(0.7))
    assert assemble_K(c, include_identity_shift=False).prefactor(3.0) == 1.0
    # {K0, K1'} = 2 gamma K0 O0 - 2i (th.eta) M0 O+
    prod = 2 * c.gamma * k0_matrix(c) @ generator_matrix("O0") - 2j * dot(c.theta_arr, c.eta_arr) * (
        m_matrices()["M0"] @ generator_matrix("O+")
    )
    assert np.abs(h_matrix(c) - prod).max() < 1e-14


def test_symplectic_check():
    assert symplectic_check(np.eye(4)) == 0.0
    assert symplectic_check(BETA) < 1e-15
    assert symplectic_check(2 * np.eye(4)) > 1
    c = MasterEqCoefficients.from_values(1.0, 2.0, 0.5, -1.0, -2.0, -2.0, 0.0)
    assert symplectic_check(matrix_exp(-1.3 * assemble_K(c).matrix)) < 1e-12
