import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussevo.algebra import MasterEqCoefficients, MinkVec3, PhiContext, dot, phi, wedge
from gaussevo.errors import DomainViolation

fin = st.floats(-10, 10, allow_nan=False)
vec = st.tuples(fin, fin, fin).map(np.array)


def test_dot_metric():
    assert dot(MinkVec3(1, 0, 0), MinkVec3(1, 0, 0)) == -1
    assert dot([0, 1, 0], [0, 1, 0]) == 1
    assert dot([0, 0, 2], [0, 0, 3]) == 6


def test_wedge_basis():
    e0, e1, e2 = np.eye(3)
    assert np.allclose(wedge(e1, e2), [1, 0, 0])
    assert np.allclose(wedge(e0, e2), [0, 1, 0])
    assert np.allclose(wedge(e1, e0), [0, 0, 1])
    assert isinstance(wedge(MinkVec3(1, 2, 3), MinkVec3(0, 1, 0)), MinkVec3)


@given(vec, vec)
def test_wedge_orthogonal_and_antisymmetric(a, b):
    w = np.asarray(wedge(a, b))
    assert np.allclose(w, -np.asarray(wedge(b, a)))
    tol = 1e-9 * (1 + np.abs(a).max() ** 2 * np.abs(b).max())
    assert abs(dot(a, w)) <= tol and abs(dot(b, w)) <= tol


@given(vec, vec, vec)
def test_double_wedge_identity(a, b, c):
    # a ^ (b ^ c) = (a.b) c - (a.c) b in the (-,+,+) metric
    lhs = np.asarray(wedge(a, wedge(b, c)))
    rhs = dot(a, b) * c - dot(a, c) * b
    assert np.allclose(lhs, rhs, atol=1e-8 * (1 + np.abs(lhs).max()))


def test_broadcasting():
    a = np.random.default_rng(0).normal(size=(3, 5))
    assert dot(a, a).shape == (5,)
    assert np.asarray(wedge(a, a)).shape == (3, 5)


def test_phi_linear_and_context():
    ctx = PhiContext.from_initial(0.5, 0.3, 0.2)
    assert ctx.delta0_sq == pytest.approx(4 * 0.5 * 0.7 + 0.09)
    u, v = np.array([1.0, 2.0, -1.0]), np.array([0.5, -1.0, 3.0])
    assert phi(2 * u + v, ctx) == pytest.approx(2 * phi(u, ctx) + phi(v, ctx))
    assert phi([1, 1, 0], ctx) == pytest.approx(1.0)


def test_minkvec_array_roundtrip():
    v = MinkVec3(1.0, 2.0, 3.0)
    assert np.array_equal(np.asarray(v), [1, 2, 3])
    assert MinkVec3.from_array(np.asarray(v)) == v
    assert v.is_real and not MinkVec3(1j, 0, 0).is_real


def test_coefficients_validation():
    ok = MasterEqCoefficients.from_values(1, 2, 0.5, -1, -2, -2, 0)
    assert ok.validate("physical") is ok
    for kw in ({"theta0": -1}, {"theta1": 2.5}, {"eta0": 0.5}, {"eta1": -3}, {"eta1": 2.5}):
        with pytest.raises(DomainViolation):
            ok.replace(**kw).validate("physical")
    ok.replace(theta1=5).validate("raw")
    with pytest.raises(DomainViolation):
        ok.replace(gamma=float("nan")).validate("raw")
    with pytest.raises(KeyError):
        ok.replace(zeta=1)


def test_coefficients_as_dict_roundtrip():
    c = MasterEqCoefficients.from_values(1, 2, 0.5, -1, -2, -2, 0.3)
    assert MasterEqCoefficients.from_values(**c.as_dict()) == c
    assert c.scale() == 2
