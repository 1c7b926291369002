import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from gaussevo.algebra import MasterEqCoefficients
from gaussevo.catalog import EquationClass, canonical
from gaussevo.errors import BlowUp, NonNormalizable
from gaussevo.evolution import (
    GaussianParams,
    closed_form_arrays,
    density_at,
    evolve_closed_form,
    evolve_matrix_pipeline,
    evolve_ode,
    min_nu_scan,
    ode_trajectory,
    scan_horizon,
    second_moments,
    trajectory,
    wigner_at,
    wigner_factors,
)
from gaussevo.stationary import stationary_params

from helpers import draw_init, draw_physical, rel_err

C = MasterEqCoefficients.from_values(0.7, 2.0, 0.4, -0.3, -1.5, -0.4, 0.6)
INIT = GaussianParams(0.6, 0.3, 0.2)


def test_from_b0():
    p = GaussianParams.from_b0(0.6, 1.0)
    assert (p.mu, p.kappa, p.nu) == pytest.approx((5 / 12, 1.0, 0.6 - 5 / 12))
    assert p.s == pytest.approx(0.6)


def test_identity_at_zero():
    for form in ("printed", "regular"):
        mu, k, nu = closed_form_arrays(C, INIT, 0.0, form=form)
        assert (mu, k, nu) == pytest.approx((INIT.mu, INIT.kappa, INIT.nu), abs=1e-14)


def test_printed_and_regular_forms_agree():
    t = np.linspace(0, 15, 61)
    a = np.array(closed_form_arrays(C, INIT, t, form="printed"))
    b = np.array(closed_form_arrays(C, INIT, t, form="regular"))
    assert rel_err(a, b) < 1e-12


def test_three_routes_single_point():
    cf = evolve_closed_form(C, INIT, 2.5)
    for other in (evolve_ode(C, INIT, 2.5), evolve_matrix_pipeline(C, INIT, 2.5)):
        assert (other.mu, other.kappa, other.nu) == pytest.approx((cf.mu, cf.kappa, cf.nu), rel=1e-8)


def test_near_critical_uses_regular_form():
    crit = C.replace(theta1=0.0, theta2=2.0 + 1e-9)
    t = np.linspace(0, 8, 17)
    cf = np.array(closed_form_arrays(crit, INIT, t))
    ode = np.array(ode_trajectory(crit, INIT, t))
    assert rel_err(cf, ode) < 1e-8


def test_converges_to_stationary_state():
    rng = np.random.default_rng(4)
    for _ in range(5):
        c, init = draw_physical(rng), draw_init(rng)
        rep = stationary_params(c)
        end = evolve_closed_form(c, init, 60.0 / c.gamma)
        assert (end.mu, end.kappa, end.nu) == pytest.approx((rep.mu_st, rep.kappa_st, rep.nu_st), rel=1e-6, abs=1e-8)


def test_kl_long_time():
    # KL with b = 1 relaxes to mu = 1/(4b'), kappa = 0 with Gamma = (2b, 0, 0)
    kl = canonical(EquationClass.KL, {"gamma": 1.0, "omega0": 1.0, "b": 1.0})
    end = evolve_closed_form(kl, GaussianParams(1.0, 1.0, 1.0), 30.0)
    assert end.mu == pytest.approx(0.25, abs=1e-9)
    assert end.kappa == pytest.approx(0.0, abs=1e-9)
    assert end.nu == pytest.approx(0.75, abs=1e-9)


def test_ode_blow_up_detected():
    unstable = C.replace(gamma=-0.5)
    with pytest.raises(BlowUp, match="near t"):
        ode_trajectory(unstable, GaussianParams(1.0, 0.0, 1.0), [0.0, 100.0])


def test_ode_argument_checks():
    with pytest.raises(ValueError):
        ode_trajectory(C, INIT, [1.0, 0.5])
    with pytest.raises(ValueError):
        ode_trajectory(C, INIT, [1.0], dt=0)
    with pytest.raises(ValueError):
        closed_form_arrays(C, GaussianParams(0.0, 0.0, 1.0), 1.0)


def test_density_normalized():
    p = evolve_closed_form(C, INIT, 1.3)
    total, _ = integrate.quad(lambda q: density_at(p, q, 0.0).real, -np.inf, np.inf)
    assert total == pytest.approx(1.0, rel=1e-10)


def test_wigner_is_fourier_transform_of_density():
    p = GaussianParams(0.7, 0.4, 0.3)
    for Q, P in ((0.0, 0.0), (0.3, -0.5), (-1.0, 0.8)):
        re, _ = integrate.quad(lambda r: (density_at(p, Q, r) * np.exp(-1j * P * r)).real, -np.inf, np.inf)
        assert wigner_at(p, Q, P) == pytest.approx(re / (2 * np.pi), rel=1e-9)
    total, _ = integrate.dblquad(lambda P, Q: wigner_at(p, Q, P), -8, 8, -8, 8)
    assert total == pytest.approx(1.0, rel=1e-8)


def test_wigner_factorizes_when_kappa_zero():
    p = GaussianParams(0.5, 0.0, 0.8)
    f, g = wigner_factors(p)
    Q, P = np.meshgrid(np.linspace(-2, 2, 7), np.linspace(-2, 2, 5))
    assert np.allclose(wigner_at(p, Q, P), f(Q) * g(P))


def test_wigner_non_normalizable():
    with pytest.raises(NonNormalizable):
        wigner_at(GaussianParams(0.5, 0.0, -0.6), 0.0, 0.0)


def test_second_moments_from_wigner():
    p = GaussianParams(0.7, 0.4, 0.3)
    m = second_moments(p)
    lim = 10

    def mom(fn):
        return integrate.dblquad(lambda P, Q: fn(Q, P) * wigner_at(p, Q, P), -lim, lim, -lim, lim)[0]

    assert m.xx == pytest.approx(mom(lambda q, _: q * q), rel=1e-7)
    assert m.pp == pytest.approx(mom(lambda _, pp: pp * pp), rel=1e-7)
    assert m.xp_sym == pytest.approx(mom(lambda q, pp: q * pp), rel=1e-7)


@given(st.floats(0.01, 10), st.floats(-5, 5), st.floats(-2, 5))
def test_uncertainty_product_formula(mu, kappa, nu):
    assert second_moments(GaussianParams(mu, kappa, nu)).uncertainty_product == pytest.approx(
        0.25 + nu / (4 * mu), rel=1e-9, abs=1e-12
    )


def test_min_nu_scan():
    init = GaussianParams.from_b0(0.6, 1.0)
    cl = canonical(EquationClass.CL, {"gamma": 1.0, "theta0": 2.0, "theta1": 0.2, "b": 0.6})
    t_min, nu_min = min_nu_scan(cl, init)
    tr = trajectory(cl, init, np.linspace(0, scan_horizon(cl), 20001))
    assert nu_min <= tr.nu.min() + 1e-12
    assert nu_min == pytest.approx(tr.nu.min(), abs=1e-6)
    assert float(closed_form_arrays(cl, init, t_min)[2]) == pytest.approx(nu_min)
    assert scan_horizon(cl.replace(gamma=0.1)) == pytest.approx(100.0)


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 8.0))
def test_routes_agree_property(seed, t):
    rng = np.random.default_rng(seed)
    c, init = draw_physical(rng), draw_init(rng)
    cf = evolve_closed_form(c, init, t)
    mp = evolve_matrix_pipeline(c, init, t)
    assert rel_err((mp.mu, mp.kappa, mp.nu), (cf.mu, cf.kappa, cf.nu)) < 1e-8
