import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlsasym import rhp

Z0 = 0.3


def test_jump_condition(sech_sd):
    s = np.random.default_rng(7).uniform(-5.5, Z0 - 0.01, 20)
    assert np.max(rhp.jump_residual(sech_sd, Z0, s, method="gauss")) <= 1e-6


def test_jump_condition_quad(sech_sd):
    s = np.array([-2.0, -0.4, 0.1])
    assert np.max(rhp.jump_residual(sech_sd, Z0, s, method="quad")) <= 1e-6


@given(st.floats(-4, 4), st.floats(0.01, 3), st.booleans())
def test_conjugation_symmetry(x, y, lower):
    z = complex(x, -y if lower else y)
    d = rhp.delta(sech_sd_cache(), Z0, np.array([z, z.conjugate()]))
    assert abs(d[0] * np.conj(d[1]) - 1) <= 1e-6


_cache = {}


def sech_sd_cache():
    if "sd" not in _cache:
        from conftest import scatter
        _cache["sd"] = scatter("sech", 0.5)
    return _cache["sd"]


def test_quad_and_gauss_agree(sech_sd):
    z = np.array([0.7 + 0.2j, -1 - 1j, Z0 + 1e-3j, 4 + 0.01j])
    assert np.max(np.abs(rhp.chi(sech_sd, Z0, z, "quad") - rhp.chi(sech_sd, Z0, z, "gauss"))) < 1e-9


def test_delta_tends_to_one(sech_sd):
    assert abs(rhp.delta(sech_sd, Z0, 1e4 + 1e4j) - 1) < 1e-4


def test_delta_trivial_for_zero_data(zero_sd):
    assert np.allclose(rhp.delta(zero_sd, Z0, np.array([1j, -2 - 0.5j])), 1, atol=1e-15)


def test_cz0_forms_and_chi_reg(sech_sd):
    # the three forms discretize F' differently; they agree to O(dz^4)
    from conftest import scatter

    coarse = scatter("sech", 0.5, np.linspace(-6, 6, 301))
    gaps = []
    for sd in (coarse, sech_sd):
        direct, byparts = rhp.cz0_forms(sd, Z0)
        assert abs(direct - byparts) < 2e-5
        gaps.append(abs(direct - cmath.exp(-rhp.chi_reg(sd, Z0))))
    assert gaps[1] < 2e-6
    assert gaps[0] / gaps[1] > 12


def test_f_is_one_at_z0(sech_lp, sech_sd):
    assert abs(rhp.f_log(sech_sd, Z0, Z0 + 0j)) < 1e-14
    w = rhp.f_factor(sech_lp, sech_sd, Z0 + 1e-7 * np.exp(0.3j))
    assert abs(w - 1) < 1e-5


def test_f_matches_definition(sech_lp, sech_sd):
    # f = c(z0) delta(z) (z - z0)^{i F(z0) / 2 pi}
    z = np.array([0.9 + 0.4j, -0.5 - 0.2j])
    F0 = sech_lp.F0
    ref = sech_lp.c0 * rhp.delta(sech_sd, Z0, z) * np.exp(1j * F0 / (2 * math.pi) * np.log(z - Z0))
    # c0 comes from the tabulated F', f from the F spline: O(dz^4) apart
    assert np.max(np.abs(rhp.f_factor(sech_lp, sech_sd, z) - ref)) < 2e-6


@pytest.mark.parametrize("phi", [math.pi / 8, -7 * math.pi / 8])
def test_holder_exponent_of_f_expansion(sech_lp, sech_sd, phi):
    rho = np.geomspace(1e-3, 0.1, 12)
    z = Z0 + rho * np.exp(1j * phi)
    for sign in (1, -1):
        dev = np.abs(rhp.f_factor(sech_lp, sech_sd, z, 2 * sign) - rhp.f_expansion(sech_lp, z, sign))
        p, mu = rhp.fit_holder(rho, dev)
        assert p >= 0.5


@pytest.mark.parametrize("phi", [math.pi / 8, -7 * math.pi / 8])
def test_holder_exponent_of_f_squared(sech_lp, sech_sd, phi):
    rho = np.geomspace(1e-3, 0.1, 12)
    z = Z0 + rho * np.exp(1j * phi)
    for sign in (1, -1):
        p, _ = rhp.fit_holder(rho, np.abs(rhp.f_factor(sech_lp, sech_sd, z, 2 * sign) - 1))
        assert p >= 0.5


@pytest.mark.parametrize("phi", [math.pi / 8, math.pi / 2, -7 * math.pi / 8])
def test_delta_local_model(sech_lp, sech_sd, phi):
    rho = np.geomspace(1e-3, 0.1, 12)
    z = Z0 + rho * np.exp(1j * phi)
    model = np.exp(rhp.chi_reg(sech_sd, Z0) + sech_lp.F0 / (2j * math.pi) * np.log(z - Z0))
    p, _ = rhp.fit_holder(rho, np.abs(rhp.delta(sech_sd, Z0, z) - model))
    assert p >= 0.5


def test_f_expansion_reciprocal(sech_lp):
    z = Z0 + np.array([0.2 + 0.1j, -0.4 - 0.3j, 1j])
    assert np.allclose(rhp.f_expansion(sech_lp, z, 1) * rhp.f_expansion(sech_lp, z, -1), 1, atol=1e-14)


def test_delta_decay_rate(sech_sd):
    R = np.array([10.0, 100.0, 1000.0])
    dev = np.abs(rhp.delta(sech_sd, Z0, R * np.exp(1j * math.pi / 3)) - 1)
    assert np.all(dev * R < 2 * dev[0] * R[0])


def test_cut_is_rejected(sech_lp, sech_sd):
    with pytest.raises(rhp.CutError):
        rhp.f_factor(sech_lp, sech_sd, np.array([Z0 - 1.0 + 0j]))
    with pytest.raises(ValueError):
        rhp.f_expansion(sech_lp, Z0 + 1j, 2)


def test_local_params_consistency(sech_lp):
    assert math.isclose(abs(sech_lp.beta) ** 2, 2 * sech_lp.nu, rel_tol=1e-12)
    assert math.isclose(sech_lp.F0, -2 * math.pi * sech_lp.nu, rel_tol=1e-12)
    assert abs(sech_lp.a - 0.5 - 1j * sech_lp.nu) < 1e-14


def test_fit_holder_exact_power():
    rho = np.geomspace(1e-3, 1, 10)
    p, mu = rhp.fit_holder(rho, 3 * rho**0.75)
    assert abs(p - 0.75) < 1e-12 and abs(mu - 3) < 1e-11


def test_cz0_stable_under_refinement(sech_sd):
    from conftest import scatter

    fine = scatter("sech", 0.5, np.linspace(-6, 6, 1201))
    assert abs(rhp.cz0_integral(fine, Z0) - rhp.cz0_integral(sech_sd, Z0)) < 1e-6


def test_cz0_forms_at_origin(sech_sd):
    direct, byparts = rhp.cz0_forms(sech_sd, 0.0)
    assert abs(direct - byparts) < 1e-5


def test_f_bounded_by_reflection_sup(sech_lp, sech_sd):
    bound = 1.0 / (1.0 - np.max(np.abs(sech_sd.r_vals)) ** 2)
    rng = np.random.default_rng(3)
    z = Z0 + rng.uniform(0.01, 4, 40) * np.exp(1j * rng.uniform(-3.1, 3.1, 40))
    for power in (1, -1):
        assert np.max(np.abs(rhp.f_factor(sech_lp, sech_sd, z, power))) <= bound


def test_zero_data_is_trivial(zero_sd):
    lp = rhp.local_params(zero_sd, Z0)
    assert lp.c0 == 1
    z = np.array([Z0 + 0.5j, -1 - 1j])
    assert np.allclose(rhp.f_factor(lp, zero_sd, z), 1, atol=1e-15)
