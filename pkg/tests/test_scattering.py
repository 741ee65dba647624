import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlsasym.data import InitialData, sech_reflection_modulus
from nlsasym.grid import ComplexGrid1D, DecayError
from nlsasym.scattering import (local_nu_omega, read_scattering, reflection_grid, transfer_matrix,
                                write_scattering)


def test_unitarity_sech_and_gaussian(sech_sd, gauss_sd):
    assert sech_sd.unitarity_residual <= 1e-8
    assert gauss_sd.unitarity_residual <= 1e-8


def test_sech_modulus_closed_form(sech_sd):
    ref = sech_reflection_modulus(0.5, sech_sd.zs)
    assert np.max(np.abs(np.abs(sech_sd.r_vals) - ref)) <= 1e-8


@given(st.floats(0.05, 0.95), st.floats(-3, 3))
def test_sech_modulus_any_amplitude(amp, z):
    q0 = InitialData("sech", amp).sample(dx=0.01)
    sd = reflection_grid(q0, np.linspace(z - 0.02, z + 0.02, 5))
    assert abs(abs(sd.r_vals[2]) - sech_reflection_modulus(amp, z)) <= 1e-7


def test_born_limit_gaussian():
    # small data: |r(z)| ~ |int q0 e^{2ixz} dx| = A sqrt(pi) e^{-z^2}
    A = 1e-3
    zs = np.linspace(-2, 2, 9)
    sd = reflection_grid(InitialData("gaussian", A).sample(dx=0.01), zs)
    born = A * math.sqrt(math.pi) * np.exp(-zs**2)
    assert np.max(np.abs(np.abs(sd.r_vals) - born) / born) < 1e-5


def test_zero_data(zero_sd):
    assert np.all(zero_sd.r_vals == 0)
    assert np.all(zero_sd.F_vals == 0)


def test_r_is_translation_covariant():
    # shifting q0 by s multiplies r by a unimodular phase
    zs = np.linspace(-1, 1, 11)
    r0 = reflection_grid(InitialData("sech", 0.4).sample(dx=0.01), zs).r_vals
    r1 = reflection_grid(InitialData("sech", 0.4, center=1.5).sample(dx=0.01), zs).r_vals
    assert np.max(np.abs(np.abs(r0) - np.abs(r1))) < 1e-9


def test_round_trip(tmp_path, sech_sd):
    write_scattering(sech_sd, tmp_path / "s.csv", tmp_path / "s.json")
    back = read_scattering(tmp_path / "s.csv", tmp_path / "s.json")
    assert np.allclose(back.r_vals, sech_sd.r_vals, rtol=0, atol=1e-15)
    assert back.tol == sech_sd.tol


def test_local_nu_omega(sech_sd):
    nu, om = local_nu_omega(sech_sd, 0.3)
    r0 = complex(sech_sd.r(0.3))
    assert math.isclose(nu, -math.log(1 - abs(r0) ** 2) / (2 * math.pi), rel_tol=1e-14)
    assert -math.pi < om <= math.pi
    with pytest.raises(ValueError):
        local_nu_omega(sech_sd, 7.0)


def test_rejects_truncated_data():
    q0 = ComplexGrid1D.from_function(lambda x: 0.5 / np.cosh(x), -3, 3, 601)
    with pytest.raises(DecayError):
        transfer_matrix(q0, [0.0])


def test_rejects_bad_z_grid():
    with pytest.raises(ValueError):
        reflection_grid(InitialData("sech", 0.5).sample(dx=0.01), [0.0, 1.0, 0.5, 2.0, 3.0])
