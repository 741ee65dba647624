import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlsasym.alpha import compute_alpha_set
from nlsasym.asymptotics import ConsistencyError, beta_value, predict, q_leading, theta_at_z0, write_predictions


@given(st.floats(1e-3, 0.99))
def test_beta_modulus_and_argument(r):
    F = math.log1p(-r * r)
    nu = -F / (2 * math.pi)
    b = beta_value(nu, r)
    assert math.isclose(abs(b) ** 2, 2 * nu, rel_tol=1e-12)
    ref = math.pi / 4 - nu * math.log(2) - float(mp.arg(mp.gamma(-1j * nu)))
    assert abs(cmath.exp(1j * (cmath.phase(b) - ref)) - 1) < 1e-12


def test_beta_edge_cases():
    assert beta_value(0.0, 0.0) == 0
    with pytest.raises(ValueError):
        beta_value(1.0, 1.0)
    with pytest.raises(ConsistencyError):
        beta_value(0.5, 0.1)


def test_theta():
    z0 = 0.3
    # theta(z; z0) = 2 z^2 - 4 z z0 at its stationary point
    assert theta_at_z0(z0) == pytest.approx(2 * z0**2 - 4 * z0 * z0)


def test_leading_term_scaling(sech_lp):
    t1, t2 = 100.0, 400.0
    q1 = q_leading(sech_lp, -4 * t1 * sech_lp.z0, t1)
    q2 = q_leading(sech_lp, -4 * t2 * sech_lp.z0, t2)
    assert math.isclose(abs(q1) / abs(q2), 2.0, rel_tol=1e-12)
    assert math.isclose(abs(q1) ** 2 * t1, sech_lp.nu / 2, rel_tol=1e-12)


def test_predict_checks_and_csv(sech_lp, tmp_path):
    aset = compute_alpha_set(sech_lp)
    t = 50.0
    p = predict(sech_lp, aset, -4 * t * sech_lp.z0, t)
    assert abs(p.alpha1_term) < 1e-12 and p.value == p.q_leading + p.alpha1_term
    with pytest.raises(ValueError):
        predict(sech_lp, aset, 0.0, t)
    with pytest.raises(ValueError):
        predict(sech_lp, aset, -4 * 0.5 * sech_lp.z0, 0.5)
    write_predictions([p], tmp_path / "p.csv")
    arr = np.loadtxt(tmp_path / "p.csv", delimiter=",", skiprows=1, ndmin=2)
    assert arr.shape == (1, 5)
