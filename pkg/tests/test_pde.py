import math

import numpy as np
import pytest

from nlsasym.data import InitialData
from nlsasym.grid import ComplexGrid1D
from nlsasym.linear import exact_evolution
from nlsasym.pde import BoxContaminationError, evolve, mass, momentum, spectral_eval, write_snapshots


def test_zero_stays_zero():
    q0 = InitialData("zero", 0.0).sample_periodic(20.0, 128)
    for s in evolve(q0, [1.0, 2.0], dt=0.1):
        assert np.all(s.field.vals == 0)


@pytest.mark.parametrize("A,m", [(0.7, 3), (0.3, -5)])
def test_plane_wave_exact(A, m):
    # q = A e^{i(kx - (k^2 + 2A^2) t)} solves i q_t + q_xx - 2|q|^2 q = 0 exactly
    L, n = 10.0, 64
    k = math.pi * m / L
    q0 = ComplexGrid1D.periodic(lambda x: A * np.exp(1j * k * x), L, n)
    t = 3.7
    s = evolve(q0, [t], dt=0.01, edge_tol=None)[0]
    ref = A * np.exp(1j * (k * q0.xs - (k * k + 2 * A * A) * t))
    assert np.max(np.abs(s.field.vals - ref)) < 1e-11


def test_linear_limit():
    # amplitude 0.01: the cubic term is ~1e-6 relative over t = 10
    A = 0.01
    q0 = InitialData("gaussian", A).sample_periodic(200.0, 4096)
    s = evolve(q0, [10.0], dt=0.005)[0]
    lin = exact_evolution(q0, q0.xs, 10.0, method="fft")
    assert np.max(np.abs(s.field.vals - lin)) <= 1e-4 * A * 10


def _strang_ratio():
    q0 = InitialData("sech", 0.5).sample_periodic(40.0, 512)
    ref = evolve(q0, [3.0], dt=0.05 / 64, edge_tol=None)[0].field.vals
    e1 = np.max(np.abs(evolve(q0, [3.0], dt=0.05, edge_tol=None)[0].field.vals - ref))
    e2 = np.max(np.abs(evolve(q0, [3.0], dt=0.025, edge_tol=None)[0].field.vals - ref))
    return e1 / e2


def test_strang_order():
    assert 3.6 <= _strang_ratio() <= 4.4


def test_conservation_short_run():
    q0 = InitialData("gaussian", 0.5, phase_slope=0.4).sample_periodic(400.0, 8192)
    states = evolve(q0, [5.0, 10.0], dt=0.01)
    m0, p0 = mass(q0), momentum(q0)
    for s in states:
        assert abs(mass(s.field) - m0) <= 1e-12 * m0
        assert abs(momentum(s.field) - p0) <= 1e-10


def test_targets_hit_exactly():
    q0 = InitialData("sech", 0.3).sample_periodic(30.0, 256)
    states = evolve(q0, [0.37, 1.0], dt=0.1)
    assert [s.t for s in states] == [0.37, 1.0]
    # shortened steps match a uniform run that lands on the target
    direct = evolve(q0, [0.37], dt=0.037)[0]
    assert np.max(np.abs(states[0].field.vals - direct.field.vals)) < 1e-3


def test_box_contamination_detected():
    q0 = InitialData("sech", 0.5).sample_periodic(15.0, 256)
    with pytest.raises(BoxContaminationError):
        evolve(q0, [20.0], dt=0.05)


def test_bad_targets():
    q0 = InitialData("sech", 0.5).sample_periodic(15.0, 256)
    with pytest.raises(ValueError):
        evolve(q0, [2.0, 1.0])
    with pytest.raises(ValueError):
        evolve(q0, [1.0], dt=0)


def test_spectral_eval_on_grid_and_between():
    q0 = InitialData("gaussian", 0.5).sample_periodic(20.0, 512)
    assert np.max(np.abs(spectral_eval(q0, q0.xs[::7]) - q0.vals[::7])) < 1e-12
    assert abs(spectral_eval(q0, [0.123])[0] - 0.5 * math.exp(-0.123**2)) < 1e-12


def test_snapshot_csv(tmp_path):
    q0 = InitialData("sech", 0.5).sample_periodic(20.0, 64)
    states = evolve(q0, [0.5], dt=0.1, edge_tol=None)
    write_snapshots(states, tmp_path / "s.csv", stride=2)
    arr = np.loadtxt(tmp_path / "s.csv", delimiter=",", skiprows=1)
    assert arr.shape == (32, 4) and np.all(arr[:, 0] == 0.5)
